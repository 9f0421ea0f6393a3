// SPDX-License-Identifier: Apache-2.0
//
// risnf: near-field RIS channel modelling and estimation library
// Copyright (C) 2026 The risnf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef RISNF_SPECTRAL_HPP
#define RISNF_SPECTRAL_HPP

#include <cstddef>
#include <vector>

#include "risnf/types.hpp"

namespace risnf
{
    inline constexpr double default_rank_threshold = 1e-5;

    // Eigenvalues sorted descending; columns of `vectors` follow that order.
    // Equal eigenvalues keep the order LAPACK produced them in.
    struct EigenSystem
    {
        RVector values;
        CMatrix vectors;
    };

    EigenSystem hermitian_eig(const CMatrix &matrix);

    // Descending eigenvalues only (cheaper than the full decomposition)
    RVector hermitian_eigenvalues(const CMatrix &matrix);

    // Hermitian PSD square root S with S*S = R. Eigenvalues down to
    // -1e-10 * lambda_max are clamped to zero; anything lower is rejected.
    // Eigenvalues under n * eps * lambda_max are treated as zero so roundoff
    // does not leak into the square root.
    CMatrix psd_sqrt(const CMatrix &matrix);

    // Principal square root of a general (diagonalizable or not) matrix whose
    // spectrum avoids the closed negative real axis.
    CMatrix principal_sqrt(const CMatrix &matrix);

    struct RankReport
    {
        std::size_t rank = 0;
        RVector eigenvalues_db; // 10 log10(lambda), floored at -300 dB
        double threshold = default_rank_threshold;
    };

    RankReport effective_rank(const RVector &descending_eigenvalues, double threshold = default_rank_threshold);
    RankReport effective_rank(const EigenSystem &eig, double threshold = default_rank_threshold);

    struct SubspaceBasis
    {
        CMatrix basis; // total x rank, orthonormal columns
        CorrelationKind kind = CorrelationKind::ExactClustered;
        bool with_coupling = false;
        double threshold = default_rank_threshold;

        std::size_t rank() const { return static_cast<std::size_t>(basis.cols()); }
        std::size_t dimension() const { return static_cast<std::size_t>(basis.rows()); }
    };

    // Eigenvectors whose eigenvalues reach threshold * lambda_1
    SubspaceBasis select_subspace(const EigenSystem &eig, double threshold = default_rank_threshold,
                                  CorrelationKind kind = CorrelationKind::ExactClustered, bool with_coupling = false);

    // All products taking one eigenvalue per factor, first factor outermost
    // (matching the index order of the Kronecker product).
    RVector kron_eigs(const std::vector<RVector> &factors);

    // max |A - A^H| / max |A|
    double relative_hermitian_defect(const CMatrix &matrix);

    CMatrix hermitian_part(const CMatrix &matrix);

    // One factor of a Kronecker product: either a dense matrix or an identity
    struct KronOperand
    {
        const CMatrix *matrix = nullptr;
        Eigen::Index identity_dim = 0;

        static KronOperand dense(const CMatrix &m) { return {&m, 0}; }
        static KronOperand identity(Eigen::Index n) { return {nullptr, n}; }
        Eigen::Index rows() const { return matrix ? matrix->rows() : identity_dim; }
        Eigen::Index cols() const { return matrix ? matrix->cols() : identity_dim; }
    };

    // (A kron B kron C) x without materializing the product; the entry of x
    // for multi-index (a, b, c) sits at a * (nb * nc) + b * nc + c.
    CVector apply_kron3(const KronOperand &a, const KronOperand &b, const KronOperand &c, const CVector &x);

    // Dense Kronecker product, for tests and small dense fallbacks
    CMatrix kron(const CMatrix &a, const CMatrix &b);
}

#endif
