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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "risnf/errors.hpp"
#include "risnf/spectral.hpp"

#include "lapack.hpp"

namespace risnf
{
    namespace
    {
        void require_finite(const CMatrix &m, const char *what)
        {
            if (!m.allFinite())
                fail(ErrorKind::InvalidArgument, std::string(what) + " has non-finite entries");
        }

        // LAPACK ascending order -> descending, ties keep LAPACK order
        std::vector<Eigen::Index> descending_order(const RVector &ascending)
        {
            std::vector<Eigen::Index> order(static_cast<std::size_t>(ascending.size()));
            std::iota(order.begin(), order.end(), Eigen::Index{0});
            std::stable_sort(order.begin(), order.end(),
                             [&](Eigen::Index a, Eigen::Index b) { return ascending(a) > ascending(b); });
            return order;
        }

        RVector run_heevd(CMatrix &work, char jobz)
        {
            const auto n = static_cast<lapack_int>(work.rows());
            RVector w(work.rows());
            if (n == 0)
                return w;
            const lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, jobz, 'L', n, work.data(), n, w.data());
            if (info != 0)
                fail(ErrorKind::DegenerateInput, "zheevd failed with info " + std::to_string(info));
            return w;
        }

        double log_abs_det(const Eigen::PartialPivLU<CMatrix> &lu)
        {
            double s = 0.0;
            const CMatrix &m = lu.matrixLU();
            for (Eigen::Index i = 0; i < m.rows(); ++i)
                s += std::log(std::abs(m(i, i)));
            return s;
        }

        // Scaled Denman-Beavers iteration
        CMatrix denman_beavers_sqrt(const CMatrix &a)
        {
            const Eigen::Index n = a.rows();
            CMatrix y = a;
            CMatrix z = CMatrix::Identity(n, n);
            for (int iter = 0; iter < 100; ++iter)
            {
                Eigen::PartialPivLU<CMatrix> lu_y(y), lu_z(z);
                const double mu = iter < 8 ? std::exp(-(log_abs_det(lu_y) + log_abs_det(lu_z)) / (2.0 * static_cast<double>(n)))
                                           : 1.0;
                CMatrix y_next = 0.5 * (mu * y + lu_z.inverse() / mu);
                CMatrix z_next = 0.5 * (mu * z + lu_y.inverse() / mu);
                const double change = (y_next - y).norm();
                y = std::move(y_next);
                z = std::move(z_next);
                if (change <= 1e-14 * y.norm())
                    break;
            }
            return y;
        }
    }

    CMatrix hermitian_part(const CMatrix &matrix) { return 0.5 * (matrix + matrix.adjoint()); }

    double relative_hermitian_defect(const CMatrix &matrix)
    {
        const double scale = matrix.cwiseAbs().maxCoeff();
        if (scale == 0.0)
            return 0.0;
        return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff() / scale;
    }

    EigenSystem hermitian_eig(const CMatrix &matrix)
    {
        require(matrix.rows() == matrix.cols(), "hermitian_eig needs a square matrix");
        require_finite(matrix, "hermitian_eig input");
        CMatrix work = hermitian_part(matrix);
        const RVector ascending = run_heevd(work, 'V');
        const auto order = descending_order(ascending);

        EigenSystem eig{RVector(matrix.rows()), CMatrix(matrix.rows(), matrix.cols())};
        for (std::size_t i = 0; i < order.size(); ++i)
        {
            const auto dst = static_cast<Eigen::Index>(i);
            eig.values(dst) = ascending(order[i]);
            eig.vectors.col(dst) = work.col(order[i]);
        }
        return eig;
    }

    RVector hermitian_eigenvalues(const CMatrix &matrix)
    {
        require(matrix.rows() == matrix.cols(), "hermitian_eigenvalues needs a square matrix");
        require_finite(matrix, "hermitian_eigenvalues input");
        CMatrix work = hermitian_part(matrix);
        const RVector ascending = run_heevd(work, 'N');
        return ascending.reverse();
    }

    CMatrix psd_sqrt(const CMatrix &matrix)
    {
        const EigenSystem eig = hermitian_eig(matrix);
        const Eigen::Index n = eig.values.size();
        if (n == 0)
            return CMatrix(0, 0);
        const double top = std::max(eig.values(0), 0.0);
        const double floor = static_cast<double>(n) * std::numeric_limits<double>::epsilon() * top;
        RVector root(n);
        for (Eigen::Index i = 0; i < n; ++i)
        {
            const double v = eig.values(i);
            if (v < -1e-10 * top || (top == 0.0 && v < 0.0))
                fail(ErrorKind::NotPsd, "eigenvalue " + std::to_string(v) + " below -1e-10 * lambda_max");
            root(i) = v > floor ? std::sqrt(v) : 0.0;
        }
        const CMatrix s = eig.vectors * root.asDiagonal() * eig.vectors.adjoint();
        return hermitian_part(s);
    }

    CMatrix principal_sqrt(const CMatrix &matrix)
    {
        require(matrix.rows() == matrix.cols(), "principal_sqrt needs a square matrix");
        require_finite(matrix, "principal_sqrt input");
        const Eigen::Index n = matrix.rows();
        if (n == 0)
            return CMatrix(0, 0);

        CMatrix work = matrix;
        CVector w(n);
        CMatrix vr(n, n);
        const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', static_cast<lapack_int>(n), work.data(),
                                              static_cast<lapack_int>(n), w.data(), nullptr, 1, vr.data(),
                                              static_cast<lapack_int>(n));
        if (info != 0)
            return denman_beavers_sqrt(matrix);

        for (Eigen::Index i = 0; i < n; ++i)
            if (w(i).real() <= 0.0 && std::abs(w(i).imag()) <= 1e-14 * std::abs(w(i)))
                fail(ErrorKind::Domain, "principal square root undefined for eigenvalues on the negative real axis");

        const Eigen::PartialPivLU<CMatrix> lu(vr);
        if (lu.rcond() < 1e-8)
            return denman_beavers_sqrt(matrix);

        CVector root = w.unaryExpr([](const cdouble &v) { return std::sqrt(v); });
        CMatrix s = vr * root.asDiagonal() * lu.inverse();
        if ((s * s - matrix).norm() > 1e-8 * matrix.norm())
            return denman_beavers_sqrt(matrix);
        return s;
    }

    RankReport effective_rank(const RVector &values, double threshold)
    {
        require(threshold > 0.0 && threshold < 1.0, "rank threshold must lie in (0, 1)");
        RankReport report;
        report.threshold = threshold;
        report.eigenvalues_db.resize(values.size());
        for (Eigen::Index i = 0; i < values.size(); ++i)
            report.eigenvalues_db(i) = values(i) > 1e-30 ? linear_to_db(values(i)) : -300.0;
        if (values.size() == 0)
            return report;
        const double top = values.maxCoeff();
        if (top <= 0.0)
            return report;
        for (Eigen::Index i = 0; i < values.size(); ++i)
            if (values(i) >= threshold * top)
                ++report.rank;
        return report;
    }

    RankReport effective_rank(const EigenSystem &eig, double threshold) { return effective_rank(eig.values, threshold); }

    SubspaceBasis select_subspace(const EigenSystem &eig, double threshold, CorrelationKind kind, bool with_coupling)
    {
        const std::size_t rank = effective_rank(eig.values, threshold).rank;
        if (rank == 0)
            fail(ErrorKind::EmptySubspace, "no eigenvalue reaches the selection threshold");
        SubspaceBasis out;
        out.basis = eig.vectors.leftCols(static_cast<Eigen::Index>(rank));
        out.kind = kind;
        out.with_coupling = with_coupling;
        out.threshold = threshold;
        return out;
    }

    RVector kron_eigs(const std::vector<RVector> &factors)
    {
        require(!factors.empty(), "kron_eigs needs at least one factor");
        RVector out = factors.front();
        for (std::size_t f = 1; f < factors.size(); ++f)
        {
            const RVector &next = factors[f];
            RVector merged(out.size() * next.size());
            for (Eigen::Index i = 0; i < out.size(); ++i)
                merged.segment(i * next.size(), next.size()) = out(i) * next;
            out = std::move(merged);
        }
        return out;
    }

    CVector apply_kron3(const KronOperand &a, const KronOperand &b, const KronOperand &c, const CVector &x)
    {
        const Eigen::Index na = a.cols(), nb = b.cols(), nc = c.cols();
        const Eigen::Index ma = a.rows(), mb = b.rows(), mc = c.rows();
        require(x.size() == na * nb * nc, "apply_kron3: vector length does not match the factor dimensions");

        // Innermost factor acts on the nc x (nb*na) unfolding
        CMatrix step1 = Eigen::Map<const CMatrix>(x.data(), nc, nb * na);
        if (c.matrix)
            step1 = (*c.matrix) * step1;

        // Middle factor acts on each mc x nb slice from the right
        CMatrix step2(mc * mb, na);
        for (Eigen::Index i = 0; i < na; ++i)
        {
            Eigen::Map<const CMatrix> slice(step1.data() + i * mc * nb, mc, nb);
            Eigen::Map<CMatrix> out(step2.data() + i * mc * mb, mc, mb);
            if (b.matrix)
                out.noalias() = slice * b.matrix->transpose();
            else
                out = slice;
        }

        // Outermost factor acts on the (mc*mb) x na unfolding from the right
        CVector result(ma * mb * mc);
        Eigen::Map<CMatrix> result_view(result.data(), mc * mb, ma);
        if (a.matrix)
            result_view.noalias() = step2 * a.matrix->transpose();
        else
            result_view = step2;
        return result;
    }

    CMatrix kron(const CMatrix &a, const CMatrix &b)
    {
        CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            for (Eigen::Index j = 0; j < a.cols(); ++j)
                out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        return out;
    }
}
