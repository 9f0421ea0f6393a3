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

#include <cmath>
#include <string>

#include "risnf/errors.hpp"
#include "risnf/spectral.hpp"
#include "risnf/training.hpp"

namespace risnf
{
    namespace
    {
        cdouble dft_entry(std::size_t row, std::size_t col, std::size_t n)
        {
            const std::size_t idx = (row * col) % n; // exact phase index keeps entries unit modulus
            const double angle = -2.0 * pi * static_cast<double>(idx) / static_cast<double>(n);
            return {std::cos(angle), std::sin(angle)};
        }
    }

    TrainingDesign TrainingDesign::from_snr_db(std::size_t pilot_length, double snr_db, double noise_variance)
    {
        return {pilot_length, db_to_linear(snr_db) * noise_variance, noise_variance};
    }

    void validate(const TrainingDesign &design, std::size_t k, std::size_t n)
    {
        require(design.pilot_power > 0.0 && std::isfinite(design.pilot_power), "pilot power must be positive");
        require(design.noise_variance > 0.0 && std::isfinite(design.noise_variance), "noise variance must be positive");
        require(n > 0 && design.pilot_length % n == 0, "pilot length must be a multiple of the UE antenna count");
        if (design.pilot_length < k * n)
            fail(ErrorKind::UnderdeterminedDesign, "pilot length " + std::to_string(design.pilot_length) +
                                                       " is below K N = " + std::to_string(k * n));
    }

    PhaseSchedule make_phase_schedule(CMatrix phi)
    {
        require(phi.rows() > 0 && phi.cols() > 0, "phase schedule must be nonempty");
        for (Eigen::Index i = 0; i < phi.size(); ++i)
            require(std::abs(std::abs(phi(i)) - 1.0) <= 1e-12, "phase schedule entries must have unit modulus");
        return {std::move(phi)};
    }

    PhaseSchedule dft_phase_schedule(std::size_t k, std::size_t pilot_length, std::size_t n)
    {
        require(k >= 1 && n >= 1, "array sizes must be positive");
        require(pilot_length % n == 0, "pilot length must be a multiple of N");
        const std::size_t rows = pilot_length / n;
        require(rows >= k && rows % k == 0, "pilot length / N must be a positive multiple of K for the DFT schedule");
        PhaseSchedule s{CMatrix(rows, k)};
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < k; ++c)
                s.phi(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = dft_entry(r % k, c, k);
        return s;
    }

    PilotMatrix orthonormal_pilots(std::size_t n)
    {
        require(n >= 1, "pilot matrix needs at least one antenna");
        PilotMatrix p{CMatrix(n, n)};
        const double scale = 1.0 / std::sqrt(static_cast<double>(n));
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c)
                p.x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = scale * dft_entry(r, c, n);
        return p;
    }

    double FactoredGram::scaled_identity() const
    {
        if (ris.rows() == 0)
            return 0.0;
        const cdouble c = ris(0, 0);
        if (std::abs(c.imag()) > 1e-12 * std::abs(c) || c.real() <= 0.0)
            return 0.0;
        const double defect = (ris - c * CMatrix::Identity(ris.rows(), ris.cols())).cwiseAbs().maxCoeff();
        return defect <= 1e-12 * c.real() ? c.real() : 0.0;
    }

    FactoredGram gram(const PhaseSchedule &phi, std::size_t n, std::size_t m)
    {
        require(n >= 1 && m >= 1, "array sizes must be positive");
        FactoredGram g;
        g.ris = hermitian_part(static_cast<double>(n) * (phi.phi.adjoint() * phi.phi));
        g.identity_dim = static_cast<Eigen::Index>(n * m);
        return g;
    }

    CVector apply_adjoint(const PhaseSchedule &phi, const PilotMatrix &x, const ObservationBatch &obs)
    {
        const Eigen::Index n = x.size();
        const Eigen::Index m = obs.y.rows();
        const Eigen::Index intervals = phi.intervals();
        const Eigen::Index k = phi.ris_elements();
        require(obs.steps() == intervals * n, "observation count does not match the schedule and pilot length");

        // Column t: vec(Y_t (sqrt(N) X)^H), i.e. sum_n conj(x_n) kron y_{t,n}
        const CMatrix scaled_pilot_h = std::sqrt(static_cast<double>(n)) * x.x.adjoint();
        CMatrix g(n * m, intervals);
        for (Eigen::Index t = 0; t < intervals; ++t)
        {
            Eigen::Map<CMatrix> block(g.col(t).data(), m, n);
            block.noalias() = obs.y.middleCols(t * n, n) * scaled_pilot_h;
        }
        CVector out(k * n * m);
        Eigen::Map<CMatrix> out_view(out.data(), n * m, k);
        out_view.noalias() = g * phi.phi.conjugate();
        return out;
    }

    CMatrix assemble_training_matrix(const PhaseSchedule &phi, const PilotMatrix &x, std::size_t bs_antennas)
    {
        const Eigen::Index n = x.size();
        const auto m = static_cast<Eigen::Index>(bs_antennas);
        const Eigen::Index k = phi.ris_elements();
        require(k * n * m <= 512, "explicit training matrix limited to K N M <= 512");
        const Eigen::Index steps = phi.intervals() * n;
        const double s = std::sqrt(static_cast<double>(n));
        CMatrix q = CMatrix::Zero(steps * m, k * n * m);
        // Rows of step l: phi_t^T kron (sqrt(N) x_n)^T kron I_M
        for (Eigen::Index t = 0; t < phi.intervals(); ++t)
            for (Eigen::Index nn = 0; nn < n; ++nn)
            {
                const Eigen::Index l = t * n + nn;
                for (Eigen::Index kk = 0; kk < k; ++kk)
                    for (Eigen::Index a = 0; a < n; ++a)
                    {
                        const cdouble coeff = phi.phi(t, kk) * s * x.x(a, nn);
                        for (Eigen::Index mm = 0; mm < m; ++mm)
                            q(l * m + mm, kk * n * m + a * m + mm) = coeff;
                    }
            }
        return q;
    }
}
