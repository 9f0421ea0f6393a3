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

#include "risnf/errors.hpp"
#include "risnf/montecarlo.hpp"
#include "risnf/spectral.hpp"

namespace risnf
{
    CMatrix ChannelSampler::sample(Rng &rng) const
    {
        const CMatrix w = rng.complex_normal_matrix(rx_factor.cols(), tx_factor.cols());
        return rx_factor * w * tx_factor.transpose();
    }

    ChannelSampler ChannelSampler::from_correlations(const CMatrix &r_rx, const CMatrix &r_tx)
    {
        return {psd_sqrt(r_rx), psd_sqrt(r_tx)};
    }

    CMatrix sample_channel(const CMatrix &r_rx, const CMatrix &r_tx, Rng &rng)
    {
        return ChannelSampler::from_correlations(r_rx, r_tx).sample(rng);
    }

    ChannelRealization build_cascaded(const CMatrix &h, const CMatrix &f)
    {
        require(h.rows() == f.cols(), "H must be K x N and F must be M x K");
        const Eigen::Index k = h.rows(), n = h.cols(), m = f.rows();
        ChannelRealization out{h, f, CVector(k * n * m)};
        for (Eigen::Index kk = 0; kk < k; ++kk)
            for (Eigen::Index nn = 0; nn < n; ++nn)
                out.c.segment(kk * n * m + nn * m, m) = h(kk, nn) * f.col(kk);
        return out;
    }

    ObservationBatch noiseless_observations(const PhaseSchedule &phi, const PilotMatrix &x, const ChannelRealization &ch)
    {
        const Eigen::Index n = x.size();
        const Eigen::Index m = ch.f.rows();
        require(ch.h.cols() == n && ch.h.rows() == phi.ris_elements(), "channel does not match the training design");
        const CMatrix pilots = std::sqrt(static_cast<double>(n)) * x.x;
        ObservationBatch obs{CMatrix(m, phi.intervals() * n)};
        for (Eigen::Index t = 0; t < phi.intervals(); ++t)
        {
            const CMatrix hx = phi.phi.row(t).transpose().asDiagonal() * (ch.h * pilots);
            obs.y.middleCols(t * n, n).noalias() = ch.f * hx;
        }
        return obs;
    }

    ObservationBatch unit_noise(Eigen::Index m, Eigen::Index steps, Rng &rng)
    {
        return {rng.complex_normal_matrix(m, steps)};
    }

    ObservationBatch simulate_observations(const TrainingDesign &design, const PhaseSchedule &phi, const PilotMatrix &x,
                                           const ChannelRealization &ch, Rng &rng)
    {
        require(design.pilot_power > 0.0 && design.noise_variance >= 0.0, "invalid training design");
        ObservationBatch obs = noiseless_observations(phi, x, ch);
        obs.y *= std::sqrt(design.pilot_power);
        if (design.noise_variance > 0.0)
            obs.y += std::sqrt(design.noise_variance) * unit_noise(obs.y.rows(), obs.y.cols(), rng).y;
        return obs;
    }

    void ErrorAccumulator::add(const CVector &estimate, const CVector &truth)
    {
        require(estimate.size() == truth.size(), "estimate and truth lengths differ");
        error += (estimate - truth).squaredNorm();
        energy += truth.squaredNorm();
    }

    void ErrorAccumulator::merge(const ErrorAccumulator &other)
    {
        error += other.error;
        energy += other.energy;
    }

    double ErrorAccumulator::nmse() const
    {
        if (!(energy > 0.0))
            fail(ErrorKind::InvalidArgument, "all true channels are zero");
        return error / energy;
    }

    double empirical_nmse(const std::vector<CVector> &estimates, const std::vector<CVector> &truths)
    {
        require(!truths.empty() && estimates.size() == truths.size(), "need equal-length nonempty lists");
        ErrorAccumulator acc;
        for (std::size_t i = 0; i < truths.size(); ++i)
            acc.add(estimates[i], truths[i]);
        return acc.nmse();
    }

    unsigned default_thread_count()
    {
        const unsigned hw = std::thread::hardware_concurrency();
        return hw == 0 ? 1 : hw;
    }
}
