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

#ifndef RISNF_MONTECARLO_HPP
#define RISNF_MONTECARLO_HPP

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "risnf/rng.hpp"
#include "risnf/training.hpp"
#include "risnf/types.hpp"

namespace risnf
{
    // Draws A W B^T with W i.i.d. CN(0, 1), so vec of the draw has covariance
    // (B B^H) kron (A A^H); with A = R_rx^1/2 and B = R_tx^1/2 that is
    // R_tx kron R_rx.
    struct ChannelSampler
    {
        CMatrix rx_factor;
        CMatrix tx_factor;

        CMatrix sample(Rng &rng) const;

        static ChannelSampler from_correlations(const CMatrix &r_rx, const CMatrix &r_tx);
    };

    CMatrix sample_channel(const CMatrix &r_rx, const CMatrix &r_tx, Rng &rng);

    struct ChannelRealization
    {
        CMatrix h; // K x N, UE to RIS
        CMatrix f; // M x K, RIS to BS
        CVector c; // vec(H^T khatri-rao F), length K N M
    };

    ChannelRealization build_cascaded(const CMatrix &h, const CMatrix &f);

    // y_l = sqrt(p_t) F diag(phi_t) H sqrt(N) x_n + n_l, n_l ~ CN(0, sigma^2 I)
    ObservationBatch simulate_observations(const TrainingDesign &design, const PhaseSchedule &phi, const PilotMatrix &x,
                                           const ChannelRealization &ch, Rng &rng);

    // Noise-free part with unit pilot power
    ObservationBatch noiseless_observations(const PhaseSchedule &phi, const PilotMatrix &x, const ChannelRealization &ch);

    // CN(0, 1) noise for every step
    ObservationBatch unit_noise(Eigen::Index bs_antennas, Eigen::Index steps, Rng &rng);

    // Pooled ratio sum |c_hat - c|^2 / sum |c|^2
    struct ErrorAccumulator
    {
        double error = 0.0;
        double energy = 0.0;

        void add(const CVector &estimate, const CVector &truth);
        void merge(const ErrorAccumulator &other);
        double nmse() const;
    };

    double empirical_nmse(const std::vector<CVector> &estimates, const std::vector<CVector> &truths);

    unsigned default_thread_count();

    // Runs fn(i) for i in [0, count) on up to `threads` workers and returns
    // the results in index order. The first exception thrown is rethrown.
    template <typename Fn>
    auto run_indexed(std::size_t count, unsigned threads, Fn &&fn) -> std::vector<decltype(fn(std::size_t{}))>
    {
        using Result = decltype(fn(std::size_t{}));
        std::vector<Result> results(count);
        if (threads <= 1 || count <= 1)
        {
            for (std::size_t i = 0; i < count; ++i)
                results[i] = fn(i);
            return results;
        }
        std::atomic<std::size_t> next{0};
        std::exception_ptr error;
        std::mutex error_mutex;
        auto worker = [&]() {
            for (;;)
            {
                const std::size_t i = next.fetch_add(1);
                if (i >= count)
                    return;
                try
                {
                    results[i] = fn(i);
                }
                catch (...)
                {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                    next.store(count);
                }
            }
        };
        std::vector<std::thread> pool;
        const auto n = static_cast<std::size_t>(threads) < count ? threads : static_cast<unsigned>(count);
        for (unsigned t = 0; t < n; ++t)
            pool.emplace_back(worker);
        for (auto &t : pool)
            t.join();
        if (error)
            std::rethrow_exception(error);
        return results;
    }
}

#endif
