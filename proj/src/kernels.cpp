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

#include <atomic>
#include <cstdlib>
#include <cstring>

#include "risnf/kernels.hpp"

namespace risnf::kernels
{
    namespace
    {
        SimdLevel probe_host() noexcept
        {
#if defined(RISNF_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
            __builtin_cpu_init();
            if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
                return SimdLevel::Avx2;
#endif
            return SimdLevel::Scalar;
        }

        SimdLevel initial_level() noexcept
        {
            const char *env = std::getenv("RISNF_SIMD");
            if (env != nullptr && std::strcmp(env, "scalar") == 0)
                return SimdLevel::Scalar;
            return detected_simd_level();
        }

        std::atomic<SimdLevel> &current_level() noexcept
        {
            static std::atomic<SimdLevel> level{initial_level()};
            return level;
        }
    }

    std::string_view simd_level_name(SimdLevel level) noexcept
    {
        switch (level)
        {
        case SimdLevel::Avx2:
            return "avx2";
        case SimdLevel::Scalar:
            break;
        }
        return "scalar";
    }

    SimdLevel detected_simd_level() noexcept
    {
        static const SimdLevel detected = probe_host();
        return detected;
    }

    SimdLevel active_simd_level() noexcept { return current_level().load(std::memory_order_relaxed); }

    void force_simd_level(std::optional<SimdLevel> level) noexcept
    {
        SimdLevel target = level.value_or(initial_level());
        if (static_cast<int>(target) > static_cast<int>(detected_simd_level()))
            target = detected_simd_level();
        current_level().store(target, std::memory_order_relaxed);
    }

    void steering_vector(const ElementGrid &grid, double sx, double sy, double sz, double reference_distance,
                         double wavenumber, cdouble *out)
    {
#if defined(RISNF_HAVE_AVX2)
        if (active_simd_level() == SimdLevel::Avx2)
            return avx2::steering_vector(grid, sx, sy, sz, reference_distance, wavenumber, out);
#endif
        scalar::steering_vector(grid, sx, sy, sz, reference_distance, wavenumber, out);
    }

    void cis_negative(const double *phase, std::size_t n, cdouble *out)
    {
#if defined(RISNF_HAVE_AVX2)
        if (active_simd_level() == SimdLevel::Avx2)
            return avx2::cis_negative(phase, n, out);
#endif
        scalar::cis_negative(phase, n, out);
    }
}
