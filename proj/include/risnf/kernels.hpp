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

#ifndef RISNF_KERNELS_HPP
#define RISNF_KERNELS_HPP

// Data-parallel inner loops of the correlation synthesis. Every kernel has a
// scalar reference implementation and, on x86-64, an AVX2+FMA variant; the
// variant is chosen once at runtime from the host CPU features. Setting the
// environment variable RISNF_SIMD=scalar forces the reference path.

#include <cstddef>
#include <optional>
#include <string_view>

#include "risnf/types.hpp"

namespace risnf::kernels
{
    enum class SimdLevel
    {
        Scalar,
        Avx2
    };

    std::string_view simd_level_name(SimdLevel level) noexcept;

    // Best level the host supports and this build contains
    SimdLevel detected_simd_level() noexcept;

    // Level used by the dispatching entry points below
    SimdLevel active_simd_level() noexcept;

    // Overrides the dispatch decision; std::nullopt restores auto-detection.
    // Requests above detected_simd_level() are clamped.
    void force_simd_level(std::optional<SimdLevel> level) noexcept;

    // Element coordinates of a planar array in structure-of-arrays layout.
    // All elements lie on x = 0.
    struct ElementGrid
    {
        const double *y = nullptr;
        const double *z = nullptr;
        std::size_t count = 0;
    };

    // out[k] = exp(-j * wavenumber * (|s - p_k| - reference_distance)),
    // where s = (sx, sy, sz) is the scatterer position.
    void steering_vector(const ElementGrid &grid, double sx, double sy, double sz, double reference_distance,
                         double wavenumber, cdouble *out);

    // out[k] = exp(-j * phase[k])
    void cis_negative(const double *phase, std::size_t n, cdouble *out);

    namespace scalar
    {
        void steering_vector(const ElementGrid &grid, double sx, double sy, double sz, double reference_distance,
                             double wavenumber, cdouble *out);
        void cis_negative(const double *phase, std::size_t n, cdouble *out);
    }

#if defined(RISNF_HAVE_AVX2)
    namespace avx2
    {
        void steering_vector(const ElementGrid &grid, double sx, double sy, double sz, double reference_distance,
                             double wavenumber, cdouble *out);
        void cis_negative(const double *phase, std::size_t n, cdouble *out);
    }
#endif
}

#endif
