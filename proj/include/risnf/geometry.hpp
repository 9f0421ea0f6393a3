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

#ifndef RISNF_GEOMETRY_HPP
#define RISNF_GEOMETRY_HPP

#include <cstddef>
#include <string_view>
#include <vector>

#include "risnf/types.hpp"

namespace risnf
{
    struct SystemConfig
    {
        double carrier_frequency = 3.0e9; // Hz

        double wavelength() const { return speed_of_light / carrier_frequency; }
        double wavenumber() const { return 2.0 * pi / wavelength(); }
    };

    SystemConfig make_system(double carrier_frequency);

    enum class ArrayRole
    {
        RIS,
        BS,
        UE
    };

    std::string_view array_role_name(ArrayRole role) noexcept;

    // Uniform planar array on the Y-Z plane. Element k (1-based) sits at
    // [0, i*spacing, j*spacing] with i = (k-1) mod count_h, j = (k-1) / count_h.
    struct ArrayConfig
    {
        ArrayRole role = ArrayRole::RIS;
        std::size_t count_h = 1;
        std::size_t count_v = 1;
        double spacing = 0.05; // meters

        std::size_t total() const { return count_h * count_v; }
        double aperture() const; // largest element-to-element distance, meters

        // Spacing given in wavelengths (the unit configs use)
        static ArrayConfig from_wavelengths(ArrayRole role, std::size_t count_h, std::size_t count_v,
                                            double spacing_in_wavelengths, const SystemConfig &sys);
    };

    void validate(const ArrayConfig &cfg);

    struct Position3D
    {
        double x = 0.0;
        double y = 0.0;
        double z = 0.0;
    };

    // Scatterer in the array's local frame, angles in radians
    struct ScattererLocation
    {
        double azimuth = 0.0;
        double elevation = 0.0;
        double distance = 1.0;

        Position3D cartesian() const;
        static ScattererLocation from_degrees(double azimuth_deg, double elevation_deg, double distance);
    };

    bool in_angular_domain(double azimuth, double elevation);
    void validate(const ScattererLocation &s);

    Position3D element_position(const ArrayConfig &cfg, std::size_t index);

    double element_distance(const SystemConfig &sys, const ArrayConfig &cfg, std::size_t index,
                            const ScattererLocation &s);

    // Entry k = exp(-j 2 pi / lambda (d_k - d))
    CVector nearfield_response(const SystemConfig &sys, const ArrayConfig &cfg, const ScattererLocation &s);

    // Columns are near-field responses for each scatterer
    CMatrix nearfield_response_matrix(const SystemConfig &sys, const ArrayConfig &cfg,
                                      const std::vector<ScattererLocation> &scatterers);
}

#endif
