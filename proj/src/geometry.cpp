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
#include "risnf/geometry.hpp"
#include "risnf/kernels.hpp"

namespace risnf
{
    SystemConfig make_system(double carrier_frequency)
    {
        require(std::isfinite(carrier_frequency) && carrier_frequency > 0.0, "carrier frequency must be positive");
        return SystemConfig{carrier_frequency};
    }

    std::string_view array_role_name(ArrayRole role) noexcept
    {
        switch (role)
        {
        case ArrayRole::BS:
            return "BS";
        case ArrayRole::UE:
            return "UE";
        case ArrayRole::RIS:
            break;
        }
        return "RIS";
    }

    double ArrayConfig::aperture() const
    {
        const double h = static_cast<double>(count_h - 1) * spacing;
        const double v = static_cast<double>(count_v - 1) * spacing;
        return std::hypot(h, v);
    }

    ArrayConfig ArrayConfig::from_wavelengths(ArrayRole role, std::size_t count_h, std::size_t count_v,
                                              double spacing_in_wavelengths, const SystemConfig &sys)
    {
        ArrayConfig cfg{role, count_h, count_v, spacing_in_wavelengths * sys.wavelength()};
        validate(cfg);
        return cfg;
    }

    void validate(const ArrayConfig &cfg)
    {
        require(cfg.count_h > 0 && cfg.count_v > 0, "array element counts must be positive");
        require(std::isfinite(cfg.spacing) && cfg.spacing > 0.0, "array spacing must be positive");
    }

    Position3D ScattererLocation::cartesian() const
    {
        const double ce = std::cos(elevation);
        return Position3D{distance * ce * std::cos(azimuth), distance * ce * std::sin(azimuth),
                          distance * std::sin(elevation)};
    }

    ScattererLocation ScattererLocation::from_degrees(double azimuth_deg, double elevation_deg, double distance)
    {
        return ScattererLocation{azimuth_deg * pi / 180.0, elevation_deg * pi / 180.0, distance};
    }

    bool in_angular_domain(double azimuth, double elevation)
    {
        return std::abs(azimuth) <= 0.5 * pi && std::abs(elevation) <= 0.5 * pi;
    }

    void validate(const ScattererLocation &s)
    {
        require(std::isfinite(s.azimuth) && std::isfinite(s.elevation) && in_angular_domain(s.azimuth, s.elevation),
                "scatterer angles must lie in [-pi/2, pi/2]");
        require(std::isfinite(s.distance) && s.distance > 0.0, "scatterer distance must be positive");
    }

    Position3D element_position(const ArrayConfig &cfg, std::size_t index)
    {
        if (index < 1 || index > cfg.total())
            fail(ErrorKind::InvalidArgument,
                 "element index " + std::to_string(index) + " outside [1, " + std::to_string(cfg.total()) + "]");
        const std::size_t i = (index - 1) % cfg.count_h;
        const std::size_t j = (index - 1) / cfg.count_h;
        return Position3D{0.0, static_cast<double>(i) * cfg.spacing, static_cast<double>(j) * cfg.spacing};
    }

    double element_distance(const SystemConfig &, const ArrayConfig &cfg, std::size_t index,
                            const ScattererLocation &s)
    {
        validate(s);
        const Position3D p = element_position(cfg, index);
        const Position3D q = s.cartesian();
        return std::sqrt((q.x - p.x) * (q.x - p.x) + (q.y - p.y) * (q.y - p.y) + (q.z - p.z) * (q.z - p.z));
    }

    namespace
    {
        struct GridCoordinates
        {
            std::vector<double> y, z;
            explicit GridCoordinates(const ArrayConfig &cfg) : y(cfg.total()), z(cfg.total())
            {
                for (std::size_t k = 0; k < cfg.total(); ++k)
                {
                    y[k] = static_cast<double>(k % cfg.count_h) * cfg.spacing;
                    z[k] = static_cast<double>(k / cfg.count_h) * cfg.spacing;
                }
            }
            kernels::ElementGrid view() const { return {y.data(), z.data(), y.size()}; }
        };
    }

    CVector nearfield_response(const SystemConfig &sys, const ArrayConfig &cfg, const ScattererLocation &s)
    {
        validate(cfg);
        validate(s);
        const GridCoordinates grid(cfg);
        const Position3D q = s.cartesian();
        CVector a(cfg.total());
        kernels::steering_vector(grid.view(), q.x, q.y, q.z, s.distance, sys.wavenumber(), a.data());
        return a;
    }

    CMatrix nearfield_response_matrix(const SystemConfig &sys, const ArrayConfig &cfg,
                                      const std::vector<ScattererLocation> &scatterers)
    {
        validate(cfg);
        const GridCoordinates grid(cfg);
        const double k = sys.wavenumber();
        CMatrix a(cfg.total(), static_cast<Eigen::Index>(scatterers.size()));
        for (std::size_t c = 0; c < scatterers.size(); ++c)
        {
            const Position3D q = scatterers[c].cartesian();
            kernels::steering_vector(grid.view(), q.x, q.y, q.z, scatterers[c].distance, k,
                                     a.col(static_cast<Eigen::Index>(c)).data());
        }
        return a;
    }
}
