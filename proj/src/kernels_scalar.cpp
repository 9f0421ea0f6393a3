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

#include "risnf/kernels.hpp"

namespace risnf::kernels::scalar
{
    void steering_vector(const ElementGrid &grid, double sx, double sy, double sz, double reference_distance,
                         double wavenumber, cdouble *out)
    {
        const double sx2 = sx * sx;
        for (std::size_t k = 0; k < grid.count; ++k)
        {
            const double dy = sy - grid.y[k];
            const double dz = sz - grid.z[k];
            const double phase = wavenumber * (std::sqrt(sx2 + dy * dy + dz * dz) - reference_distance);
            out[k] = cdouble(std::cos(phase), -std::sin(phase));
        }
    }

    void cis_negative(const double *phase, std::size_t n, cdouble *out)
    {
        for (std::size_t k = 0; k < n; ++k)
            out[k] = cdouble(std::cos(phase[k]), -std::sin(phase[k]));
    }
}
