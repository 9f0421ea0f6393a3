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

#ifndef RISNF_TYPES_HPP
#define RISNF_TYPES_HPP

#include <cmath>
#include <complex>
#include <cstdint>

#include <Eigen/Dense>

namespace risnf
{
    using cdouble = std::complex<double>;
    using CMatrix = Eigen::MatrixXcd;
    using CVector = Eigen::VectorXcd;
    using RMatrix = Eigen::MatrixXd;
    using RVector = Eigen::VectorXd;

    inline constexpr double pi = 3.141592653589793238462643383279502884;
    inline constexpr double speed_of_light = 299792458.0;      // m/s
    inline constexpr double free_space_impedance = 376.730313668; // Ohm, mu0 * c
    inline constexpr double euler_gamma = 0.577215664901532860606512090082402431;

    // Largest Kronecker-structured dimension that may be materialized densely
    inline constexpr Eigen::Index dense_fallback_limit = 512;

    enum class CorrelationKind
    {
        ExactClustered,
        Subspace
    };

    inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
    inline double linear_to_db(double x) { return 10.0 * std::log10(x); }
}

#endif
