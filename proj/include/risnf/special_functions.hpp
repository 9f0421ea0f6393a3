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

#ifndef RISNF_SPECIAL_FUNCTIONS_HPP
#define RISNF_SPECIAL_FUNCTIONS_HPP

namespace risnf
{
    struct SiCi
    {
        double si = 0.0;
        double ci = 0.0;
    };

    // Si(x) = int_0^x sin t / t dt, Ci(x) = -int_x^inf cos t / t dt.
    // Power series up to x = 4, continued fraction for E1(ix) beyond.
    // Ci(0) is a Domain error; negative arguments are InvalidArgument.
    SiCi sine_cosine_integrals(double x);

    double sine_integral(double x);
    double cosine_integral(double x);
}

#endif
