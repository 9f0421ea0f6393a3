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

// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include <cmath>

#include <immintrin.h>

#include "risnf/kernels.hpp"

namespace risnf::kernels::avx2
{
    namespace
    {
        // Three-part split of pi/2 for Cody-Waite reduction (Cephes DP1..DP3 doubled)
        constexpr double pio2_1 = 1.57079625129699707031e+00;
        constexpr double pio2_2 = 7.54978941586159635336e-08;
        constexpr double pio2_3 = 5.39030285815811905290e-15;
        constexpr double two_over_pi = 0.636619772367581343075535053490057448;

        // Minimax polynomials on [-pi/4, pi/4] (Cephes sin.c)
        constexpr double s0 = 1.58962301576546568060e-10;
        constexpr double s1 = -2.50507477628578072866e-8;
        constexpr double s2 = 2.75573136213857245213e-6;
        constexpr double s3 = -1.98412698295895385996e-4;
        constexpr double s4 = 8.33333333332211858878e-3;
        constexpr double s5 = -1.66666666666666307295e-1;

        constexpr double c0 = -1.13585365213876817300e-11;
        constexpr double c1 = 2.08757008419747316778e-9;
        constexpr double c2 = -2.75573141792967388112e-7;
        constexpr double c3 = 2.48015872888517045348e-5;
        constexpr double c4 = -1.38888888888730564116e-3;
        constexpr double c5 = 4.16666666666665929218e-2;

        inline void sincos4(__m256d x, __m256d &sin_out, __m256d &cos_out)
        {
            const __m256d q = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(two_over_pi)),
                                              _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
            __m256d z = _mm256_fnmadd_pd(q, _mm256_set1_pd(pio2_1), x);
            z = _mm256_fnmadd_pd(q, _mm256_set1_pd(pio2_2), z);
            z = _mm256_fnmadd_pd(q, _mm256_set1_pd(pio2_3), z);
            const __m256d zz = _mm256_mul_pd(z, z);

            __m256d ps = _mm256_set1_pd(s0);
            ps = _mm256_fmadd_pd(ps, zz, _mm256_set1_pd(s1));
            ps = _mm256_fmadd_pd(ps, zz, _mm256_set1_pd(s2));
            ps = _mm256_fmadd_pd(ps, zz, _mm256_set1_pd(s3));
            ps = _mm256_fmadd_pd(ps, zz, _mm256_set1_pd(s4));
            ps = _mm256_fmadd_pd(ps, zz, _mm256_set1_pd(s5));
            ps = _mm256_fmadd_pd(_mm256_mul_pd(z, zz), ps, z);

            __m256d pc = _mm256_set1_pd(c0);
            pc = _mm256_fmadd_pd(pc, zz, _mm256_set1_pd(c1));
            pc = _mm256_fmadd_pd(pc, zz, _mm256_set1_pd(c2));
            pc = _mm256_fmadd_pd(pc, zz, _mm256_set1_pd(c3));
            pc = _mm256_fmadd_pd(pc, zz, _mm256_set1_pd(c4));
            pc = _mm256_fmadd_pd(pc, zz, _mm256_set1_pd(c5));
            pc = _mm256_fmadd_pd(_mm256_mul_pd(zz, zz), pc, _mm256_fnmadd_pd(_mm256_set1_pd(0.5), zz, _mm256_set1_pd(1.0)));

            // quadrant = q mod 4 in {0,1,2,3}
            const __m256d quarter = _mm256_floor_pd(_mm256_mul_pd(q, _mm256_set1_pd(0.25)));
            const __m256d quadrant = _mm256_fnmadd_pd(quarter, _mm256_set1_pd(4.0), q);
            const __m256d half = _mm256_floor_pd(_mm256_mul_pd(quadrant, _mm256_set1_pd(0.5)));
            const __m256d odd = _mm256_fnmadd_pd(half, _mm256_set1_pd(2.0), quadrant);

            const __m256d swap = _mm256_cmp_pd(odd, _mm256_set1_pd(0.5), _CMP_GT_OQ);
            const __m256d sin_neg = _mm256_cmp_pd(quadrant, _mm256_set1_pd(1.5), _CMP_GT_OQ);
            const __m256d cos_neg = _mm256_and_pd(_mm256_cmp_pd(quadrant, _mm256_set1_pd(0.5), _CMP_GT_OQ),
                                                  _mm256_cmp_pd(quadrant, _mm256_set1_pd(2.5), _CMP_LT_OQ));

            const __m256d sign_bit = _mm256_set1_pd(-0.0);
            __m256d sv = _mm256_blendv_pd(ps, pc, swap);
            __m256d cv = _mm256_blendv_pd(pc, ps, swap);
            sv = _mm256_xor_pd(sv, _mm256_and_pd(sin_neg, sign_bit));
            cv = _mm256_xor_pd(cv, _mm256_and_pd(cos_neg, sign_bit));
            sin_out = sv;
            cos_out = cv;
        }

        // Stores exp(-j*phase) for 4 lanes as interleaved complex pairs
        inline void store_cis_negative(__m256d phase, cdouble *out)
        {
            __m256d s, c;
            sincos4(phase, s, c);
            const __m256d ns = _mm256_xor_pd(s, _mm256_set1_pd(-0.0));
            const __m256d lo = _mm256_unpacklo_pd(c, ns);
            const __m256d hi = _mm256_unpackhi_pd(c, ns);
            double *dst = reinterpret_cast<double *>(out);
            _mm256_storeu_pd(dst, _mm256_permute2f128_pd(lo, hi, 0x20));
            _mm256_storeu_pd(dst + 4, _mm256_permute2f128_pd(lo, hi, 0x31));
        }
    }

    void steering_vector(const ElementGrid &grid, double sx, double sy, double sz, double reference_distance,
                         double wavenumber, cdouble *out)
    {
        const __m256d vsx2 = _mm256_set1_pd(sx * sx);
        const __m256d vsy = _mm256_set1_pd(sy);
        const __m256d vsz = _mm256_set1_pd(sz);
        const __m256d vref = _mm256_set1_pd(reference_distance);
        const __m256d vk = _mm256_set1_pd(wavenumber);

        std::size_t k = 0;
        for (; k + 4 <= grid.count; k += 4)
        {
            const __m256d dy = _mm256_sub_pd(vsy, _mm256_loadu_pd(grid.y + k));
            const __m256d dz = _mm256_sub_pd(vsz, _mm256_loadu_pd(grid.z + k));
            const __m256d r2 = _mm256_add_pd(_mm256_add_pd(vsx2, _mm256_mul_pd(dy, dy)), _mm256_mul_pd(dz, dz));
            const __m256d phase = _mm256_mul_pd(vk, _mm256_sub_pd(_mm256_sqrt_pd(r2), vref));
            store_cis_negative(phase, out + k);
        }
        if (k < grid.count)
        {
            ElementGrid tail{grid.y + k, grid.z + k, grid.count - k};
            scalar::steering_vector(tail, sx, sy, sz, reference_distance, wavenumber, out + k);
        }
    }

    void cis_negative(const double *phase, std::size_t n, cdouble *out)
    {
        std::size_t k = 0;
        for (; k + 4 <= n; k += 4)
            store_cis_negative(_mm256_loadu_pd(phase + k), out + k);
        if (k < n)
            scalar::cis_negative(phase + k, n - k, out + k);
    }
}
