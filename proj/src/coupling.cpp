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
#include <limits>
#include <map>
#include <string>
#include <utility>

#include "risnf/coupling.hpp"
#include "risnf/errors.hpp"
#include "risnf/special_functions.hpp"
#include "risnf/spectral.hpp"

namespace risnf
{
    namespace
    {
        constexpr cdouble j_unit{0.0, 1.0};

        double eta_over_4pi() { return free_space_impedance / (4.0 * pi); }

        // Antiderivative of e^{-ju}/u
        cdouble expint_primitive(double u)
        {
            const SiCi v = sine_cosine_integrals(u);
            return {v.ci, -v.si};
        }

        void require_half_wave(const DipoleConfig &cfg)
        {
            if (std::abs(cfg.length_in_wavelengths - 0.5) > 1e-12)
                fail(ErrorKind::UnsupportedConfiguration, "only half-wave dipoles are supported, got length " +
                                                              std::to_string(cfg.length_in_wavelengths) + " wavelengths");
        }

        // One piece of the induced-EMF integral along dipole 2:
        //   antiderivative c_plus * int e^{-jk(R+t)}/R dt + c_minus * int e^{-jk(R-t)}/R dt
        // where t is the axial coordinate measured from a current end of dipole 1.
        struct PiecePrimitive
        {
            double k;
            double d;
            cdouble c_plus;
            cdouble c_minus;

            cdouble operator()(double t, double tol) const
            {
                if (d == 0.0)
                {
                    if (std::abs(t) <= tol)
                        return c_plus * (euler_gamma + std::log(2.0 * k));
                    if (t > 0.0)
                        return c_plus * expint_primitive(2.0 * k * t) + c_minus * std::log(t);
                    return -c_plus * std::log(-t) - c_minus * expint_primitive(-2.0 * k * t);
                }
                const double r = std::hypot(d, t);
                // R + t and R - t without cancellation
                const double rp = t >= 0.0 ? r + t : d * d / (r - t);
                const double rm = t >= 0.0 ? d * d / (r + t) : r - t;
                return c_plus * expint_primitive(k * rp) - c_minus * expint_primitive(k * rm);
            }
        };
    }

    void validate(const DipoleConfig &cfg)
    {
        require(cfg.length_in_wavelengths > 0.0, "dipole length must be positive");
        require(cfg.dissipation_resistance > 0.0, "dissipation resistance must be positive");
        require(cfg.wire_radius_in_wavelengths > 0.0, "wire radius must be positive");
    }

    DipoleArrangement classify_arrangement(double dy, double dz)
    {
        const bool y_zero = std::abs(dy) < arrangement_tolerance;
        const bool z_zero = std::abs(dz) < arrangement_tolerance;
        if (y_zero && z_zero)
            fail(ErrorKind::InvalidArgument, "zero displacement; use self_impedance");
        if (z_zero)
            return DipoleArrangement::SideBySide;
        if (y_zero)
            return DipoleArrangement::Collinear;
        return DipoleArrangement::Echelon;
    }

    cdouble self_impedance(const DipoleConfig &cfg, const SystemConfig &sys)
    {
        validate(cfg);
        require_half_wave(cfg);
        (void)sys; // the half-wave value is frequency independent
        const SiCi v = sine_cosine_integrals(2.0 * pi);
        return eta_over_4pi() * cdouble(euler_gamma + std::log(2.0 * pi) - v.ci, v.si);
    }

    cdouble parallel_dipole_impedance(const SystemConfig &sys, double d, double h)
    {
        d = std::abs(d);
        h = std::abs(h);
        const double k = sys.wavenumber();
        const double half = sys.wavelength() / 4.0;
        const double tol = 1e-12 * half;
        require(d > 0.0 || h > 0.0, "parallel_dipole_impedance needs a nonzero displacement");

        cdouble total = 0.0;
        for (double a : {half, -half})
            for (int sigma : {1, -1})
            {
                const cdouble c1 = std::exp(j_unit * (k * half + sigma * k * (h - a))) / (2.0 * j_unit);
                const cdouble c2 = -std::exp(-j_unit * (k * half + sigma * k * (h - a))) / (2.0 * j_unit);
                const PiecePrimitive f{k, d, sigma > 0 ? c1 : c2, sigma > 0 ? c2 : c1};
                const double z0 = sigma > 0 ? 0.0 : -half;
                const double z1 = sigma > 0 ? half : 0.0;
                const double t0 = z0 + h - a;
                const double t1 = z1 + h - a;
                if (d == 0.0 && t0 < -tol && t1 > tol)
                    fail(ErrorKind::Domain, "overlapping co-linear dipoles need a nonzero wire radius");
                total += f(t1, tol) - f(t0, tol);
            }
        return j_unit * eta_over_4pi() * total;
    }

    cdouble mutual_impedance(const DipoleConfig &cfg, const SystemConfig &sys, double dy, double dz)
    {
        validate(cfg);
        require_half_wave(cfg);
        const double k = sys.wavenumber();
        const double length = sys.wavelength() / 2.0;
        const double d = std::abs(dy);
        const double h = std::abs(dz);

        switch (classify_arrangement(dy, dz))
        {
        case DipoleArrangement::SideBySide:
        {
            const double root = std::hypot(d, length);
            const SiCi s0 = sine_cosine_integrals(k * d);
            const SiCi s1 = sine_cosine_integrals(k * (root + length));
            const SiCi s2 = sine_cosine_integrals(k * d * d / (root + length));
            const double r = 2.0 * s0.ci - s1.ci - s2.ci;
            const double x = -(2.0 * s0.si - s1.si - s2.si);
            return eta_over_4pi() * cdouble(r, x);
        }
        case DipoleArrangement::Collinear:
            if (h < length - arrangement_tolerance)
                return parallel_dipole_impedance(sys, cfg.wire_radius_in_wavelengths * sys.wavelength(), h);
            return parallel_dipole_impedance(sys, 0.0, h);
        case DipoleArrangement::Echelon:
            return parallel_dipole_impedance(sys, d, h);
        }
        return {};
    }

    CMatrix build_impedance_matrix(const DipoleConfig &cfg, const SystemConfig &sys, const ArrayConfig &array)
    {
        validate(array);
        const auto n = static_cast<Eigen::Index>(array.total());
        const auto ch = static_cast<long>(array.count_h);
        const cdouble z_self = self_impedance(cfg, sys);

        // Translation invariance: Z depends on |di|, |dj| only
        std::map<std::pair<long, long>, cdouble> cache;
        auto lookup = [&](long di, long dj) {
            const auto key = std::make_pair(std::abs(di), std::abs(dj));
            auto it = cache.find(key);
            if (it != cache.end())
                return it->second;
            const cdouble z = mutual_impedance(cfg, sys, static_cast<double>(key.first) * array.spacing,
                                               static_cast<double>(key.second) * array.spacing);
            cache.emplace(key, z);
            return z;
        };

        CMatrix z(n, n);
        for (Eigen::Index p = 0; p < n; ++p)
        {
            z(p, p) = z_self;
            for (Eigen::Index q = p + 1; q < n; ++q)
            {
                const long di = static_cast<long>(q % ch) - static_cast<long>(p % ch);
                const long dj = static_cast<long>(q / ch) - static_cast<long>(p / ch);
                z(p, q) = z(q, p) = lookup(di, dj);
            }
        }
        return z;
    }

    CouplingMatrix coupling_matrix(const CMatrix &z, double r_d)
    {
        return coupling_matrix(z, r_d, [](const CMatrix &m) { return principal_sqrt(m); });
    }

    CouplingMatrix coupling_matrix(const CMatrix &z, double r_d, const std::function<CMatrix(const CMatrix &)> &sqrt_of)
    {
        require(z.rows() == z.cols(), "impedance matrix must be square");
        require(r_d > 0.0, "dissipation resistance must be positive");
        require(z.allFinite(), "impedance matrix has non-finite entries");
        const Eigen::Index n = z.rows();
        const CMatrix a = z + r_d * CMatrix::Identity(n, n);
        const Eigen::PartialPivLU<CMatrix> lu(a);
        const double rcond = lu.rcond();
        const double condition = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
        if (!(condition <= coupling_condition_limit))
            fail(ErrorKind::IllConditionedCoupling, "Z + r_d I has condition estimate " + std::to_string(condition));

        CouplingMatrix out;
        out.condition = condition;
        CMatrix m = lu.inverse();
        out.m = 0.5 * (m + m.transpose());
        CMatrix s = sqrt_of(out.m);
        out.sqrt = 0.5 * (s + s.transpose());
        return out;
    }

    CouplingMatrix coupling_for_array(const DipoleConfig &cfg, const SystemConfig &sys, const ArrayConfig &array)
    {
        return coupling_matrix(build_impedance_matrix(cfg, sys, array), cfg.dissipation_resistance);
    }

    CouplingMatrix identity_coupling(Eigen::Index n)
    {
        return {CMatrix::Identity(n, n), CMatrix::Identity(n, n), 1.0};
    }

    CorrelationMatrix coupled_correlation(const CorrelationMatrix &r, const CouplingMatrix &m, CouplingForm form)
    {
        require(r.dimension() == m.dimension(), "correlation and coupling dimensions differ");
        CorrelationMatrix out;
        out.kind = r.kind;
        out.with_coupling = true;
        if (form == CouplingForm::Congruence)
        {
            out.entries = m.sqrt * r.entries * m.sqrt.adjoint();
        }
        else
        {
            const EigenSystem eig = hermitian_eig(m.sqrt * r.entries * m.sqrt);
            const RVector clipped = eig.values.cwiseMax(0.0);
            out.entries = eig.vectors * clipped.asDiagonal() * eig.vectors.adjoint();
        }
        normalize_trace(out.entries, static_cast<double>(r.dimension()));
        return out;
    }

    CMatrix apply_coupling_to_channel(const CMatrix &h, const CouplingMatrix &m_rx, const CouplingMatrix &m_tx)
    {
        require(m_rx.dimension() == h.rows(), "receive coupling does not match the channel rows");
        require(m_tx.dimension() == h.cols(), "transmit coupling does not match the channel columns");
        return m_rx.sqrt * h * m_tx.sqrt;
    }

    CMatrix normalized_coupling_transform(const CouplingMatrix &m, const CMatrix &r)
    {
        require(r.rows() == m.dimension() && r.cols() == m.dimension(), "correlation and coupling dimensions differ");
        // tr(S R S^H) = sum of (S R) o conj(S)
        const double t = (m.sqrt * r).cwiseProduct(m.sqrt.conjugate()).sum().real();
        if (!(t > 0.0))
            fail(ErrorKind::DegenerateInput, "coupled correlation has non-positive trace");
        return std::sqrt(static_cast<double>(r.rows()) / t) * m.sqrt;
    }
}
