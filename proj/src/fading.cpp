// SPDX-License-Identifier: Apache-2.0
//
// kms-product: statistics of products of kappa-mu shadowed random variables
// Copyright (C) 2026 The kms-product authors
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

#include "kms/fading.hpp"

#include "kms/quadrature.hpp"

#include <limits>
#include <string>

namespace kms
{
    void ShadowedParams::validate() const
    {
        if (!(std::isfinite(kappa) && kappa >= 0.0))
            throw DomainError("kappa must satisfy kappa >= 0 (got " + std::to_string(kappa) + ")");
        if (!(std::isfinite(mu) && mu > 0.0))
            throw DomainError("mu must satisfy mu > 0 (got " + std::to_string(mu) + ")");
        if (!(std::isfinite(m) && m > 0.0))
            throw DomainError("m must satisfy m > 0 (got " + std::to_string(m) + ")");
        if (!(std::isfinite(gamma_bar) && gamma_bar > 0.0))
            throw DomainError("gamma_bar must satisfy gamma_bar > 0 (got " + std::to_string(gamma_bar) + ")");
    }

    DerivedCoeffs<double> derive_coeffs(const ShadowedParams &p)
    {
        DerivedCoeffs<double> d;
        p.validate();
        d.a = p.mu * (1.0 + p.kappa) / p.gamma_bar;
        const double den = p.mu * p.kappa + p.m;
        d.c = p.mu * p.kappa / den;
        d.b = std::pow(p.m / den, p.m);
        d.theta = std::exp(p.mu * std::log(d.a) + std::log(d.b) - std::lgamma(p.mu));
        return d;
    }

    namespace
    {
        constexpr double kSeriesLimit = 500.0;

        double log_prefactor(const ShadowedParams &p, const DerivedCoeffs<double> &d, double x)
        {
            return std::log(d.theta) + (p.mu - 1.0) * std::log(x) - d.a * x;
        }
    }

    SeriesValue pdf_single(const ShadowedParams &p, double x, const TruncationPolicy &policy)
    {
        if (!(x > 0.0) || !std::isfinite(x))
            throw DomainError("pdf_single: x must be positive and finite");
        const auto d = derive_coeffs(p);
        const double z = d.a * d.c * x;
        if (z <= kSeriesLimit)
        {
            SeriesValue s = kummer_1f1(p.m, p.mu, z, policy);
            const double lf = std::log(s.value);
            const double scale = std::exp(log_prefactor(p, d, x));
            s.value = std::exp(log_prefactor(p, d, x) + lf);
            s.tail_estimate *= scale;
            s.rounding_estimate *= scale;
            return s;
        }
        SeriesValue s;
        s.value = std::exp(log_pdf_single(p, x));
        s.converged = true;
        s.max_term_ratio = 1.0;
        s.rounding_estimate = 8.0 * std::numeric_limits<double>::epsilon() * s.value;
        return s;
    }

    double log_pdf_single(const ShadowedParams &p, double x)
    {
        if (x < 0.0 || std::isnan(x))
            throw DomainError("log_pdf_single: x must be nonnegative");
        const auto d = derive_coeffs(p);
        if (x == 0.0)
        {
            if (p.mu > 1.0)
                return -std::numeric_limits<double>::infinity();
            if (p.mu == 1.0)
                return std::log(d.theta);
            return std::numeric_limits<double>::infinity();
        }
        if (std::isinf(x))
            return -std::numeric_limits<double>::infinity();
        return log_prefactor(p, d, x) + log_scaled_kummer_1f1(p.m, p.mu, d.a * d.c * x, 0.0);
    }

    double mellin_single(const ShadowedParams &p, double s)
    {
        const auto d = derive_coeffs(p);
        const double sm = s + p.mu - 1.0;
        if (!(sm > 0.0))
            throw DomainError("mellin_single: s + mu - 1 > 0 required (s = " + std::to_string(s) + ")");
        // Euler transform of b 2F1(m, s + mu - 1; mu; c): terminates at integer s
        // and converges faster otherwise.
        const auto f = gauss_2f1<double>(p.mu - p.m, 1.0 - s, p.mu, d.c, SeriesControl<double>::working());
        const double lp = (1.0 - s) * std::log1p(-d.c) + std::lgamma(sm) - std::lgamma(p.mu) - (s - 1.0) * std::log(d.a);
        return std::exp(lp) * f.value;
    }

    namespace
    {
        constexpr double kHeadMass = 1e-13;
        constexpr double kTailStop = 1e-12;

        double integrate_log(const ShadowedParams &p, double u0, double u1)
        {
            auto g = [&](double u) { return std::exp(log_pdf_single(p, std::exp(u)) + u); };
            double sum = 0.0;
            // Panels of unit width in ln x keep each one smooth.
            for (double lo = u0; lo < u1;)
            {
                const double hi = std::min(u1, lo + 1.0);
                sum += integrate(g, lo, hi, 1e-12, 1e-15).value;
                lo = hi;
            }
            return sum;
        }
    }

    double cdf_single(const ShadowedParams &p, double x)
    {
        if (x < 0.0 || std::isnan(x))
            throw DomainError("cdf_single: x must be nonnegative");
        if (x == 0.0)
            return 0.0;
        const auto d = derive_coeffs(p);

        // Below x_lo the density is theta x^(mu-1) to relative O(a x_lo); its mass
        // theta x_lo^mu / mu is kHeadMass and is added in closed form.
        const double log_x_lo = (std::log(kHeadMass * p.mu) - std::log(d.theta)) / p.mu;
        const double log_x = std::log(x);
        if (log_x <= log_x_lo)
            return d.theta * std::exp(p.mu * log_x) / p.mu;
        double total = kHeadMass;

        const double split = std::log(p.gamma_bar);
        const double u_mid = std::max(log_x_lo, std::min(split, log_x));
        total += integrate_log(p, log_x_lo, u_mid);

        // Doubling steps beyond the mean until the increment is negligible.
        double u = u_mid;
        while (u < log_x)
        {
            const double next = std::min(log_x, u + std::log(2.0));
            const double inc = integrate_log(p, u, next);
            total += inc;
            u = next;
            if (u > split && inc < kTailStop)
                break;
        }
        return std::min(1.0, std::max(0.0, total));
    }

    std::vector<double> sample_single(const ShadowedParams &p, RandomStream &stream, std::size_t count)
    {
        p.validate();
        std::vector<double> out(count);
        for (auto &v : out)
            v = draw_single(p, stream.engine());
        return out;
    }
}
