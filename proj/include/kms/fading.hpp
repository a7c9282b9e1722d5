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

#ifndef KMS_FADING_HPP
#define KMS_FADING_HPP

#include "kms/random.hpp"
#include "kms/series.hpp"
#include "kms/specfun.hpp"

#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

namespace kms
{
    // One kappa-mu shadowed link; x is a power (SNR-like) variable.
    struct ShadowedParams
    {
        double kappa = 0.0;     // dominant-to-scattered power ratio
        double mu = 1.0;        // number of clusters, real valued
        double m = 1.0;         // shadowing shape of the dominant component
        double gamma_bar = 1.0; // mean power, linear

        // Throws DomainError naming the violated invariant.
        void validate() const;
    };

    // Reparameterization f(x) = theta x^(mu-1) exp(-a x) 1F1(m; mu; a c x).
    template <class T>
    struct DerivedCoeffs
    {
        T a;     // mu (1 + kappa) / gamma_bar
        T b;     // (m / (mu kappa + m))^m = (1 - c)^m
        T c;     // mu kappa / (mu kappa + m)
        T theta; // a^mu b / Gamma(mu)
    };

    template <class T>
    DerivedCoeffs<T> derive_coeffs_as(const ShadowedParams &p)
    {
        using std::exp;
        using std::log;
        p.validate();
        const T kappa(p.kappa), mu(p.mu), m(p.m), gbar(p.gamma_bar);
        DerivedCoeffs<T> d;
        d.a = mu * (1 + kappa) / gbar;
        const T den = mu * kappa + m;
        d.c = mu * kappa / den;
        d.b = exp(m * log(m / den));
        d.theta = exp(mu * log(d.a) + log(d.b) - ln_gamma_signed(mu).log_abs);
        return d;
    }

    DerivedCoeffs<double> derive_coeffs(const ShadowedParams &p);

    // Density with series diagnostics. For a c x beyond the range where the
    // plain 1F1 series is economical the large-argument expansion is used and
    // terms_used reports 0.
    SeriesValue pdf_single(const ShadowedParams &p, double x, const TruncationPolicy &policy = {});

    // ln f(x); -inf at x = 0 when mu > 1. Overflow/underflow safe.
    double log_pdf_single(const ShadowedParams &p, double x);

    // E[X^(s-1)] for s + mu - 1 > 0.
    double mellin_single(const ShadowedParams &p, double s);

    // P(X <= x) by adaptive quadrature, absolute error below 1e-10.
    double cdf_single(const ShadowedParams &p, double x);

    // One draw by the Gamma-Poisson mixture.
    template <class Engine>
    double draw_single(const ShadowedParams &p, Engine &engine)
    {
        const double lambda_half = p.mu * p.kappa;
        long long k = 0;
        if (lambda_half > 0.0)
        {
            std::gamma_distribution<double> shadow(p.m, 1.0 / p.m);
            const double xi = shadow(engine);
            std::poisson_distribution<long long> poisson(lambda_half * xi);
            k = poisson(engine);
        }
        std::gamma_distribution<double> g(p.mu + static_cast<double>(k), 1.0);
        return p.gamma_bar * g(engine) / (p.mu * (1.0 + p.kappa));
    }

    std::vector<double> sample_single(const ShadowedParams &p, RandomStream &stream, std::size_t count);
}

#endif
