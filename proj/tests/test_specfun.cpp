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

#include "doctest.h"
#include "generators.hpp"

#include "kms/specfun.hpp"

#include <boost/math/special_functions/digamma.hpp>

#include <cmath>
#include <numbers>

using namespace kms;
using kms::test::Gen;
using kms::test::rel_err;

namespace
{
    constexpr double euler_gamma = 0.5772156649015329;

    // Central difference carried out in 80 digits so that only the O(h^2)
    // truncation error remains.
    double fd_db(double a, unsigned n, double c, double z, double h)
    {
        const auto ctl = SeriesControl<real80>::working();
        const real80 b = -real80(n), hh(h), aa(a), cc(c), zz(z);
        const real80 d = (gauss_2f1<real80>(aa, b + hh, cc, zz, ctl).value - gauss_2f1<real80>(aa, b - hh, cc, zz, ctl).value) /
                         (2 * hh);
        return d.convert_to<double>();
    }
}

TEST_SUITE("specfun")
{
    TEST_CASE("digamma at known points")
    {
        CHECK(digamma(1.0) == doctest::Approx(-euler_gamma).epsilon(1e-15));
        CHECK(digamma(2.0) == doctest::Approx(1.0 - euler_gamma).epsilon(1e-15));
        CHECK(digamma(0.5) == doctest::Approx(-1.9635100260214235).epsilon(1e-15));
    }

    TEST_CASE("digamma rejects poles")
    {
        CHECK_THROWS_AS(digamma(0.0), PoleError);
        CHECK_THROWS_AS(digamma(-3.0), PoleError);
        CHECK_THROWS_AS(digamma(-2.0 + 1e-13), PoleError);
        CHECK_NOTHROW(digamma(-2.5));
    }

    TEST_CASE("digamma relative accuracy against boost on [1e-6, 1e6]")
    {
        Gen g(11);
        double worst = 0.0;
        for (int i = 0; i < 400; ++i)
        {
            const long double x = g.log_uniform(1e-6, 1e6);
            const long double want = boost::math::digamma(x);
            worst = std::max(worst, static_cast<double>(std::abs((digamma(static_cast<double>(x)) - want) / want)));
        }
        CHECK(worst <= 1e-13);
    }

    TEST_CASE("digamma recurrence on random x")
    {
        Gen g(12);
        for (int i = 0; i < 200; ++i)
        {
            const double x = g.uniform(0.1, 50.0);
            CHECK(std::abs(digamma(x + 1.0) - digamma(x) - 1.0 / x) <= 1e-12);
        }
    }

    TEST_CASE("ln_gamma_signed examples")
    {
        auto g5 = ln_gamma_signed(5.0);
        CHECK(g5.sign == 1);
        CHECK(g5.log_abs == doctest::Approx(std::log(24.0)).epsilon(1e-15));
        auto gh = ln_gamma_signed(0.5);
        CHECK(gh.sign == 1);
        CHECK(gh.log_abs == doctest::Approx(0.5 * std::log(std::numbers::pi)).epsilon(1e-15));

        // Reflection oracle: Gamma(x) = pi / (sin(pi x) Gamma(1 - x)).
        const double want = std::numbers::pi / (std::sin(std::numbers::pi * -2.5) * std::tgamma(3.5));
        auto gn = ln_gamma_signed(-2.5);
        CHECK(gn.sign == -1);
        CHECK(want < 0.0);
        CHECK(gn.log_abs == doctest::Approx(std::log(-want)).epsilon(1e-14));
        CHECK(std::exp(gn.log_abs) == doctest::Approx(0.9453087205)); // 8 sqrt(pi) / 15
        CHECK_THROWS_AS(ln_gamma_signed(-4.0), PoleError);
    }

    TEST_CASE("reflection consistency for non-integer x in (-20, 20)")
    {
        Gen g(13);
        for (int i = 0; i < 300; ++i)
        {
            double x = g.uniform(-20.0, 20.0);
            if (std::abs(x - std::round(x)) < 1e-3)
                continue;
            const auto p = ln_gamma_signed(x), q = ln_gamma_signed(1.0 - x);
            const double lhs = p.sign * q.sign * std::exp(p.log_abs + q.log_abs) * std::sin(std::numbers::pi * x) /
                               std::numbers::pi;
            CHECK(lhs == doctest::Approx(1.0).epsilon(1e-10));
        }
    }

    TEST_CASE("pochhammer examples")
    {
        CHECK(pochhammer(7.3, 0) == 1.0);
        CHECK(pochhammer(3.0, 2) == 12.0);
        CHECK(pochhammer(-2.0, 3) == 0.0);
    }

    TEST_CASE("gauss_2f1 examples")
    {
        CHECK(gauss_2f1(1.7, 0.0, 2.3, 0.6).value == 1.0);
        const auto geo = gauss_2f1(1.0, 1.0, 1.0, 0.5);
        CHECK(geo.value == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(geo.converged);
        CHECK(gauss_2f1(2.0, -1.0, 3.0, 0.3).value == doctest::Approx(0.8).epsilon(1e-15));
    }

    TEST_CASE("terminating series are exact finite sums")
    {
        Gen g(14);
        for (int i = 0; i < 50; ++i)
        {
            const unsigned n = static_cast<unsigned>(g.integer(0, 12));
            const double a = g.uniform(-3.0, 3.0), c = g.uniform(0.2, 4.0), z = g.uniform(-3.0, 3.0);
            const auto f = gauss_2f1(a, -static_cast<double>(n), c, z);
            CHECK(f.exact);
            CHECK(f.terms_used == n + 1);
            CHECK(f.tail_estimate == 0.0);
            const auto k = kummer_1f1(-static_cast<double>(n), c, z);
            CHECK(k.exact);
            CHECK(k.terms_used == n + 1);
        }
    }

    TEST_CASE("gauss_2f1 domain and convergence errors")
    {
        CHECK_THROWS_AS(gauss_2f1(0.5, 0.5, 1.0, 1.0), DomainError);
        CHECK_THROWS_AS(gauss_2f1(0.5, 0.5, -1.0, 0.1), DomainError);
        TruncationPolicy tight;
        tight.max_terms = 10;
        CHECK_THROWS_AS(gauss_2f1(0.5, 0.5, 1.0, 0.99, tight), ConvergenceError);
    }

    TEST_CASE("Euler transformation on random admissible inputs")
    {
        Gen g(15);
        for (int i = 0; i < 200; ++i)
        {
            const double a = g.uniform(-2.5, 3.0), b = g.uniform(-2.5, 3.0), c = g.uniform(0.3, 4.0);
            const double z = g.uniform(-0.8, 0.8);
            TruncationPolicy p;
            p.max_terms = 5000;
            p.rel_tol = 1e-15;
            const double lhs = gauss_2f1(a, b, c, z, p).value;
            const double rhs = std::pow(1.0 - z, c - a - b) * gauss_2f1(c - a, c - b, c, z, p).value;
            CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(std::abs(lhs), 1e-3));
        }
    }

    TEST_CASE("b-derivative examples")
    {
        CHECK(gauss_2f1_db_at_neg_int(1.3, 0, 1.3, 0.5).value == doctest::Approx(std::log(2.0)).epsilon(1e-12));
        CHECK(gauss_2f1_db_at_neg_int(2.2, 0, 0.7, 0.0).value == 0.0);
        const double an = gauss_2f1_db_at_neg_int(2.0, 1, 3.0, 0.3).value;
        CHECK(rel_err(an, fd_db(2.0, 1, 3.0, 0.3, 1e-6)) <= 1e-6);
    }

    TEST_CASE("b-derivative against central differences on the grid")
    {
        for (double a : {0.5, 1.0, 2.0, 5.0})
            for (unsigned n : {0u, 1u, 3u, 7u})
                for (double c : {1.2, 3.0})
                    for (double z : {0.1, 0.5, 0.9})
                    {
                        CAPTURE(a);
                        CAPTURE(n);
                        CAPTURE(c);
                        CAPTURE(z);
                        const double an = gauss_2f1_db_at_neg_int(a, n, c, z).value;
                        CHECK(rel_err(an, fd_db(a, n, c, z, 1e-5)) <= 1e-6);
                    }
    }

    TEST_CASE("b-derivative with a = c, n = 0 is -ln(1 - z)")
    {
        for (double a : {0.4, 1.0, 2.5})
            for (double z : {-0.7, 0.1, 0.5, 0.9, 0.99})
            {
                TruncationPolicy p;
                p.max_terms = 20000;
                CHECK(rel_err(gauss_2f1_db_at_neg_int(a, 0, a, z, p).value, -std::log1p(-z)) <= 1e-10);
            }
    }

    TEST_CASE("kummer_1f1 examples")
    {
        CHECK(kummer_1f1(2.5, 1.5, 0.0).value == 1.0);
        CHECK(kummer_1f1(1.0, 1.0, 1.5).value == doctest::Approx(std::exp(1.5)).epsilon(1e-13));
        CHECK(kummer_1f1(-2.0, 3.0, 0.4).value == doctest::Approx(1.0 - 0.8 / 3.0 + 0.32 / 24.0).epsilon(1e-15));
        CHECK_THROWS_AS(kummer_1f1(1.0, 0.0, 1.0), DomainError);
    }

    TEST_CASE("Kummer transformation links the two kummer entry points")
    {
        // 1F1(a; b; z) = e^z 1F1(b - a; b; -z)
        Gen g(16);
        for (int i = 0; i < 100; ++i)
        {
            const double a = g.uniform(0.1, 5.0), b = g.uniform(0.2, 5.0), z = g.uniform(0.0, 30.0);
            const double direct = kummer_1f1(a, b, z).value;
            const double log_scaled = log_scaled_kummer_1f1(a, b, z, z);
            CHECK(rel_err(std::exp(log_scaled + z), direct) <= 1e-11);
            TruncationPolicy p;
            p.rel_tol = 1e-16;
            p.max_terms = 2000;
            const double kt = std::exp(z) * kummer_1f1<real40>(real40(b - a), real40(b), real40(-z),
                                                               SeriesControl<real40>::working()).value.convert_to<double>();
            CHECK(rel_err(kt, direct) <= 1e-11);
        }
    }

    TEST_CASE("log-scaled kummer beyond the overflow range")
    {
        // 1F1(1; 1; z) = e^z exactly.
        CHECK(log_scaled_kummer_1f1(1.0, 1.0, 2000.0, 2000.0) == doctest::Approx(0.0).epsilon(1e-12));
        // 1F1(a; a + 1; ...) grows like Gamma(a+1) e^z z^-1 for large z.
        const double a = 2.5, z = 900.0;
        const double asym = std::lgamma(a + 1) - std::lgamma(a) + z - std::log(z);
        CHECK(log_scaled_kummer_1f1(a, a + 1.0, z, 0.0) == doctest::Approx(asym).epsilon(1e-4));
    }

    TEST_CASE("extended precision agrees with double")
    {
        const auto ctl = SeriesControl<real80>::working();
        TruncationPolicy p;
        p.rel_tol = 1e-16;
        const double d = gauss_2f1(0.7, -3.2, 1.9, 0.6, p).value;
        const double e = gauss_2f1<real80>(real80(0.7), real80(-3.2), real80(1.9), real80(0.6), ctl).value.convert_to<double>();
        CHECK(rel_err(d, e) <= 1e-13);
        CHECK(rel_err(digamma(3.7), digamma<real80>(real80(3.7)).convert_to<double>()) <= 1e-15);
    }
}
