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

#include "kms/oracle.hpp"
#include "kms/quadrature.hpp"

#include <boost/math/special_functions/bessel.hpp>

#include <cmath>

using namespace kms;
using kms::test::Gen;
using kms::test::rel_err;

namespace
{
    const ShadowedParams fig1_a{5.0, 1.2, 0.5, 1.0}, fig1_b{2.1, 3.0, 0.8, 1.0};

    // Density of the product of Gamma(mu_i, rate a_i) variates.
    double gamma_product_pdf(double mu1, double a1, double mu2, double a2, double y)
    {
        const double a12 = a1 * a2, nu = 0.5 * (mu1 + mu2);
        const double log_f = std::log(2.0) + nu * std::log(a12) + (nu - 1.0) * std::log(y) - std::lgamma(mu1) -
                             std::lgamma(mu2);
        return std::exp(log_f) * boost::math::cyl_bessel_k(mu1 - mu2, 2.0 * std::sqrt(a12 * y));
    }
}

TEST_SUITE("oracle")
{
    TEST_CASE("convolution reduces to the Gamma product without line of sight")
    {
        Gen g(51);
        for (int i = 0; i < 20; ++i)
        {
            const double mu1 = g.uniform(0.5, 4.0), mu2 = g.uniform(0.5, 4.0);
            const double g1 = g.log_uniform(0.3, 3.0), g2 = g.log_uniform(0.3, 3.0), y = g.log_uniform(0.01, 10.0);
            const ProductModel m({0.0, mu1, 1.0, g1}, {0.0, mu2, 2.0, g2});
            CHECK(rel_err(pdf_by_convolution(m, y), gamma_product_pdf(mu1, mu1 / g1, mu2, mu2 / g2, y)) <= 1e-10);
        }
        // Two unit-mean exponentials: 2 K0(2 sqrt(y)).
        const ProductModel e({0.0, 1.0, 1.0, 1.0}, {0.0, 1.0, 1.0, 1.0});
        CHECK(rel_err(pdf_by_convolution(e, 0.7), 2.0 * boost::math::cyl_bessel_k(0, 2.0 * std::sqrt(0.7))) <= 1e-10);
    }

    TEST_CASE("convolution is symmetric and normalized")
    {
        const ProductModel f(fig1_a, fig1_b), g(fig1_b, fig1_a);
        for (double y : {0.01, 0.5, 3.0, 40.0})
            CHECK(rel_err(pdf_by_convolution(f, y), pdf_by_convolution(g, y)) <= 1e-10);
        auto lf = [&](double u) { return u + std::log(pdf_by_convolution(f, std::exp(u))); };
        CHECK(std::exp(integrate_log_peaked(lf, 0.0, 1e-10).log_value) == doctest::Approx(1.0).epsilon(1e-7));
    }

    TEST_CASE("quadrature CDF and MGF oracles")
    {
        const ProductModel f(fig1_a, fig1_b);
        for (double y : {0.05, 1.0, 6.0})
            CHECK(std::abs(cdf_by_quadrature(f, y) - cdf_product(f, y).value) <= 1e-10);
        CHECK(1.0 - cdf_by_quadrature(f, 1000.0) < 1e-20);
        CHECK(rel_err(mgf_by_quadrature(f, -1.0), mgf_product(f, -1.0).value) <= 1e-9);
    }

    TEST_CASE("robust wrappers keep the series where it is accurate")
    {
        const ProductModel f(fig1_a, fig1_b);
        const auto p = robust_pdf(f, 1.0);
        CHECK(p.method == SeriesMethod::residue);
        CHECK(p.value == pdf_product(f, 1.0).value);
        const auto c = robust_cdf(f, 3000.0);
        CHECK(c.method == SeriesMethod::quadrature);
        CHECK(c.value <= 1.0);
        CHECK(c.value == doctest::Approx(1.0).epsilon(1e-15));
    }

    TEST_CASE("product sampler moments")
    {
        Gen g(52);
        const ProductModel m(fig1_a, {2.1, 3.0, 0.8, 1.6});
        const auto x = sample_product(m, RandomStream(3), 1000000, 4);
        const auto e = compare_ecdf_grid(x, [&](double y) { return robust_cdf(m, y).value; }, 500);
        const double n = 1e6;
        const double var = e.second_moment - e.mean * e.mean;
        CHECK(std::abs(e.mean - 1.6) <= 4.0 * std::sqrt(var / n));
        double m4 = 0.0;
        for (double v : x)
            m4 += v * v * v * v;
        m4 /= n;
        const double se2 = std::sqrt((m4 - e.second_moment * e.second_moment) / n);
        CHECK(std::abs(e.second_moment - moment_product(m, 2)) <= 5.0 * se2);
        CHECK(e.ks_bound <= 5e-3);
    }

    TEST_CASE("product of two exponentials")
    {
        const ProductModel m({0.0, 1.0, 1.0, 1.0}, {0.0, 1.0, 1.0, 1.0});
        const auto x = sample_product(m, RandomStream(4), 200000, 2);
        // P(E1 E2 <= y) = 1 - 2 sqrt(y) K1(2 sqrt(y))
        const auto e = compare_ecdf(x, [](double y) {
            const double r = 2.0 * std::sqrt(y);
            return y <= 0.0 ? 0.0 : 1.0 - r * boost::math::cyl_bessel_k(1, r);
        });
        CHECK(e.ks_distance <= 1.63 / std::sqrt(200000.0));
    }

    TEST_CASE("sampling does not depend on the thread count")
    {
        const ProductModel m(fig1_a, fig1_b);
        const std::size_t n = 3 * sample_block_size + 17;
        const auto a = sample_product(m, RandomStream(5), n, 1);
        const auto b = sample_product(m, RandomStream(5), n, 5);
        CHECK(a == b);
        CHECK(a.size() == n);
        CHECK(a != sample_product(m, RandomStream(6), n, 1));
    }

    TEST_CASE("KS distance trivial cases")
    {
        CHECK(compare_ecdf({1.0, 2.0, 3.0}, [](double) { return 0.0; }).ks_distance == 1.0);
        CHECK(compare_ecdf({1.0}, [](double y) { return std::clamp(y / 2.0, 0.0, 1.0); }).ks_distance == 0.5);
        CHECK_THROWS_AS(compare_ecdf({}, [](double) { return 0.0; }), DomainError);
    }

    TEST_CASE("KS of samples drawn from the callable itself")
    {
        // 1.63 / sqrt(n) is the asymptotic 99% point.
        RandomStream rs(77);
        std::exponential_distribution<double> ex(1.0);
        const int reps = 5000, n = 20;
        int pass = 0;
        for (int r = 0; r < reps; ++r)
        {
            std::vector<double> x(n);
            for (auto &v : x)
                v = ex(rs.engine());
            pass += compare_ecdf(x, [](double y) { return -std::expm1(-y); }).ks_distance <= 1.63 / std::sqrt(n);
        }
        CHECK(pass >= 0.99 * reps);
    }

    TEST_CASE("grid KS bound dominates the exact distance")
    {
        Gen g(53);
        for (int i = 0; i < 20; ++i)
        {
            std::vector<double> x(5000);
            const double shift = g.uniform(-0.05, 0.05);
            for (auto &v : x)
                v = g.uniform(0.0, 1.0);
            auto cdf = [&](double y) { return std::clamp(y + shift, 0.0, 1.0); };
            const auto exact = compare_ecdf(x, cdf);
            const auto grid = compare_ecdf_grid(x, cdf, 100);
            CHECK(grid.ks_distance <= exact.ks_distance + 1e-15);
            CHECK(grid.ks_bound >= exact.ks_distance - 1e-15);
        }
    }

    TEST_CASE("relay Monte Carlo")
    {
        const RelayModel r{{2.0, 1.5, 1.0, 1.0}, ProductModel(fig1_a, fig1_b)};
        const auto a = relay_monte_carlo(r, {0.5, 1.0, 1e6}, RandomStream(9), 200000, 1);
        const auto b = relay_monte_carlo(r, {0.5, 1.0, 1e6}, RandomStream(9), 200000, 3);
        CHECK(a.op_min == b.op_min);
        CHECK(a.op_exact == b.op_exact);
        CHECK(a.op_min[2] == 1.0);
        for (std::size_t i = 0; i < 2; ++i)
        {
            CHECK(a.op_exact[i] >= a.op_min[i]);
            CHECK(a.stderr_min(i) == doctest::Approx(std::sqrt(a.op_min[i] * (1 - a.op_min[i]) / 200000.0)));
            CHECK(std::abs(a.op_min[i] - op_relay_variable_gain(r, i ? 1.0 : 0.5).value) <= 4.0 * a.stderr_min(i));
        }
    }
}
