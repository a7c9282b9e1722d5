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

#include "kms/error.hpp"
#include "kms/quadrature.hpp"

#include <cmath>
#include <limits>
#include <numbers>

using namespace kms;

TEST_SUITE("quadrature")
{
    TEST_CASE("polynomials and smooth integrands")
    {
        CHECK(integrate([](double x) { return x * x; }, 0.0, 3.0).value == doctest::Approx(9.0).epsilon(1e-14));
        CHECK(integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi).value ==
              doctest::Approx(2.0).epsilon(1e-13));
        CHECK(integrate([](double x) { return std::exp(-x); }, 0.0, 50.0).value ==
              doctest::Approx(1.0 - std::exp(-50.0)).epsilon(1e-13));
    }

    TEST_CASE("very short intervals keep a sane error estimate")
    {
        const auto r = integrate([](double x) { return std::exp(x); }, 1.0, 1.0 + 1e-9);
        CHECK(r.value == doctest::Approx(std::exp(1.0) * std::expm1(1e-9)).epsilon(1e-12));
        CHECK(r.error <= 1e-20);
    }

    TEST_CASE("unreachable tolerance throws")
    {
        CHECK_THROWS_AS(integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-13), QuadratureError);
        CHECK_THROWS_AS(integrate([](double x) { return x; }, 0.0, INFINITY), QuadratureError);
    }

    TEST_CASE("non-finite integrand throws")
    {
        CHECK_THROWS_AS(integrate([](double) { return std::numeric_limits<double>::quiet_NaN(); }, 0.0, 1.0),
                        QuadratureError);
    }

    TEST_CASE("log-domain integral of a far-off Gaussian")
    {
        // exp(-(t - 40)^2 / 2 - 1000) integrates to sqrt(2 pi) e^-1000.
        auto lf = [](double t) { return -0.5 * (t - 40.0) * (t - 40.0) - 1000.0; };
        const auto r = integrate_log_peaked(lf, 0.0);
        CHECK(r.log_value == doctest::Approx(0.5 * std::log(2.0 * std::numbers::pi) - 1000.0).epsilon(1e-14));
    }

    TEST_CASE("log-domain integral with limits")
    {
        auto lf = [](double t) { return -t; };
        const auto r = integrate_log_peaked(lf, 1.0, 1e-12, 0.0);
        CHECK(r.log_value == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
        const auto half = integrate_log_peaked([](double t) { return -0.5 * t * t; }, 0.0, 1e-12, -INFINITY, 0.0);
        CHECK(std::exp(half.log_value) == doctest::Approx(std::sqrt(std::numbers::pi / 2.0)).epsilon(1e-12));
    }
}
