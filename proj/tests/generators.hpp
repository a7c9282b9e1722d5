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

#ifndef KMS_TESTS_GENERATORS_HPP
#define KMS_TESTS_GENERATORS_HPP

// Hand-rolled generators for the property tests. Every generator is seeded
// explicitly so failures reproduce.

#include "kms/fading.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace kms::test
{
    class Gen
    {
    public:
        explicit Gen(std::uint64_t seed) : rng_(seed) {}

        double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

        double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }

        int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

        // A link with parameters in the ranges typical of published outage figures.
        ShadowedParams link(bool random_mean = false)
        {
            ShadowedParams p;
            p.kappa = uniform(0.0, 6.0);
            p.mu = uniform(0.6, 4.0);
            p.m = log_uniform(0.4, 20.0);
            p.gamma_bar = random_mean ? log_uniform(0.3, 3.0) : 1.0;
            return p;
        }

        // Pair whose mu gap stays away from the integers.
        std::pair<ShadowedParams, ShadowedParams> non_integer_pair()
        {
            for (;;)
            {
                auto a = link(), b = link();
                const double g = std::abs(a.mu - b.mu);
                if (std::abs(g - std::round(g)) > 0.05)
                    return {a, b};
            }
        }

        std::mt19937_64 &engine() { return rng_; }

    private:
        std::mt19937_64 rng_;
    };

    inline double rel_err(double got, double want)
    {
        return std::abs(got - want) / std::abs(want);
    }
}

#endif
