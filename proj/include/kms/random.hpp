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

#ifndef KMS_RANDOM_HPP
#define KMS_RANDOM_HPP

#include <cstdint>
#include <random>

namespace kms
{
    inline std::uint64_t splitmix64(std::uint64_t x)
    {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    // Seedable, splittable random stream. Sub-streams are keyed by an index so
    // that work split into blocks draws the same numbers whatever the number of
    // threads.
    class RandomStream
    {
    public:
        explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0)
            : seed_(seed), stream_(stream), engine_(splitmix64(seed ^ splitmix64(stream))) {}

        RandomStream substream(std::uint64_t index) const
        {
            return RandomStream(seed_, splitmix64(stream_ + 0x632BE59BD9B4E019ULL * (index + 1)));
        }

        std::mt19937_64 &engine() { return engine_; }
        std::uint64_t seed() const { return seed_; }
        std::uint64_t stream() const { return stream_; }

    private:
        std::uint64_t seed_;
        std::uint64_t stream_;
        std::mt19937_64 engine_;
    };
}

#endif
