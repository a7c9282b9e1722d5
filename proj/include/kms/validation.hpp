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

#ifndef KMS_VALIDATION_HPP
#define KMS_VALIDATION_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace kms
{
    struct ValidationOptions
    {
        std::uint64_t seed = 42;
        std::size_t mc_samples = 1000000;
        unsigned threads = 1;
    };

    struct CriterionResult
    {
        int id = 0;
        std::string name;
        bool passed = false;
        std::string detail;
    };

    struct ValidationReport
    {
        std::uint64_t seed = 0;
        std::vector<CriterionResult> criteria;

        bool passed() const;
        // One "PASS|FAIL <id> <name>: <detail>" line per criterion.
        std::string to_text() const;
    };

    // Criteria 1 to 9 of the acceptance suite. Deterministic for a given seed
    // and sample count, whatever the thread count. on_result is invoked as each
    // criterion finishes.
    ValidationReport run_validation(const ValidationOptions &options,
                                    const std::function<void(const CriterionResult &)> &on_result = {});

    std::string format_line(const CriterionResult &r);
}

#endif
