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

#ifndef KMS_TOOLS_CLI_HPP
#define KMS_TOOLS_CLI_HPP

// Run configuration and driver behind the kms command-line tool. Kept apart
// from main() so the tests can drive it in-process.

#include "kms/error.hpp"
#include "kms/fading.hpp"
#include "kms/series.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace kms::cli
{
    enum class Command
    {
        pdf,
        cdf,
        mgf,
        moments,
        af,
        cqei,
        op_cascade,
        op_relay,
        sample,
        validate
    };

    Command parse_command(const std::string &name);
    std::string command_name(Command c);

    enum class GridScale
    {
        linear,
        log,
        dB
    };

    // min:max:points[:log|dB]
    struct GridSpec
    {
        double min = 0.0;
        double max = 1.0;
        std::size_t points = 2;
        GridScale scale = GridScale::linear;

        static GridSpec parse(const std::string &text);
        void validate() const;
        // Grid values in the spec's own unit (dB for dB grids).
        std::vector<double> values() const;
        std::string to_string() const;
    };

    // An invalid configuration; key() names the offending key when there is one.
    class ConfigError : public DomainError
    {
    public:
        ConfigError(std::string key, const std::string &what) : DomainError(what), key_(std::move(key)) {}
        const std::string &key() const { return key_; }

    private:
        std::string key_;
    };

    struct RunConfig
    {
        Command command = Command::pdf;
        // links[0], links[1]: the cascade; links[2]: source-relay hop (op-relay only).
        std::array<ShadowedParams, 3> links{};
        std::optional<GridSpec> grid; // per-command default when empty
        TruncationPolicy policy;
        std::uint64_t seed = 42;
        std::optional<std::size_t> mc_samples;
        std::optional<unsigned> n; // moment order
        bool full = false;         // validate: 10^6-sample acceptance run
        std::string out;           // CSV path; stdout when empty

        GridSpec effective_grid() const;
        void validate() const;
    };

    // Keys understood by parse_params, and those that must be present for `c`.
    const std::vector<std::string> &known_keys();
    std::vector<std::string> required_keys(Command c);

    // Whitespace-separated key=value pairs; '#' starts a comment. Later keys
    // override earlier ones. Throws ConfigError on unknown or malformed keys,
    // out-of-domain values, and missing required keys (all listed at once).
    RunConfig parse_params(Command c, const std::string &text);

    // RFC 4180 field quoting.
    std::string csv_field(const std::string &s);

    enum ExitCode : int
    {
        exit_ok = 0,
        exit_config = 2,
        exit_numerical = 3,
        exit_validation = 4
    };

    // Threads from KMS_THREADS, else the hardware concurrency.
    unsigned default_threads();

    // Evaluates the configured command. CSV (or the validation report) goes
    // to config.out or `out`; the JSON manifest to manifest_path when set.
    // Returns an ExitCode; diagnostics go to `err`.
    int run(const RunConfig &config, std::ostream &out, std::ostream &err, unsigned threads,
            const std::string &manifest_path = {});
}

#endif
