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

#include "cli.hpp"

#include "kms/version.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace
{
    using kms::cli::Command;

    // Flags that map one-to-one onto parse_params keys.
    struct FlagSet
    {
        std::vector<std::pair<std::string, std::string>> values; // key, text
        std::vector<std::string> positional;
        std::string config_file;
        std::string manifest;
        bool full = false;
    };

    void add_flags(CLI::App &sub, Command c, FlagSet &fs)
    {
        auto flag = [&](const std::string &name, const std::string &key, const std::string &help) {
            sub.add_option_function<std::string>(
                name, [&fs, key](const std::string &v) { fs.values.emplace_back(key, v); }, help);
        };
        if (c != Command::validate)
        {
            const int links = c == Command::op_relay ? 3 : 2;
            for (int i = 1; i <= links; ++i)
            {
                const std::string s = std::to_string(i);
                const std::string which = i == 3 ? " of the source-relay hop" : " of link " + s;
                flag("--k" + s, "kappa" + s, "kappa" + which);
                flag("--mu" + s, "mu" + s, "mu" + which);
                flag("--m" + s, "m" + s, "m" + which);
                flag("--gbar" + s, "gbar" + s, "mean SNR (linear)" + which + ", default 1");
            }
        }
        if (c == Command::pdf || c == Command::cdf || c == Command::mgf || c == Command::sample ||
            c == Command::op_cascade || c == Command::op_relay)
            flag("--grid", "grid", "min:max:points[:linear|log|dB]");
        flag("--rel-tol", "rel_tol", "series relative tolerance");
        flag("--max-terms", "max_terms", "series term limit");
        flag("--seed", "seed", "random seed");
        if (c == Command::cdf || c == Command::sample || c == Command::op_cascade || c == Command::op_relay ||
            c == Command::validate)
            flag("--mc-samples", "mc_samples", "Monte Carlo sample count");
        if (c == Command::moments)
            flag("--n", "n", "moment order (default: 0 to 4)");
        if (c == Command::validate)
            sub.add_flag("--full", fs.full, "10^6-sample acceptance run");
        flag("--out", "out", "output path (default: stdout)");
        sub.add_option("--manifest", fs.manifest, "JSON manifest path (default: derived from --out)");
        sub.add_option("--config", fs.config_file, "file of key=value parameters");
        sub.add_option("params", fs.positional, "key=value parameters");
    }

    std::string manifest_for(const std::string &out)
    {
        if (out.empty())
            return {};
        if (out.size() > 4 && out.compare(out.size() - 4, 4, ".csv") == 0)
            return out.substr(0, out.size() - 4) + ".json";
        return out + ".json";
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Statistics of products of two kappa-mu shadowed variates"};
    app.set_version_flag("--version", kms::version);
    app.require_subcommand(1);

    const Command commands[] = {Command::pdf,     Command::cdf,        Command::mgf,      Command::moments,
                                Command::af,      Command::cqei,       Command::op_cascade, Command::op_relay,
                                Command::sample,  Command::validate};
    const char *help[] = {"density of the product",
                          "distribution function of the product",
                          "moment generating function E[exp(sY)], s < 0",
                          "raw moments E[Y^n]",
                          "amount of fading",
                          "channel quality estimation index",
                          "outage probability of the cascaded channel",
                          "outage probability of a variable-gain relay",
                          "Monte Carlo empirical CDF against the analytic CDF",
                          "run the acceptance suite"};
    std::vector<FlagSet> sets(std::size(commands));
    std::vector<CLI::App *> subs;
    for (std::size_t i = 0; i < std::size(commands); ++i)
    {
        auto *sub = app.add_subcommand(kms::cli::command_name(commands[i]), help[i]);
        add_flags(*sub, commands[i], sets[i]);
        subs.push_back(sub);
    }

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kms::cli::exit_config;
    }

    std::size_t idx = 0;
    while (!subs[idx]->parsed())
        ++idx;
    const Command cmd = commands[idx];
    const FlagSet &fs = sets[idx];

    std::string text;
    if (!fs.config_file.empty())
    {
        std::ifstream f(fs.config_file);
        if (!f)
        {
            std::cerr << "error: cannot read " << fs.config_file << "\n";
            return kms::cli::exit_config;
        }
        std::ostringstream ss;
        ss << f.rdbuf();
        text = ss.str() + "\n";
    }
    for (const auto &p : fs.positional)
        text += p + "\n";
    for (const auto &[k, v] : fs.values)
        text += k + "=" + v + "\n";
    if (fs.full)
        text += "full=true\n";

    kms::cli::RunConfig cfg;
    try
    {
        cfg = kms::cli::parse_params(cmd, text);
    }
    catch (const kms::cli::ConfigError &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kms::cli::exit_config;
    }
    const std::string manifest = fs.manifest.empty() ? manifest_for(cfg.out) : fs.manifest;
    return kms::cli::run(cfg, std::cout, std::cerr, kms::cli::default_threads(), manifest);
}
