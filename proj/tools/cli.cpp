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

#include "kms/metrics.hpp"
#include "kms/oracle.hpp"
#include "kms/validation.hpp"
#include "kms/version.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace kms::cli
{
    namespace
    {
        const std::pair<const char *, Command> kCommands[] = {
            {"pdf", Command::pdf},         {"cdf", Command::cdf},
            {"mgf", Command::mgf},         {"moments", Command::moments},
            {"af", Command::af},           {"cqei", Command::cqei},
            {"op-cascade", Command::op_cascade}, {"op-relay", Command::op_relay},
            {"sample", Command::sample},   {"validate", Command::validate},
        };

        // Shortest round-trip representation.
        std::string num(double x)
        {
            char buf[64];
            const auto r = std::to_chars(buf, buf + sizeof buf, x);
            return std::string(buf, r.ptr);
        }

        double parse_double(const std::string &key, const std::string &v)
        {
            double x = 0.0;
            const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
            if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(x))
                throw ConfigError(key, key + ": expected a finite number (got '" + v + "')");
            return x;
        }

        template <class U>
        U parse_unsigned(const std::string &key, const std::string &v)
        {
            U x = 0;
            const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
            if (ec != std::errc() || p != v.data() + v.size())
                throw ConfigError(key, key + ": expected a non-negative integer (got '" + v + "')");
            return x;
        }

        bool parse_bool(const std::string &key, const std::string &v)
        {
            if (v == "1" || v == "true")
                return true;
            if (v == "0" || v == "false")
                return false;
            throw ConfigError(key, key + ": expected true or false (got '" + v + "')");
        }

        bool is_threshold_sweep(Command c) { return c == Command::op_cascade || c == Command::op_relay; }

        bool uses_grid(Command c)
        {
            return c == Command::pdf || c == Command::cdf || c == Command::mgf || c == Command::sample ||
                   is_threshold_sweep(c);
        }

        bool supports_mc(Command c)
        {
            return c == Command::cdf || c == Command::sample || is_threshold_sweep(c) || c == Command::validate;
        }

        void check_link(const ShadowedParams &p, int i)
        {
            const std::string s = std::to_string(i);
            if (!(p.kappa >= 0.0))
                throw ConfigError("kappa" + s, "kappa" + s + " must satisfy kappa >= 0 (got " + num(p.kappa) + ")");
            if (!(p.mu > 0.0))
                throw ConfigError("mu" + s, "mu" + s + " must satisfy mu > 0 (got " + num(p.mu) + ")");
            if (!(p.m > 0.0))
                throw ConfigError("m" + s, "m" + s + " must satisfy m > 0 (got " + num(p.m) + ")");
            if (!(p.gamma_bar > 0.0))
                throw ConfigError("gbar" + s, "gbar" + s + " must satisfy gamma_bar > 0 (got " + num(p.gamma_bar) + ")");
        }

        // Runs body(i) for i in [0, count) on up to `threads` workers.
        template <class Body>
        void parallel_for(std::size_t count, unsigned threads, Body &&body)
        {
            threads = static_cast<unsigned>(std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(count, 1)));
            std::atomic<std::size_t> next{0};
            std::exception_ptr failure;
            std::mutex mtx;
            auto worker = [&] {
                for (std::size_t i; (i = next.fetch_add(1)) < count;)
                {
                    try
                    {
                        body(i);
                    }
                    catch (...)
                    {
                        std::lock_guard lock(mtx);
                        if (!failure)
                            failure = std::current_exception();
                        next = count;
                    }
                }
            };
            std::vector<std::thread> pool;
            for (unsigned t = 1; t < threads; ++t)
                pool.emplace_back(worker);
            worker();
            for (auto &t : pool)
                t.join();
            if (failure)
                std::rethrow_exception(failure);
        }

        struct Row
        {
            std::string abscissa;
            double value = std::numeric_limits<double>::quiet_NaN();
            double tail = 0.0;
            std::string source;
            double mc = std::numeric_limits<double>::quiet_NaN();
            double mc_stderr = std::numeric_limits<double>::quiet_NaN();
            double mc_exact = std::numeric_limits<double>::quiet_NaN();
        };

        std::string source_name(SeriesMethod m)
        {
            switch (m)
            {
            case SeriesMethod::residue:
                return "series";
            case SeriesMethod::moment_asymptotic:
                return "moment_asymptotic";
            case SeriesMethod::quadrature:
                return "quadrature";
            }
            return "series";
        }

        void fill(Row &r, const SeriesValue &v, bool probability)
        {
            if (!std::isfinite(v.value))
                throw ConvergenceError("non-finite value at " + r.abscissa);
            r.value = probability ? std::clamp(v.value, 0.0, 1.0) : v.value;
            r.tail = v.tail_estimate;
            r.source = source_name(v.method);
        }

        nlohmann::json link_json(const ShadowedParams &p)
        {
            return {{"kappa", p.kappa}, {"mu", p.mu}, {"m", p.m}, {"gamma_bar", p.gamma_bar}};
        }

        std::size_t mc_count(const RunConfig &c)
        {
            if (c.mc_samples)
                return *c.mc_samples;
            return c.command == Command::sample ? 100000 : 0;
        }
    }

    Command parse_command(const std::string &name)
    {
        for (const auto &[n, c] : kCommands)
            if (name == n)
                return c;
        throw ConfigError("command", "unknown command '" + name + "'");
    }

    std::string command_name(Command c)
    {
        for (const auto &[n, cc] : kCommands)
            if (cc == c)
                return n;
        return "?";
    }

    GridSpec GridSpec::parse(const std::string &text)
    {
        std::vector<std::string> parts;
        std::stringstream ss(text);
        for (std::string p; std::getline(ss, p, ':');)
            parts.push_back(p);
        if (parts.size() < 3 || parts.size() > 4)
            throw ConfigError("grid", "grid: expected min:max:points[:log|dB] (got '" + text + "')");
        GridSpec g;
        g.min = parse_double("grid", parts[0]);
        g.max = parse_double("grid", parts[1]);
        g.points = parse_unsigned<std::size_t>("grid", parts[2]);
        if (parts.size() == 4)
        {
            if (parts[3] == "log")
                g.scale = GridScale::log;
            else if (parts[3] == "dB")
                g.scale = GridScale::dB;
            else if (parts[3] == "linear")
                g.scale = GridScale::linear;
            else
                throw ConfigError("grid", "grid: scale must be linear, log or dB (got '" + parts[3] + "')");
        }
        g.validate();
        return g;
    }

    void GridSpec::validate() const
    {
        if (!(min < max))
            throw ConfigError("grid", "grid must satisfy min < max (got " + num(min) + ":" + num(max) + ")");
        if (points < 2)
            throw ConfigError("grid", "grid must satisfy points >= 2 (got " + std::to_string(points) + ")");
        if (points > 1000000)
            throw ConfigError("grid", "grid must satisfy points <= 1000000");
        if (scale == GridScale::log && !(min > 0.0))
            throw ConfigError("grid", "log grid must satisfy min > 0");
    }

    std::vector<double> GridSpec::values() const
    {
        std::vector<double> v(points);
        for (std::size_t i = 0; i < points; ++i)
        {
            const double f = static_cast<double>(i) / static_cast<double>(points - 1);
            if (scale == GridScale::log)
                v[i] = std::pow(10.0, std::log10(min) + f * (std::log10(max) - std::log10(min)));
            else
                v[i] = min + f * (max - min);
        }
        v.front() = min;
        v.back() = max;
        return v;
    }

    std::string GridSpec::to_string() const
    {
        static const char *names[] = {"linear", "log", "dB"};
        return num(min) + ":" + num(max) + ":" + std::to_string(points) + ":" + names[static_cast<int>(scale)];
    }

    GridSpec RunConfig::effective_grid() const
    {
        if (grid)
            return *grid;
        switch (command)
        {
        case Command::mgf:
            return {-2.0, -0.01, 50, GridScale::linear};
        case Command::op_cascade:
        case Command::op_relay:
            return {-10.0, 10.0, 21, GridScale::dB};
        default:
            return {0.01, 5.0, 50, GridScale::log};
        }
    }

    void RunConfig::validate() const
    {
        if (command != Command::validate)
        {
            check_link(links[0], 1);
            check_link(links[1], 2);
        }
        if (command == Command::op_relay)
            check_link(links[2], 3);
        try
        {
            policy.validate();
        }
        catch (const DomainError &e)
        {
            throw ConfigError("policy", e.what());
        }
        if (grid && !uses_grid(command))
            throw ConfigError("grid", "grid is not used by " + command_name(command));
        if (uses_grid(command))
        {
            const GridSpec g = effective_grid();
            g.validate();
            if (g.scale == GridScale::dB && !is_threshold_sweep(command))
                throw ConfigError("grid", "dB grids are only permitted for threshold sweeps (op-cascade, op-relay)");
            if (command == Command::mgf && !(g.max < 0.0))
                throw ConfigError("grid", "mgf grid must satisfy max < 0");
            if (command != Command::mgf && g.scale != GridScale::dB && !(g.min > 0.0))
                throw ConfigError("grid", "grid must satisfy min > 0 for " + command_name(command));
        }
        if (mc_samples && !supports_mc(command))
            throw ConfigError("mc_samples", "mc_samples is only used by cdf, sample, op-cascade, op-relay and validate");
        if (mc_samples && *mc_samples < 1000)
            throw ConfigError("mc_samples", "mc_samples must satisfy mc_samples >= 1000");
        if (n && command != Command::moments)
            throw ConfigError("n", "n is only used by moments");
        if (n && *n > 100)
            throw ConfigError("n", "n must satisfy n <= 100");
        if (full && command != Command::validate)
            throw ConfigError("full", "full is only used by validate");
    }

    const std::vector<std::string> &known_keys()
    {
        static const std::vector<std::string> keys = [] {
            std::vector<std::string> k;
            for (int i = 1; i <= 3; ++i)
                for (const char *f : {"kappa", "mu", "m", "gbar"})
                    k.push_back(f + std::to_string(i));
            for (const char *f : {"grid", "rel_tol", "max_terms", "seed", "mc_samples", "n", "full", "out"})
                k.emplace_back(f);
            return k;
        }();
        return keys;
    }

    std::vector<std::string> required_keys(Command c)
    {
        if (c == Command::validate)
            return {};
        std::vector<std::string> k = {"kappa1", "mu1", "m1", "kappa2", "mu2", "m2"};
        if (c == Command::op_relay)
            k.insert(k.end(), {"kappa3", "mu3", "m3"});
        return k;
    }

    RunConfig parse_params(Command c, const std::string &text)
    {
        std::map<std::string, std::string> kv;
        std::istringstream lines(text);
        for (std::string line; std::getline(lines, line);)
        {
            if (const auto hash = line.find('#'); hash != std::string::npos)
                line.erase(hash);
            std::istringstream words(line);
            for (std::string w; words >> w;)
            {
                const auto eq = w.find('=');
                if (eq == std::string::npos || eq == 0)
                    throw ConfigError(w, "expected key=value (got '" + w + "')");
                const std::string key = w.substr(0, eq);
                const auto &known = known_keys();
                if (std::find(known.begin(), known.end(), key) == known.end())
                    throw ConfigError(key, "unknown key '" + key + "'");
                kv[key] = w.substr(eq + 1);
            }
        }

        RunConfig cfg;
        cfg.command = c;
        for (const auto &[key, v] : kv)
        {
            if (key == "grid")
                cfg.grid = GridSpec::parse(v);
            else if (key == "rel_tol")
                cfg.policy.rel_tol = parse_double(key, v);
            else if (key == "max_terms")
                cfg.policy.max_terms = parse_unsigned<std::size_t>(key, v);
            else if (key == "seed")
                cfg.seed = parse_unsigned<std::uint64_t>(key, v);
            else if (key == "mc_samples")
                cfg.mc_samples = parse_unsigned<std::size_t>(key, v);
            else if (key == "n")
                cfg.n = parse_unsigned<unsigned>(key, v);
            else if (key == "full")
                cfg.full = parse_bool(key, v);
            else if (key == "out")
                cfg.out = v;
            else
            {
                const int i = key.back() - '1';
                const std::string field = key.substr(0, key.size() - 1);
                ShadowedParams &p = cfg.links[i];
                const double x = parse_double(key, v);
                if (field == "kappa")
                    p.kappa = x;
                else if (field == "mu")
                    p.mu = x;
                else if (field == "m")
                    p.m = x;
                else
                    p.gamma_bar = x;
                check_link(p, i + 1);
            }
        }

        std::string missing;
        for (const auto &k : required_keys(c))
            if (!kv.count(k))
                missing += (missing.empty() ? "" : ", ") + k;
        if (!missing.empty())
            throw ConfigError("missing", "missing required keys: " + missing);
        cfg.validate();
        return cfg;
    }

    std::string csv_field(const std::string &s)
    {
        if (s.find_first_of(",\"\r\n") == std::string::npos)
            return s;
        std::string q = "\"";
        for (char ch : s)
        {
            if (ch == '"')
                q += '"';
            q += ch;
        }
        return q + "\"";
    }

    unsigned default_threads()
    {
        if (const char *env = std::getenv("KMS_THREADS"))
        {
            unsigned t = 0;
            const std::string s(env);
            const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), t);
            if (ec == std::errc() && p == s.data() + s.size() && t > 0)
                return t;
        }
        return std::max(1u, std::thread::hardware_concurrency());
    }

    namespace
    {
        struct Table
        {
            std::vector<std::string> header;
            std::vector<Row> rows;
            bool mc = false, mc_exact = false;
        };

        std::string to_csv(const Table &t)
        {
            std::string s;
            auto line = [&](const std::vector<std::string> &fields) {
                for (std::size_t i = 0; i < fields.size(); ++i)
                    s += (i ? "," : "") + csv_field(fields[i]);
                s += "\r\n";
            };
            line(t.header);
            for (const auto &r : t.rows)
            {
                std::vector<std::string> f = {r.abscissa, num(r.value), num(r.tail), r.source};
                if (t.mc)
                {
                    f.push_back(num(r.mc));
                    f.push_back(num(r.mc_stderr));
                }
                if (t.mc_exact)
                    f.push_back(num(r.mc_exact));
                line(f);
            }
            return s;
        }

        Table evaluate(const RunConfig &cfg, unsigned threads, std::vector<std::string> &warnings)
        {
            Table t;
            const auto cmd = cfg.command;
            const ProductModel model(cfg.links[0], cfg.links[1]);
            warnings.insert(warnings.end(), model.warnings().begin(), model.warnings().end());
            const std::size_t mc = mc_count(cfg);
            t.mc = mc > 0;

            if (cmd == Command::moments || cmd == Command::af || cmd == Command::cqei)
            {
                t.header = {cmd == Command::moments ? "n" : "metric", "value", "tail_estimate", "source"};
                if (cmd == Command::moments)
                {
                    const unsigned lo = cfg.n.value_or(0), hi = cfg.n.value_or(4);
                    for (unsigned k = lo; k <= hi; ++k)
                        t.rows.push_back({std::to_string(k), moment_product(model, k), 0.0, "closed_form"});
                }
                else if (cmd == Command::af)
                    t.rows.push_back({"af", amount_of_fading(model), 0.0, "closed_form"});
                else
                    t.rows.push_back({"cqei", cqei(model), 0.0, "closed_form"});
                return t;
            }

            const GridSpec grid = cfg.effective_grid();
            const auto xs = grid.values();
            const bool db = grid.scale == GridScale::dB;
            std::vector<double> lin(xs);
            if (db)
                for (auto &x : lin)
                    x = std::pow(10.0, x / 10.0);

            const char *absc = cmd == Command::mgf ? "s" : is_threshold_sweep(cmd) ? (db ? "gamma_th_dB" : "gamma_th")
                                                                                  : "y";
            t.header = {absc, "value", "tail_estimate", "source"};
            if (t.mc)
                t.header.insert(t.header.end(), {"mc_value", "mc_stderr"});
            t.rows.resize(xs.size());
            for (std::size_t i = 0; i < xs.size(); ++i)
                t.rows[i].abscissa = num(xs[i]);

            std::unique_ptr<RelayModel> relay;
            if (cmd == Command::op_relay)
                relay = std::make_unique<RelayModel>(RelayModel{cfg.links[2], model});

            parallel_for(xs.size(), threads, [&](std::size_t i) {
                Row &r = t.rows[i];
                const double x = lin[i];
                switch (cmd)
                {
                case Command::pdf:
                    fill(r, robust_pdf(model, x, cfg.policy), false);
                    break;
                case Command::mgf:
                    fill(r, robust_mgf(model, x, cfg.policy), false);
                    break;
                case Command::cdf:
                case Command::sample:
                case Command::op_cascade:
                    fill(r, robust_cdf(model, x, cfg.policy), true);
                    break;
                case Command::op_relay:
                {
                    auto v = op_relay_variable_gain(*relay, x, cfg.policy);
                    if (v.precision_loss || v.clamped || !std::isfinite(v.value))
                    {
                        const auto rd = robust_cdf(model, x, cfg.policy);
                        v.value = combine_relay_outage(cdf_single(cfg.links[2], x), std::clamp(rd.value, 0.0, 1.0));
                        v.tail_estimate = rd.tail_estimate;
                        v.method = rd.method;
                    }
                    fill(r, v, true);
                    break;
                }
                default:
                    break;
                }
            });

            std::size_t fallback = 0;
            for (const auto &r : t.rows)
                fallback += r.source == "quadrature";
            if (fallback)
                warnings.push_back(std::to_string(fallback) +
                                   " grid points lost precision in the series and use the quadrature oracle");

            if (!t.mc)
                return t;
            const RandomStream master(cfg.seed);
            if (cmd == Command::op_relay)
            {
                const auto res = relay_monte_carlo(*relay, lin, master, mc, threads);
                t.mc_exact = true;
                t.header.push_back("mc_exact_value");
                for (std::size_t i = 0; i < xs.size(); ++i)
                {
                    t.rows[i].mc = res.op_min[i];
                    t.rows[i].mc_stderr = res.stderr_min(i);
                    t.rows[i].mc_exact = res.op_exact[i];
                }
                return t;
            }
            auto samples = sample_product(model, master, mc, threads);
            std::sort(samples.begin(), samples.end());
            const double total = static_cast<double>(samples.size());
            for (std::size_t i = 0; i < xs.size(); ++i)
            {
                const double p =
                    static_cast<double>(std::upper_bound(samples.begin(), samples.end(), lin[i]) - samples.begin()) / total;
                t.rows[i].mc = p;
                t.rows[i].mc_stderr = std::sqrt(p * (1.0 - p) / total);
            }
            return t;
        }

        nlohmann::json config_json(const RunConfig &cfg)
        {
            nlohmann::json j;
            j["command"] = command_name(cfg.command);
            if (cfg.command != Command::validate)
            {
                j["link1"] = link_json(cfg.links[0]);
                j["link2"] = link_json(cfg.links[1]);
            }
            if (cfg.command == Command::op_relay)
                j["link3"] = link_json(cfg.links[2]);
            if (uses_grid(cfg.command))
                j["grid"] = cfg.effective_grid().to_string();
            j["rel_tol"] = cfg.policy.rel_tol;
            j["max_terms"] = cfg.policy.max_terms;
            j["seed"] = cfg.seed;
            j["mc_samples"] = mc_count(cfg);
            if (cfg.command == Command::moments)
                j["n"] = cfg.n ? nlohmann::json(*cfg.n) : nlohmann::json("0..4");
            if (cfg.command == Command::validate)
                j["full"] = cfg.full;
            j["out"] = cfg.out;
            return j;
        }
    }

    int run(const RunConfig &config, std::ostream &out, std::ostream &err, unsigned threads,
            const std::string &manifest_path)
    {
        std::string text;
        std::vector<std::string> warnings;
        int code = exit_ok;
        nlohmann::json extra;
        try
        {
            config.validate();
            if (config.command == Command::validate)
            {
                ValidationOptions o;
                o.seed = config.seed;
                o.mc_samples = config.mc_samples.value_or(config.full ? 1000000 : 100000);
                o.threads = threads;
                const auto report = run_validation(o);
                text = report.to_text();
                extra["passed"] = report.passed();
                if (!report.passed())
                    code = exit_validation;
            }
            else
                text = to_csv(evaluate(config, threads, warnings));
        }
        catch (const ConfigError &e)
        {
            err << "error: " << e.what() << "\n";
            return exit_config;
        }
        catch (const DomainError &e)
        {
            err << "error: " << e.what() << "\n";
            return exit_config;
        }
        catch (const ConvergenceError &e)
        {
            err << "numerical failure: " << e.what() << "\n";
            return exit_numerical;
        }
        catch (const QuadratureError &e)
        {
            err << "numerical failure: " << e.what() << "\n";
            return exit_numerical;
        }

        if (config.out.empty())
            out << text;
        else
        {
            std::ofstream f(config.out, std::ios::binary);
            if (!(f << text))
            {
                err << "error: cannot write " << config.out << "\n";
                return exit_config;
            }
        }
        for (const auto &w : warnings)
            err << "warning: " << w << "\n";

        if (!manifest_path.empty())
        {
            nlohmann::json m;
            m["tool"] = "kms";
            m["version"] = kms::version;
            m["config"] = config_json(config);
            m["seed"] = config.seed;
            m["warnings"] = warnings;
            m["exit_code"] = code;
            if (!extra.is_null())
                m["result"] = extra;
            std::ofstream f(manifest_path, std::ios::binary);
            if (!(f << m.dump(2) << "\n"))
            {
                err << "error: cannot write " << manifest_path << "\n";
                return exit_config;
            }
        }
        return code;
    }
}
