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

#include "kms/validation.hpp"

#include "kms/metrics.hpp"
#include "kms/oracle.hpp"
#include "kms/quadrature.hpp"
#include "kms/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <map>
#include <memory>
#include <random>

namespace kms
{
    namespace
    {
        std::string fmt(const char *f, ...)
        {
            char buf[1024];
            va_list ap;
            va_start(ap, f);
            std::vsnprintf(buf, sizeof buf, f, ap);
            va_end(ap);
            return buf;
        }

        double rel_diff(double a, double b)
        {
            return std::abs(a - b) / std::max(std::abs(b), std::numeric_limits<double>::min());
        }

        double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

        struct NamedSet
        {
            const char *name;
            ShadowedParams a, b;
        };

        // Two figure families (non-integer gap), one integer gap, one equal mu.
        const NamedSet kSets[] = {
            {"fig1", {5.0, 1.2, 0.5, 1.0}, {2.1, 3.0, 0.8, 1.0}},
            {"fig2", {2.2, 1.2, 10.0, 1.0}, {0.9, 3.2, 4.0, 1.0}},
            {"gap2", {1.0, 1.5, 2.0, 1.0}, {1.0, 3.5, 2.0, 1.0}},
            {"gap0", {1.0, 2.0, 2.0, 1.0}, {3.0, 2.0, 5.0, 1.0}},
        };

        struct Context
        {
            ValidationOptions options;
            std::vector<std::unique_ptr<ProductModel>> models;
        };

        CriterionResult oracle_equivalence(Context &ctx)
        {
            double worst = 0.0, worst_y = 0.0;
            std::size_t worst_set = 0, flagged = 0;
            for (std::size_t k = 0; k < ctx.models.size(); ++k)
            {
                const auto &m = *ctx.models[k];
                for (int i = 0; i < 40; ++i)
                {
                    const double y = 0.01 * std::pow(500.0, i / 39.0);
                    const auto v = pdf_product(m, y);
                    if (v.precision_loss || !std::isfinite(v.value))
                        ++flagged;
                    const double r = rel_diff(v.value, pdf_by_convolution(m, y));
                    if (!(r <= worst))
                    {
                        worst = r;
                        worst_y = y;
                        worst_set = k;
                    }
                }
            }
            CriterionResult r{1, "oracle equivalence", worst <= 1e-6 && flagged == 0, ""};
            r.detail = fmt("max rel diff series vs convolution %.2e (limit 1e-6) at set %s y=%.4g; 4 sets x 40 points; "
                           "precision-loss flags %zu",
                           worst, kSets[worst_set].name, worst_y, flagged);
            return r;
        }

        CriterionResult monte_carlo(Context &ctx)
        {
            const RandomStream master(ctx.options.seed);
            double worst = 0.0;
            std::string per_set;
            std::size_t fallback = 0;
            for (std::size_t k = 0; k < ctx.models.size(); ++k)
            {
                const auto &m = *ctx.models[k];
                const auto samples = sample_product(m, master.substream(200 + k), ctx.options.mc_samples, ctx.options.threads);
                const auto e = compare_ecdf_grid(samples, [&](double y) {
                    const auto v = robust_cdf(m, y);
                    fallback += v.method == SeriesMethod::quadrature;
                    return v.value;
                }, 2000);
                worst = std::max(worst, e.ks_bound);
                per_set += fmt("%s%s ks=%.2e bound=%.2e", k ? ", " : "", kSets[k].name, e.ks_distance, e.ks_bound);
            }
            CriterionResult r{2, "monte carlo agreement", worst <= 5e-3, ""};
            r.detail = fmt("%zu samples per set; %s (limit 5e-3 on the bound); quadrature fallback at %zu grid points",
                           ctx.options.mc_samples, per_set.c_str(), fallback);
            return r;
        }

        // Integral of y^p f_Y(y) over (0, inf) in u = ln y; f_Y from the
        // series, or the convolution oracle where the series flags precision loss.
        double series_moment_quadrature(const ProductModel &m, double p, std::map<double, double> &memo,
                                        std::size_t &fallback)
        {
            auto log_pdf = [&](double u) {
                const auto it = memo.find(u);
                if (it != memo.end())
                    return it->second;
                const auto v = robust_pdf(m, std::exp(u));
                fallback += v.method == SeriesMethod::quadrature;
                const double l = v.value > 0.0 ? std::log(v.value) : -std::numeric_limits<double>::infinity();
                memo.emplace(u, l);
                return l;
            };
            auto log_f = [&](double u) { return (p + 1.0) * u + log_pdf(u); };
            const double u0 = std::log(m.link1().gamma_bar * m.link2().gamma_bar);
            return std::exp(integrate_log_peaked(log_f, u0, 1e-12).log_value);
        }

        CriterionResult moments(Context &ctx)
        {
            double worst = 0.0, worst_mean = 0.0;
            std::size_t fallback = 0, nodes = 0;
            std::string where;
            for (std::size_t k = 0; k < ctx.models.size(); ++k)
            {
                const auto &m = *ctx.models[k];
                std::map<double, double> memo;
                for (unsigned n = 1; n <= 4; ++n)
                {
                    const double r = rel_diff(series_moment_quadrature(m, n, memo, fallback), moment_product(m, n));
                    if (r > worst)
                    {
                        worst = r;
                        where = fmt("%s n=%u", kSets[k].name, n);
                    }
                }
                nodes += memo.size();
                worst_mean = std::max(worst_mean, rel_diff(moment_product(m, 1), 1.0));
            }
            // Exact mean for unequal mean powers.
            RandomStream rs = RandomStream(ctx.options.seed).substream(300);
            std::uniform_real_distribution<double> u(0.0, 1.0);
            for (int i = 0; i < 100; ++i)
            {
                const ShadowedParams a{10.0 * u(rs.engine()), 0.3 + 4.7 * u(rs.engine()), 0.3 + 19.7 * u(rs.engine()), 0.2 + 4.8 * u(rs.engine())};
                const ShadowedParams b{10.0 * u(rs.engine()), 0.3 + 4.7 * u(rs.engine()), 0.3 + 19.7 * u(rs.engine()), 0.2 + 4.8 * u(rs.engine())};
                const ProductModel m(a, b);
                worst_mean = std::max(worst_mean, rel_diff(moment_product(m, 1), a.gamma_bar * b.gamma_bar));
            }
            CriterionResult r{3, "moment identities", worst <= 1e-7 && worst_mean <= 1e-12, ""};
            r.detail = fmt("max rel diff closed form vs quadrature of the density %.2e (limit 1e-7) at %s; mean vs "
                           "gbar1*gbar2 max rel diff %.2e over 4 sets + 100 random draws (limit 1e-12); oracle fallback at "
                           "%zu of %zu density nodes",
                           worst, where.c_str(), worst_mean, fallback, nodes);
            return r;
        }

        ShadowedParams random_link(RandomStream &rs)
        {
            std::uniform_real_distribution<double> u(0.0, 1.0);
            auto &e = rs.engine();
            return {10.0 * u(e), 0.3 + 4.7 * u(e), 0.3 + 19.7 * u(e), 0.2 + 4.8 * u(e)};
        }

        CriterionResult fading_metrics(Context &ctx)
        {
            RandomStream rs = RandomStream(ctx.options.seed).substream(400);
            double worst_af = 0.0, worst_cqei = 0.0;
            for (int i = 0; i < 100; ++i)
            {
                const auto a = random_link(rs);
                const auto b = random_link(rs);
                const ProductModel m(a, b);
                const double m1 = moment_product(m, 1), m2 = moment_product(m, 2);
                const double var = m2 - m1 * m1;
                worst_af = std::max(worst_af, rel_diff(amount_of_fading(m), m2 / (m1 * m1) - 1.0));
                worst_cqei = std::max(worst_cqei, rel_diff(cqei(m), var / (m1 * m1 * m1)));
            }

            const double grid[] = {0.5, 1.0, 2.0, 5.0, 10.0};
            std::size_t violations = 0, checks = 0;
            std::uniform_real_distribution<double> u(0.0, 1.0);
            for (int i = 0; i < 10; ++i)
            {
                auto &e = rs.engine();
                const ShadowedParams base_a{0.05 + 9.95 * u(e), 0.3 + 4.7 * u(e), 1.0, 1.0};
                const ShadowedParams base_b{0.05 + 9.95 * u(e), 0.3 + 4.7 * u(e), 1.0, 1.0};
                for (int which = 0; which < 2; ++which)
                {
                    double prev = std::numeric_limits<double>::infinity();
                    for (double mv : grid)
                    {
                        ShadowedParams a = base_a, b = base_b;
                        (which == 0 ? a : b).m = mv;
                        const double af = amount_of_fading(ProductModel(a, b));
                        violations += !(af < prev);
                        ++checks;
                        prev = af;
                    }
                }
            }
            CriterionResult r{4, "fading metrics", worst_af <= 1e-10 && worst_cqei <= 1e-10 && violations == 0, ""};
            r.detail = fmt("100 random draws: AF max rel diff %.2e, CQEI max rel diff %.2e (limit 1e-10); AF strictly "
                           "decreasing in m1 and m2 over {0.5,1,2,5,10} x 10 random (kappa, mu): %zu violations in %zu steps",
                           worst_af, worst_cqei, violations, checks);
            return r;
        }

        CriterionResult case_continuity(Context &)
        {
            const double delta = 1e-4;
            double worst = 0.0;
            std::string where;
            for (unsigned n = 0; n <= 2; ++n)
            {
                const ShadowedParams l1{1.0, 1.5, 2.0, 1.0};
                ShadowedParams l2{2.0, 1.5 + n, 3.0, 1.0};
                const ProductModel exact(l1, l2);
                for (double sgn : {-1.0, 1.0})
                {
                    l2.mu = 1.5 + n + sgn * delta;
                    const ProductModel near(l1, l2);
                    for (double y : {0.1, 1.0, 3.0})
                    {
                        const double r = rel_diff(pdf_product(near, y).value, pdf_product(exact, y).value);
                        if (r > worst)
                        {
                            worst = r;
                            where = fmt("N=%u delta=%+.0e y=%g", n, sgn * delta, y);
                        }
                    }
                }
            }
            CriterionResult r{5, "case continuity", worst <= 1e-3, ""};
            r.detail = fmt("max rel diff between integer-gap and perturbed non-integer-gap densities %.2e (limit 1e-3) "
                           "at %s; N in {0,1,2}, mu gap perturbed by +-1e-4, y in {0.1,1,3}",
                           worst, where.c_str());
            return r;
        }

        CriterionResult derivative(Context &)
        {
            // The difference quotient is formed in 80 digits; only its O(h^2)
            // truncation error is left.
            const real80 h(1e-5);
            const auto ctl = SeriesControl<real80>::working();
            double worst = 0.0;
            std::size_t points = 0;
            for (double a : {0.5, 1.0, 2.0, 5.0})
                for (unsigned n : {0u, 1u, 3u, 7u})
                    for (double c : {1.2, 3.0})
                        for (double z : {0.1, 0.5, 0.9})
                        {
                            const real80 b = -real80(n), ra(a), rc(c), rz(z);
                            const double fd = ((gauss_2f1<real80>(ra, b + h, rc, rz, ctl).value -
                                                gauss_2f1<real80>(ra, b - h, rc, rz, ctl).value) /
                                               (2 * h))
                                                  .convert_to<double>();
                            const double an = gauss_2f1_db_at_neg_int(a, n, c, z).value;
                            worst = std::max(worst, rel_diff(an, fd));
                            ++points;
                        }
            double worst_log = 0.0;
            for (double a : {0.5, 1.0, 2.0, 5.0})
                for (double z : {0.1, 0.5, 0.9})
                    worst_log = std::max(worst_log, rel_diff(gauss_2f1_db_at_neg_int(a, 0, a, z).value, -std::log1p(-z)));
            CriterionResult r{6, "derivative identity", worst <= 1e-6 && worst_log <= 1e-10, ""};
            r.detail = fmt("max rel diff vs central difference (h=1e-5) %.2e over %zu points (limit 1e-6); b-derivative "
                           "at b=0, a=c vs -ln(1-z) max rel diff %.2e (limit 1e-10)",
                           worst, points, worst_log);
            return r;
        }

        RelayModel relay_setup()
        {
            return {{2.0, 1.5, 1.0, 1.0}, ProductModel(kSets[0].a, kSets[0].b)};
        }

        CriterionResult relay(Context &ctx)
        {
            const auto rel = relay_setup();
            const double db[] = {-5.0, 0.0, 5.0};
            std::vector<double> th;
            for (double d : db)
                th.push_back(db_to_linear(d));
            const auto mc = relay_monte_carlo(rel, th, RandomStream(ctx.options.seed).substream(700),
                                              ctx.options.mc_samples, ctx.options.threads);
            bool ok = true;
            std::string pts;
            for (std::size_t i = 0; i < th.size(); ++i)
            {
                const double an = op_relay_variable_gain(rel, th[i]).value;
                const double se = mc.stderr_min(i);
                const double z = std::abs(an - mc.op_min[i]) / se;
                ok = ok && z <= 3.0;
                pts += fmt("%s%+g dB analytic=%.6f mc=%.6f (%.2f SE), exact-SNR gap %.2e", i ? "; " : "", db[i], an,
                           mc.op_min[i], z, mc.op_exact[i] - mc.op_min[i]);
            }
            CriterionResult r{7, "relay outage", ok, ""};
            r.detail = fmt("%zu trials; %s (limit 3 SE)", mc.trials, pts.c_str());
            return r;
        }

        struct Family
        {
            const char *name;
            ShadowedParams a, b;
            int link;       // 0 or 1
            double ShadowedParams::*field;
            double values[4];
        };

        const Family kFamilies[] = {
            {"m1", {5.0, 1.2, 0}, {2.1, 3.0, 0.8}, 0, &ShadowedParams::m, {0.5, 1.3, 2.5, 4.4}},
            {"m2", {5.0, 1.2, 0.5}, {2.1, 3.0, 0}, 1, &ShadowedParams::m, {0.5, 1.3, 2.5, 4.4}},
            {"mu1", {0.9, 0, 4.0}, {2.2, 2.0, 10.0}, 0, &ShadowedParams::mu, {0.8, 1.5, 2.5, 3.5}},
            {"mu2", {0.9, 2.0, 4.0}, {2.2, 0, 10.0}, 1, &ShadowedParams::mu, {0.8, 1.5, 2.5, 3.5}},
            {"kappa1", {0, 1.5, 4.0}, {2.0, 2.1, 10.0}, 0, &ShadowedParams::kappa, {0.5, 1.0, 2.0, 5.0}},
            {"kappa2", {2.0, 1.5, 4.0}, {0, 2.1, 10.0}, 1, &ShadowedParams::kappa, {0.5, 1.0, 2.0, 5.0}},
        };

        // Smallest threshold (dB, 0.5 dB steps up to 10 dB) at which the
        // outage is no longer strictly decreasing along the family; NaN if none.
        double family_crossover(const std::vector<ProductModel> &models)
        {
            for (int i = 0; i <= 20; ++i)
            {
                const double d = 0.5 * i;
                double prev = 2.0;
                for (const auto &m : models)
                {
                    const double p = robust_cdf(m, db_to_linear(d)).value;
                    if (!(p < prev))
                        return d;
                    prev = p;
                }
            }
            return std::numeric_limits<double>::quiet_NaN();
        }

        CriterionResult figure_shapes(Context &)
        {
            std::size_t violations = 0, checks = 0, flagged = 0;
            std::string cross;
            for (const auto &f : kFamilies)
            {
                std::vector<ProductModel> models;
                for (double v : f.values)
                {
                    ShadowedParams a = f.a, b = f.b;
                    ShadowedParams &target = f.link == 0 ? a : b;
                    target.*f.field = v;
                    models.emplace_back(a, b);
                }
                for (int i = 0; i <= 20; ++i)
                {
                    const double t = db_to_linear(-20.0 + i);
                    double prev = 2.0;
                    for (const auto &m : models)
                    {
                        const auto v = op_cascade(m, t);
                        flagged += v.precision_loss;
                        violations += !(v.value < prev);
                        prev = v.value;
                    }
                    checks += models.size() - 1;
                }
                const double x = family_crossover(models);
                cross += fmt("%s%s %s", cross.empty() ? "" : ", ", f.name,
                             std::isnan(x) ? "none" : fmt("%.1f dB", x).c_str());
            }
            CriterionResult r{8, "figure shapes", violations == 0 && flagged == 0, ""};
            r.detail = fmt("outage strictly decreasing in m1, m2, mu1, mu2, kappa1, kappa2 on 21 thresholds in "
                           "[-20, 0] dB: %zu violations in %zu comparisons, %zu precision-loss flags; first "
                           "threshold where the ordering reverses (0 to 10 dB): %s",
                           violations, checks, flagged, cross.c_str());
            return r;
        }

        CriterionResult mgf(Context &ctx)
        {
            double worst = 0.0, worst_small = 0.0;
            std::string where;
            std::size_t asymptotic = 0;
            for (std::size_t k = 0; k < ctx.models.size(); ++k)
            {
                const auto &m = *ctx.models[k];
                std::map<double, double> memo;
                std::size_t fallback = 0;
                auto log_pdf = [&](double u) {
                    const auto it = memo.find(u);
                    if (it != memo.end())
                        return it->second;
                    const auto v = robust_pdf(m, std::exp(u));
                    fallback += v.method == SeriesMethod::quadrature;
                    const double l = v.value > 0.0 ? std::log(v.value) : -std::numeric_limits<double>::infinity();
                    memo.emplace(u, l);
                    return l;
                };
                for (double s : {-0.5, -1.0, -2.0})
                {
                    const auto v = mgf_product(m, s);
                    asymptotic += v.method == SeriesMethod::moment_asymptotic;
                    auto log_f = [&](double u) { return s * std::exp(u) + u + log_pdf(u); };
                    const double q = std::exp(integrate_log_peaked(log_f, 0.0, 1e-12).log_value);
                    const double d = std::abs(v.value - q);
                    if (d > worst)
                    {
                        worst = d;
                        where = fmt("%s s=%g", kSets[k].name, s);
                    }
                }
                worst_small = std::max(worst_small, std::abs(mgf_product(m, -1e-4).value - 1.0));
            }
            CriterionResult r{9, "mgf", worst <= 1e-6 && worst_small <= 1e-3, ""};
            r.detail = fmt("max abs diff closed form vs quadrature %.2e (limit 1e-6) at %s, %zu of 12 via the moment "
                           "expansion; |M(-1e-4) - 1| max %.2e (limit 1e-3)",
                           worst, where.c_str(), asymptotic, worst_small);
            return r;
        }
    }

    bool ValidationReport::passed() const
    {
        return std::all_of(criteria.begin(), criteria.end(), [](const auto &c) { return c.passed; });
    }

    std::string format_line(const CriterionResult &r)
    {
        return fmt("%s %d %s: ", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str()) + r.detail;
    }

    std::string ValidationReport::to_text() const
    {
        std::string out;
        for (const auto &c : criteria)
            out += format_line(c) + "\n";
        return out;
    }

    ValidationReport run_validation(const ValidationOptions &options,
                                    const std::function<void(const CriterionResult &)> &on_result)
    {
        if (options.mc_samples < 1000)
            throw DomainError("run_validation: mc_samples must be at least 1000");
        Context ctx{options, {}};
        for (const auto &s : kSets)
            ctx.models.push_back(std::make_unique<ProductModel>(s.a, s.b));

        using Check = CriterionResult (*)(Context &);
        const Check checks[] = {oracle_equivalence, monte_carlo, moments, fading_metrics, case_continuity,
                                derivative, relay, figure_shapes, mgf};
        ValidationReport report{options.seed, {}};
        for (Check c : checks)
        {
            CriterionResult r;
            try
            {
                r = c(ctx);
            }
            catch (const std::exception &e)
            {
                static const char *names[] = {"oracle equivalence", "monte carlo agreement", "moment identities",
                                              "fading metrics", "case continuity", "derivative identity",
                                              "relay outage", "figure shapes", "mgf"};
                const int id = static_cast<int>(report.criteria.size()) + 1;
                r = {id, names[id - 1], false, std::string("exception: ") + e.what()};
            }
            if (on_result)
                on_result(r);
            report.criteria.push_back(std::move(r));
        }
        return report;
    }
}
