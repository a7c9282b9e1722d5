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

#include "kms/oracle.hpp"

#include "kms/quadrature.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

namespace kms
{
    namespace
    {
        double anchor(const ProductModel &model, double y)
        {
            return 0.5 * (std::log(y) + std::log(model.link1().gamma_bar) - std::log(model.link2().gamma_bar));
        }

        double log_pdf_by_convolution(const ProductModel &model, double y)
        {
            const auto &p1 = model.link1();
            const auto &p2 = model.link2();
            auto log_f = [&](double t) { return log_pdf_single(p1, std::exp(t)) + log_pdf_single(p2, y * std::exp(-t)); };
            return integrate_log_peaked(log_f, anchor(model, y), 1e-12).log_value;
        }
    }

    double pdf_by_convolution(const ProductModel &model, double y)
    {
        if (!(y > 0.0) || !std::isfinite(y))
            throw DomainError("pdf_by_convolution: y must be positive and finite");
        return std::exp(log_pdf_by_convolution(model, y));
    }

    double cdf_by_quadrature(const ProductModel &model, double y)
    {
        if (!(y >= 0.0) || !std::isfinite(y))
            throw DomainError("cdf_by_quadrature: y must be nonnegative and finite");
        if (y == 0.0)
            return 0.0;
        // Mass of f_Y on the smaller side of y, in u = ln y.
        auto log_f = [&](double u) { return u + log_pdf_by_convolution(model, std::exp(u)); };
        const double ly = std::log(y);
        const double lmean = std::log(model.link1().gamma_bar * model.link2().gamma_bar);
        if (ly <= lmean)
            return std::clamp(std::exp(integrate_log_peaked(log_f, ly - 0.5, 1e-11, -std::numeric_limits<double>::infinity(), ly).log_value), 0.0, 1.0);
        const double upper = std::exp(integrate_log_peaked(log_f, ly + 0.5, 1e-11, ly).log_value);
        return std::clamp(1.0 - upper, 0.0, 1.0);
    }

    double mgf_by_quadrature(const ProductModel &model, double s)
    {
        if (!(s < 0.0))
            throw DomainError("mgf_by_quadrature: s < 0 required");
        auto log_f = [&](double u) {
            const double y = std::exp(u);
            return s * y + u + log_pdf_by_convolution(model, y);
        };
        const double u0 = std::log(std::min(1.0 / -s, model.link1().gamma_bar * model.link2().gamma_bar));
        return std::exp(integrate_log_peaked(log_f, u0, 1e-10).log_value);
    }

    namespace
    {
        SeriesValue from_quadrature(double value)
        {
            SeriesValue v;
            v.value = value;
            v.converged = true;
            v.method = SeriesMethod::quadrature;
            v.tail_estimate = 1e-10 * std::max(1.0, std::abs(value));
            v.digits = std::numeric_limits<double>::digits10;
            return v;
        }

        bool usable(const SeriesValue &v)
        {
            return std::isfinite(v.value) && !v.precision_loss && v.converged;
        }
    }

    SeriesValue robust_pdf(const ProductModel &model, double y, const TruncationPolicy &policy)
    {
        auto v = pdf_product(model, y, policy);
        return usable(v) ? v : from_quadrature(pdf_by_convolution(model, y));
    }

    SeriesValue robust_cdf(const ProductModel &model, double y, const TruncationPolicy &policy)
    {
        auto v = cdf_product(model, y, policy);
        return usable(v) && !v.clamped ? v : from_quadrature(cdf_by_quadrature(model, y));
    }

    SeriesValue robust_mgf(const ProductModel &model, double s, const TruncationPolicy &policy)
    {
        auto v = mgf_product(model, s, policy);
        return usable(v) ? v : from_quadrature(mgf_by_quadrature(model, s));
    }

    namespace
    {
        // Runs body(block) for every block index on up to `threads` workers.
        template <class Body>
        void for_blocks(std::size_t blocks, unsigned threads, Body &&body)
        {
            threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(blocks, 1))));
            std::atomic<std::size_t> next{0};
            auto worker = [&] {
                for (std::size_t b = next++; b < blocks; b = next++)
                    body(b);
            };
            if (threads == 1)
            {
                worker();
                return;
            }
            std::vector<std::thread> pool;
            for (unsigned i = 0; i < threads; ++i)
                pool.emplace_back(worker);
            for (auto &t : pool)
                t.join();
        }
    }

    std::vector<double> sample_product(const ProductModel &model, const RandomStream &master, std::size_t count,
                                       unsigned threads)
    {
        if (count == 0)
            throw DomainError("sample_product: count must be at least 1");
        std::vector<double> out(count);
        const std::size_t blocks = (count + sample_block_size - 1) / sample_block_size;
        for_blocks(blocks, threads, [&](std::size_t b) {
            RandomStream s = master.substream(b);
            const std::size_t lo = b * sample_block_size, hi = std::min(count, lo + sample_block_size);
            for (std::size_t i = lo; i < hi; ++i)
            {
                const double x1 = draw_single(model.link1(), s.engine());
                out[i] = x1 * draw_single(model.link2(), s.engine());
            }
        });
        return out;
    }

    namespace
    {
        void moments_of(const std::vector<double> &x, EcdfSummary &s)
        {
            double m1 = 0.0, m2 = 0.0, c1 = 0.0, c2 = 0.0;
            for (double v : x)
            {
                // Kahan sums keep the moments independent of magnitude order.
                double y = v - c1, t = m1 + y;
                c1 = (t - m1) - y;
                m1 = t;
                y = v * v - c2;
                t = m2 + y;
                c2 = (t - m2) - y;
                m2 = t;
            }
            s.sample_count = x.size();
            s.mean = m1 / x.size();
            s.second_moment = m2 / x.size();
        }
    }

    EcdfSummary compare_ecdf(std::vector<double> samples, const std::function<double(double)> &cdf)
    {
        if (samples.empty())
            throw DomainError("compare_ecdf: no samples");
        EcdfSummary s;
        moments_of(samples, s);
        std::sort(samples.begin(), samples.end());
        const double n = static_cast<double>(samples.size());
        double d = 0.0;
        for (std::size_t i = 0; i < samples.size();)
        {
            std::size_t j = i;
            while (j < samples.size() && samples[j] == samples[i])
                ++j;
            const double f = cdf(samples[i]);
            d = std::max({d, std::abs(static_cast<double>(j) / n - f), std::abs(f - static_cast<double>(i) / n)});
            i = j;
        }
        s.ks_distance = std::min(1.0, d);
        s.ks_bound = s.ks_distance;
        return s;
    }

    EcdfSummary compare_ecdf_grid(std::vector<double> samples, const std::function<double(double)> &cdf,
                                  std::size_t points)
    {
        if (samples.empty())
            throw DomainError("compare_ecdf_grid: no samples");
        if (points < 2)
            throw DomainError("compare_ecdf_grid: at least two grid points required");
        EcdfSummary s;
        moments_of(samples, s);
        std::sort(samples.begin(), samples.end());
        const std::size_t count = samples.size();
        const double n = static_cast<double>(count);

        // Grid on sample order statistics, first and last included.
        std::vector<std::size_t> idx;
        for (std::size_t k = 0; k < points; ++k)
            idx.push_back(static_cast<std::size_t>(std::llround(static_cast<double>(k) * (count - 1) / (points - 1))));
        idx.erase(std::unique(idx.begin(), idx.end()), idx.end());

        // ECDF just below and at each grid value.
        auto below = [&](double x) { return static_cast<double>(std::lower_bound(samples.begin(), samples.end(), x) - samples.begin()) / n; };
        auto at = [&](double x) { return static_cast<double>(std::upper_bound(samples.begin(), samples.end(), x) - samples.begin()) / n; };

        double d = 0.0, bound = 0.0, f_prev = 0.0, g_prev = 0.0;
        for (std::size_t k = 0; k < idx.size(); ++k)
        {
            const double x = samples[idx[k]];
            const double f = cdf(x);
            const double g_lo = below(x), g_hi = at(x);
            d = std::max({d, std::abs(g_hi - f), std::abs(f - g_lo)});
            // On (x_prev, x): ECDF in [g_prev, g_lo], F in [f_prev, f].
            bound = std::max({bound, std::abs(g_hi - f), std::abs(f - g_lo), g_lo - f_prev, f - g_prev});
            f_prev = f;
            g_prev = g_hi;
        }
        // Beyond the largest sample the ECDF is 1 and F <= 1.
        bound = std::max(bound, 1.0 - f_prev);
        s.ks_distance = std::min(1.0, d);
        s.ks_bound = std::min(1.0, bound);
        return s;
    }

    double RelayMonteCarlo::stderr_min(std::size_t i) const
    {
        const double p = op_min.at(i);
        return std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(trials));
    }

    RelayMonteCarlo relay_monte_carlo(const RelayModel &relay, const std::vector<double> &thresholds,
                                      const RandomStream &master, std::size_t trials, unsigned threads)
    {
        relay.validate();
        if (trials == 0)
            throw DomainError("relay_monte_carlo: trials must be at least 1");
        const std::size_t blocks = (trials + sample_block_size - 1) / sample_block_size;
        const std::size_t nt = thresholds.size();
        std::vector<std::size_t> hits_min(blocks * nt, 0), hits_exact(blocks * nt, 0);
        for_blocks(blocks, threads, [&](std::size_t b) {
            RandomStream s = master.substream(b);
            const std::size_t lo = b * sample_block_size, hi = std::min(trials, lo + sample_block_size);
            for (std::size_t i = lo; i < hi; ++i)
            {
                const double g_sr = draw_single(relay.sr_link, s.engine());
                const double x1 = draw_single(relay.rd_cascade.link1(), s.engine());
                const double g_rd = x1 * draw_single(relay.rd_cascade.link2(), s.engine());
                const double g_min = std::min(g_sr, g_rd);
                const double g_exact = g_sr * g_rd / (g_sr + g_rd + 1.0);
                for (std::size_t k = 0; k < nt; ++k)
                {
                    hits_min[b * nt + k] += g_min <= thresholds[k];
                    hits_exact[b * nt + k] += g_exact <= thresholds[k];
                }
            }
        });
        RelayMonteCarlo r;
        r.thresholds = thresholds;
        r.trials = trials;
        for (std::size_t k = 0; k < nt; ++k)
        {
            std::size_t a = 0, e = 0;
            for (std::size_t b = 0; b < blocks; ++b)
            {
                a += hits_min[b * nt + k];
                e += hits_exact[b * nt + k];
            }
            r.op_min.push_back(static_cast<double>(a) / trials);
            r.op_exact.push_back(static_cast<double>(e) / trials);
        }
        return r;
    }
}
