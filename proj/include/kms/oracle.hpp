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

#ifndef KMS_ORACLE_HPP
#define KMS_ORACLE_HPP

// Independent numerical ground truth. Nothing here calls the residue series
// except the robust_* helpers, which use it first and fall back to quadrature.

#include "kms/metrics.hpp"
#include "kms/product.hpp"
#include "kms/random.hpp"

#include <cstddef>
#include <functional>
#include <vector>

namespace kms
{
    // Integral of f1(x) f2(y/x) / x over x > 0, in t = ln x.
    double pdf_by_convolution(const ProductModel &model, double y);

    // E[F2(y / X1)] with the single-link CDF by quadrature.
    double cdf_by_quadrature(const ProductModel &model, double y);

    // Integral of exp(s y) times the convolution density; s < 0.
    double mgf_by_quadrature(const ProductModel &model, double s);

    // Series value unless it reports precision loss, else the quadrature value
    // (method = SeriesMethod::quadrature).
    SeriesValue robust_pdf(const ProductModel &model, double y, const TruncationPolicy &policy = {});
    SeriesValue robust_cdf(const ProductModel &model, double y, const TruncationPolicy &policy = {});
    SeriesValue robust_mgf(const ProductModel &model, double s, const TruncationPolicy &policy = {});

    // count draws of X1 X2. Blocks of block_size draws use master.substream(k)
    // for block k, so the output does not depend on `threads`.
    inline constexpr std::size_t sample_block_size = 1u << 16;
    std::vector<double> sample_product(const ProductModel &model, const RandomStream &master, std::size_t count,
                                       unsigned threads = 1);

    struct EcdfSummary
    {
        std::size_t sample_count = 0;
        double ks_distance = 0.0; // sup |ECDF - F| over the points where F was evaluated
        double ks_bound = 0.0;    // certified upper bound on the full sup distance
        double mean = 0.0;
        double second_moment = 0.0;
    };

    // Exact two-sided KS distance; F evaluated at every distinct sample.
    EcdfSummary compare_ecdf(std::vector<double> samples, const std::function<double(double)> &cdf);

    // KS distance with F evaluated only at `points` sample quantiles. For
    // nondecreasing F, ks_bound bounds the exact distance from above.
    EcdfSummary compare_ecdf_grid(std::vector<double> samples, const std::function<double(double)> &cdf,
                                  std::size_t points);

    struct RelayMonteCarlo
    {
        std::vector<double> thresholds;
        std::vector<double> op_min;   // P(min(g_sr, g_rd) <= t)
        std::vector<double> op_exact; // P(g_sr g_rd / (g_sr + g_rd + 1) <= t)
        std::size_t trials = 0;

        double stderr_min(std::size_t i) const;
    };

    RelayMonteCarlo relay_monte_carlo(const RelayModel &relay, const std::vector<double> &thresholds,
                                      const RandomStream &master, std::size_t trials, unsigned threads = 1);
}

#endif
