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

#ifndef KMS_PRODUCT_HPP
#define KMS_PRODUCT_HPP

#include "kms/fading.hpp"
#include "kms/series.hpp"

#include <memory>
#include <string>
#include <vector>

namespace kms
{
    enum class GapCase
    {
        non_integer, // simple poles only
        integer      // mu2 - mu1 = N: N simple poles, then double poles
    };

    namespace detail
    {
        struct CoefficientCache;
    }

    // Y = X1 X2 for independent links. The links are stored with
    // link1().mu <= link2().mu whatever the input order.
    class ProductModel
    {
    public:
        static constexpr double integer_tolerance = 1e-8;
        static constexpr double warning_tolerance = 1e-3;

        ProductModel(const ShadowedParams &first, const ShadowedParams &second);

        const ShadowedParams &link1() const { return link1_; }
        const ShadowedParams &link2() const { return link2_; }
        bool swapped() const { return swapped_; }

        double gap() const { return link2_.mu - link1_.mu; }
        GapCase gap_case() const { return case_; }
        unsigned integer_gap() const { return n_gap_; } // N; meaningful for GapCase::integer

        // Non-empty when the gap is within warning_tolerance of an integer but
        // still treated as non-integer.
        const std::vector<std::string> &warnings() const { return warnings_; }

        detail::CoefficientCache &cache() const { return *cache_; }

    private:
        ShadowedParams link1_, link2_;
        bool swapped_ = false;
        GapCase case_ = GapCase::non_integer;
        unsigned n_gap_ = 0;
        std::vector<std::string> warnings_;
        std::shared_ptr<detail::CoefficientCache> cache_;
    };

    // E[Y^(s-1)].
    double mellin_product(const ProductModel &model, double s);

    // (a1 a2)^(n + mu_lead) Gamma(mu_other - mu_lead - n) 2F1(m_lead, -n; mu_lead; c_lead)
    //   2F1(m_other, mu_other - mu_lead - n; mu_other; c_other) / ((-1)^n n!)
    // for an arbitrary (lead, other) pair with non-integer mu difference.
    double coeff_residue(const ShadowedParams &lead, const ShadowedParams &other, unsigned n);

    // Coefficients of the residue series; computed in extended precision where
    // needed and rounded to double. A/B require GapCase::non_integer except that
    // A is also defined for n < N in the integer case. C/D require
    // GapCase::integer and n >= N.
    double coeff_A(const ProductModel &model, unsigned n);
    double coeff_B(const ProductModel &model, unsigned n);
    double coeff_C(const ProductModel &model, unsigned n);
    double coeff_D(const ProductModel &model, unsigned n);

    // b1 b2 / (Gamma(mu1) Gamma(mu2)), the common prefactor of every series.
    double series_prefactor(const ProductModel &model);

    // Residue-series statistics. The sums run in the narrowest scalar type
    // whose precision survives the cancellation; `digits` reports the type
    // used. When even the widest type cannot deliver, precision_loss is set
    // (value NaN if evaluation was not attempted).
    SeriesValue pdf_product(const ProductModel &model, double y, const TruncationPolicy &policy = {});
    SeriesValue cdf_product(const ProductModel &model, double y, const TruncationPolicy &policy = {});

    // E[exp(s Y)] for s < 0. Far from the origin the residue series is used;
    // once a1 a2 / |s| exceeds mgf_asymptotic_ratio the optimally truncated
    // moment expansion is summed instead.
    constexpr double mgf_asymptotic_ratio = 150.0;
    SeriesValue mgf_product(const ProductModel &model, double s, const TruncationPolicy &policy = {});

    // E[Y^n] in closed form.
    double moment_product(const ProductModel &model, unsigned n);

    // E[(X1 X2)^n] where X2 is kappa-mu (the m of `km` is ignored).
    double moment_mixed(const ShadowedParams &shadowed, const ShadowedParams &km, unsigned n);
}

#endif
