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

#ifndef KMS_METRICS_HPP
#define KMS_METRICS_HPP

#include "kms/product.hpp"

#include <utility>
#include <vector>

namespace kms
{
    // Var[Y] / E[Y]^2 in closed form.
    double amount_of_fading(const ProductModel &model);

    // Var[Y] / E[Y]^3.
    double cqei(const ProductModel &model);

    // P(Y <= gamma_th) for the cascaded channel.
    SeriesValue op_cascade(const ProductModel &model, double gamma_th, const TruncationPolicy &policy = {});

    // Variable-gain relay, direct link absent: source-relay hop `sr_link`,
    // relay-destination hop the cascade `rd_cascade`.
    struct RelayModel
    {
        ShadowedParams sr_link;
        ProductModel rd_cascade;

        void validate() const;
    };

    // Outage of min(g_sr, g_rd) from the two marginal CDFs.
    double combine_relay_outage(double f_sr, double f_rd);

    SeriesValue op_relay_variable_gain(const RelayModel &relay, double gamma_th, const TruncationPolicy &policy = {});

    struct MetricReport
    {
        double af = 0.0;
        double cqei = 0.0;
        std::vector<std::pair<double, double>> op_curve; // (gamma_th, probability)
    };

    MetricReport cascade_report(const ProductModel &model, const std::vector<double> &thresholds,
                                const TruncationPolicy &policy = {});
}

#endif
