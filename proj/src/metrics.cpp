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

#include "kms/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace kms
{
    double amount_of_fading(const ProductModel &model)
    {
        double prod = 1.0;
        for (const auto *p : {&model.link1(), &model.link2()})
        {
            const double k = p->kappa, mu = p->mu, m = p->m;
            const double k1 = (1.0 + k) * (1.0 + k);
            prod *= 1.0 + (2.0 * k + 1.0) / (mu * k1) + k * k / (m * k1);
        }
        return prod - 1.0;
    }

    double cqei(const ProductModel &model)
    {
        return amount_of_fading(model) / (model.link1().gamma_bar * model.link2().gamma_bar);
    }

    SeriesValue op_cascade(const ProductModel &model, double gamma_th, const TruncationPolicy &policy)
    {
        if (!(gamma_th > 0.0))
            throw DomainError("op_cascade: gamma_th must be positive");
        return cdf_product(model, gamma_th, policy);
    }

    void RelayModel::validate() const
    {
        sr_link.validate();
        rd_cascade.link1().validate();
        rd_cascade.link2().validate();
    }

    double combine_relay_outage(double f_sr, double f_rd)
    {
        if (!(f_sr >= 0.0 && f_sr <= 1.0 && f_rd >= 0.0 && f_rd <= 1.0))
            throw DomainError("combine_relay_outage: probabilities must lie in [0, 1]");
        return f_sr + f_rd - f_sr * f_rd;
    }

    SeriesValue op_relay_variable_gain(const RelayModel &relay, double gamma_th, const TruncationPolicy &policy)
    {
        relay.validate();
        if (!(gamma_th > 0.0))
            throw DomainError("op_relay_variable_gain: gamma_th must be positive");
        const double f_sr = cdf_single(relay.sr_link, gamma_th);
        SeriesValue rd = cdf_product(relay.rd_cascade, gamma_th, policy);
        if (!std::isfinite(rd.value))
            return rd;
        SeriesValue out = rd;
        const double f_rd = std::clamp(rd.value, 0.0, 1.0);
        out.value = combine_relay_outage(f_sr, f_rd);
        out.tail_estimate = (1.0 - f_sr) * rd.tail_estimate + 1e-10;
        out.rounding_estimate = (1.0 - f_sr) * rd.rounding_estimate;
        return out;
    }

    MetricReport cascade_report(const ProductModel &model, const std::vector<double> &thresholds,
                                const TruncationPolicy &policy)
    {
        MetricReport r;
        r.af = amount_of_fading(model);
        r.cqei = cqei(model);
        for (double g : thresholds)
            r.op_curve.emplace_back(g, op_cascade(model, g, policy).value);
        return r;
    }
}
