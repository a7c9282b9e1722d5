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

#include "kms/quadrature.hpp"

#include "kms/error.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace kms
{
    QuadratureResult integrate(const std::function<double(double)> &f, double a, double b,
                               double rel_tol, double abs_tol, unsigned max_depth)
    {
        if (!(std::isfinite(a) && std::isfinite(b)))
            throw QuadratureError("integrate: finite limits required");
        QuadratureResult r;
        if (a == b)
            return r;
        // Mapped onto [-1, 1]: Boost's error estimate degrades on very short
        // intervals.
        const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        auto g = [&](double u) { return half * f(mid + half * u); };
        double l1 = 0.0;
        r.value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, -1.0, 1.0, max_depth, rel_tol, &r.error, &l1);
        if (!std::isfinite(r.value))
            throw QuadratureError("integrate: non-finite integrand on [" + std::to_string(a) + ", " + std::to_string(b) + "]");
        // Boost stops at the depth limit without complaint; allow slack of 10x on
        // its (conservative) Kronrod estimate before giving up.
        if (r.error > std::max(10.0 * rel_tol * l1, abs_tol))
            throw QuadratureError("integrate: error estimate " + std::to_string(r.error) + " above tolerance on [" +
                                  std::to_string(a) + ", " + std::to_string(b) + "]");
        return r;
    }

    namespace
    {
        constexpr double kDrop = 60.0;
        constexpr int kMaxSteps = 4000;

        // Walk from t0 in direction dir until log_f has dropped kDrop below the
        // running maximum or the limit is reached; the step grows geometrically
        // so that slowly decaying power-law tails (exponential in t) are still
        // bracketed.
        double bracket(const std::function<double(double)> &log_f, double t0, double dir, double limit, double &peak)
        {
            double t = t0, h = 0.25;
            for (int i = 0; i < kMaxSteps; ++i)
            {
                t += dir * h;
                if (dir * (t - limit) >= 0.0)
                    return limit;
                const double v = log_f(t);
                if (v > peak)
                    peak = v;
                if (v < peak - kDrop || v == -std::numeric_limits<double>::infinity())
                    return t;
                if (i % 8 == 7)
                    h *= 2.0;
            }
            throw QuadratureError("integrate_log_peaked: integrand does not decay");
        }
    }

    LogQuadratureResult integrate_log_peaked(const std::function<double(double)> &log_f, double t0, double rel_tol,
                                             double lower, double upper)
    {
        if (!(lower < upper))
            throw QuadratureError("integrate_log_peaked: empty range");
        t0 = std::min(std::max(t0, lower), upper);
        if (t0 == lower && std::isfinite(lower))
            t0 = std::isfinite(upper) ? 0.5 * (lower + upper) : lower + 0.5;
        if (t0 == upper && std::isfinite(upper))
            t0 = std::isfinite(lower) ? 0.5 * (lower + upper) : upper - 0.5;
        double peak = log_f(t0);
        if (!std::isfinite(peak))
            throw QuadratureError("integrate_log_peaked: integrand not finite at the anchor");
        const double lo = bracket(log_f, t0, -1.0, lower, peak);
        const double hi = bracket(log_f, t0, 1.0, upper, peak);

        const double ref = peak;
        auto f = [&](double t) {
            const double v = log_f(t);
            return v == -std::numeric_limits<double>::infinity() ? 0.0 : std::exp(v - ref);
        };

        // Panels of width <= 1 around t0, growing outward.
        std::vector<double> cuts{t0};
        for (double w = 1.0, t = t0 - w; ; w *= 1.25, t -= w)
        {
            if (t <= lo)
            {
                cuts.insert(cuts.begin(), lo);
                break;
            }
            cuts.insert(cuts.begin(), t);
        }
        for (double w = 1.0, t = t0 + w; ; w *= 1.25, t += w)
        {
            if (t >= hi)
            {
                cuts.push_back(hi);
                break;
            }
            cuts.push_back(t);
        }

        double sum = 0.0, err = 0.0;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        {
            // The integrand is scaled to peak at 1, so the total is not small
            // and panels far out only need an absolute bound.
            const auto r = integrate(f, cuts[i], cuts[i + 1], rel_tol, 1e-3 * rel_tol, 18);
            sum += r.value;
            err += r.error;
        }
        if (!(sum > 0.0))
            throw QuadratureError("integrate_log_peaked: nonpositive integral");
        return {ref + std::log(sum), err / sum};
    }
}
