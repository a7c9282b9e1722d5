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

#include "kms/specfun.hpp"

#include <cmath>

namespace kms
{
    double digamma(double x) { return digamma<double>(x); }

    SignedLog<double> ln_gamma_signed(double x) { return ln_gamma_signed<double>(x); }

    double pochhammer(double a, unsigned k) { return pochhammer<double>(a, k); }

    SeriesValue gauss_2f1(double a, double b, double c, double z, const TruncationPolicy &policy)
    {
        return to_series_value(gauss_2f1<double>(a, b, c, z, SeriesControl<double>::from(policy)));
    }

    SeriesValue gauss_2f1_db_at_neg_int(double a, unsigned n, double c, double z, const TruncationPolicy &policy)
    {
        return to_series_value(gauss_2f1_db_at_neg_int<double>(a, n, c, z, SeriesControl<double>::from(policy)));
    }

    SeriesValue kummer_1f1(double a, double b, double z, const TruncationPolicy &policy)
    {
        return to_series_value(kummer_1f1<double>(a, b, z, SeriesControl<double>::from(policy)));
    }

    namespace
    {
        constexpr double kTiny = 1e-17;

        // ln[Gamma(b)/Gamma(a) e^z z^(a-b) S(z)] with
        // S = sum_k (b-a)_k (1-a)_k / (k! z^k); false when S does not reach
        // double precision before its terms start to grow.
        bool log_kummer_asymptotic(double a, double b, double z, double &out)
        {
            // The recessive companion Gamma(b)/Gamma(b-a) (-z)^(-a) must be negligible.
            if (!detail::is_nonpositive_integer(b - a))
            {
                const double rel = std::lgamma(a) - ln_gamma_signed(b - a).log_abs - z + (b - 2.0 * a) * std::log(z);
                if (rel > std::log(kTiny))
                    return false;
            }

            double s = 1.0, t = 1.0;
            bool ok = false;
            for (int k = 0; k < 400; ++k)
            {
                const double next = t * (b - a + k) * (1.0 - a + k) / ((k + 1.0) * z);
                if (next == 0.0)
                {
                    ok = true;
                    break;
                }
                if (std::abs(next) > std::abs(t))
                    break;
                s += next;
                t = next;
                if (std::abs(t) < kTiny * std::abs(s))
                {
                    ok = true;
                    break;
                }
            }
            if (!ok || !(s > 0.0))
                return false;
            out = std::lgamma(b) - std::lgamma(a) + z + (a - b) * std::log(z) + std::log(s);
            return true;
        }
    }

    double log_scaled_kummer_1f1(double a, double b, double z, double w)
    {
        if (!(a > 0.0 && b > 0.0 && z >= 0.0))
            throw DomainError("log_scaled_kummer_1f1: requires a > 0, b > 0, z >= 0");
        if (z == 0.0)
            return -w;

        double asym = 0.0;
        if (z > 50.0 && log_kummer_asymptotic(a, b, z, asym))
            return asym - w;

        // Positive-term series with periodic rescaling.
        constexpr double kRescale = 1e250;
        const double log_rescale = std::log(kRescale);
        double s = 1.0, t = 1.0, log_scale = 0.0;
        for (long k = 0; k < 400000; ++k)
        {
            const double ratio = (a + k) * z / ((b + k) * (k + 1.0));
            t *= ratio;
            s += t;
            if (s > kRescale)
            {
                s /= kRescale;
                t /= kRescale;
                log_scale += log_rescale;
            }
            if (ratio < 1.0 && t < kTiny * s)
                return log_scale + std::log(s) - w;
        }
        throw ConvergenceError("log_scaled_kummer_1f1: series did not converge");
    }
}
