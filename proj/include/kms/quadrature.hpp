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

#ifndef KMS_QUADRATURE_HPP
#define KMS_QUADRATURE_HPP

#include <functional>
#include <limits>

namespace kms
{
    struct QuadratureResult
    {
        double value = 0.0;
        double error = 0.0; // estimated absolute error
    };

    // Adaptive Gauss-Kronrod (15/31) on [a, b]. Throws QuadratureError when the
    // error estimate exceeds max(rel_tol * L1, abs_tol) at the depth limit.
    QuadratureResult integrate(const std::function<double(double)> &f, double a, double b,
                               double rel_tol = 1e-12, double abs_tol = 0.0, unsigned max_depth = 18);

    // Integral over (lower, upper) of exp(log_f(t)) for a unimodal-ish log_f
    // whose bulk sits near t0 (clamped into the range). The support is
    // bracketed by walking out from t0 until log_f falls 60 below the largest
    // value seen, then split into panels. Returns the value in log form to
    // survive underflow.
    struct LogQuadratureResult
    {
        double log_value = 0.0;
        double rel_error = 0.0;
    };

    LogQuadratureResult integrate_log_peaked(const std::function<double(double)> &log_f, double t0,
                                             double rel_tol = 1e-12,
                                             double lower = -std::numeric_limits<double>::infinity(),
                                             double upper = std::numeric_limits<double>::infinity());
}

#endif
