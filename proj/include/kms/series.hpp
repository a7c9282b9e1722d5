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

#ifndef KMS_SERIES_HPP
#define KMS_SERIES_HPP

#include "kms/error.hpp"
#include "kms/scalar.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

namespace kms
{
    // Tolerances and term limits for every infinite series in the library.
    struct TruncationPolicy
    {
        double rel_tol = 1e-12;
        double abs_tol = 1e-300;
        std::size_t max_terms = 1000;
        std::size_t consecutive_small = 3;

        // Throws DomainError when a field violates its range.
        void validate() const
        {
            if (!(rel_tol > 0.0 && rel_tol < 1.0))
                throw DomainError("TruncationPolicy: rel_tol must lie in (0, 1)");
            if (!(abs_tol > 0.0 && abs_tol < 1.0))
                throw DomainError("TruncationPolicy: abs_tol must lie in (0, 1)");
            if (max_terms < 10)
                throw DomainError("TruncationPolicy: max_terms must be at least 10");
            if (consecutive_small < 1)
                throw DomainError("TruncationPolicy: consecutive_small must be at least 1");
        }
    };

    enum class SeriesMethod
    {
        residue,           // the plain power series
        moment_asymptotic, // optimally truncated moment expansion
        quadrature         // numerical integration fallback
    };

    // A series result reduced to double, with its diagnostics.
    struct SeriesValue
    {
        double value = 0.0;
        std::size_t terms_used = 0;
        double tail_estimate = 0.0;  // bound on the neglected tail, absolute
        double max_term_ratio = 0.0; // largest |term| / |value|
        bool converged = false;

        double rounding_estimate = 0.0; // propagated rounding error, absolute
        int digits = std::numeric_limits<double>::digits10;
        bool exact = false;          // terminating series summed in full
        bool precision_loss = false; // fewer than half the requested digits survive cancellation
        bool clamped = false;        // a probability left [0, 1] by more than its error bounds
        SeriesMethod method = SeriesMethod::residue;
    };

    // Compensated (Neumaier) accumulator implementing the stopping rule:
    // stop after `consecutive_small` successive terms with
    // |term| <= rel_tol * |partial| + abs_tol, provided the geometric tail
    // estimate also lies below that bound.
    template <class T>
    class SeriesAccumulator
    {
    public:
        SeriesAccumulator(const T &rel_tol, const T &abs_tol, std::size_t consecutive_small)
            : rel_tol_(rel_tol), abs_tol_(abs_tol), need_small_(consecutive_small) {}

        // Returns true once the stopping rule has fired.
        bool add(const T &term)
        {
            using std::abs;
            const T t = sum_ + term;
            if (abs(sum_) >= abs(term))
                comp_ += (sum_ - t) + term;
            else
                comp_ += (term - t) + sum_;
            sum_ = t;
            ++terms_;

            const T mag = abs(term);
            if (mag > max_abs_)
                max_abs_ = mag;

            if (terms_ > 1 && last_abs_ != 0)
                ratio_ = mag / last_abs_;
            else
                ratio_ = mag == 0 ? T(0) : T(1);
            last_abs_ = mag;

            const T bound = rel_tol_ * abs(value()) + abs_tol_;
            if (mag <= bound)
                ++small_run_;
            else
                small_run_ = 0;
            return small_run_ >= need_small_ && tail() <= bound;
        }

        T value() const { return sum_ + comp_; }
        std::size_t terms() const { return terms_; }
        const T &max_abs_term() const { return max_abs_; }

        // Geometric extrapolation from the last two terms.
        T tail() const
        {
            if (last_abs_ == 0)
                return T(0);
            if (ratio_ < 1)
                return last_abs_ * ratio_ / (1 - ratio_);
            return last_abs_ * T(1e6);
        }

    private:
        T rel_tol_, abs_tol_;
        std::size_t need_small_;
        T sum_ = 0, comp_ = 0, max_abs_ = 0, last_abs_ = 0, ratio_ = 1;
        std::size_t terms_ = 0, small_run_ = 0;
    };

    // Result of a series evaluated in working type T.
    template <class T>
    struct SeriesResult
    {
        T value = 0;
        std::size_t terms = 0;
        T tail = 0;
        T max_abs_term = 0;
        bool converged = false;
        bool exact = false;

        // Relative rounding error implied by cancellation, in units of |value|.
        T cancellation() const
        {
            using std::abs;
            if (value == 0)
                return max_abs_term == 0 ? T(0) : T(std::numeric_limits<double>::infinity());
            return max_abs_term / abs(value);
        }
    };

    template <class T>
    SeriesValue to_series_value(const SeriesResult<T> &r)
    {
        SeriesValue out;
        out.value = to_double(r.value);
        out.terms_used = r.terms;
        out.tail_estimate = to_double(r.tail);
        out.max_term_ratio = to_double(r.cancellation());
        out.converged = r.converged;
        out.exact = r.exact;
        out.digits = digits10_of<T>();
        const double eps = to_double(epsilon_of<T>());
        out.rounding_estimate = eps * (1.0 + out.max_term_ratio) * std::abs(out.value);
        // 1e12 in double; scaled by the working epsilon for wider types
        out.precision_loss = out.max_term_ratio * eps > 1e12 * std::numeric_limits<double>::epsilon();
        return out;
    }
}

#endif
