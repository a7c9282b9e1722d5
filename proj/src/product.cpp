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

#include "kms/product.hpp"

#include "kms/product_series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <utility>

namespace kms
{
    ProductModel::ProductModel(const ShadowedParams &first, const ShadowedParams &second)
    {
        first.validate();
        second.validate();
        swapped_ = second.mu < first.mu;
        link1_ = swapped_ ? second : first;
        link2_ = swapped_ ? first : second;

        const double g = gap();
        const double n = std::round(g);
        if (std::abs(g - n) <= integer_tolerance)
        {
            case_ = GapCase::integer;
            n_gap_ = static_cast<unsigned>(n);
        }
        else if (std::abs(g - n) < warning_tolerance)
        {
            std::ostringstream os;
            os << "mu gap " << g << " lies within " << warning_tolerance << " of the integer " << n
               << "; the simple-pole coefficients are near-singular";
            warnings_.push_back(os.str());
        }

        cache_ = std::make_shared<detail::CoefficientCache>();
        cache_->l1 = link1_;
        cache_->l2 = link2_;
        cache_->integer = case_ == GapCase::integer;
        cache_->n_gap = n_gap_;
    }

    double mellin_product(const ProductModel &model, double s)
    {
        return mellin_single(model.link1(), s) * mellin_single(model.link2(), s);
    }

    double coeff_residue(const ShadowedParams &lead, const ShadowedParams &other, unsigned n)
    {
        lead.validate();
        other.validate();
        const double diff = other.mu - lead.mu;
        if (detail::is_nonpositive_integer(diff - n, ProductModel::integer_tolerance))
            throw DomainError("coeff_residue: mu difference hits a Gamma pole");
        const auto l = detail::make_link_data<real80>(lead);
        const auto o = detail::make_link_data<real80>(other);
        const real80 log_a12 = log(l.a) + log(o.a);
        return to_double(detail::residue_coefficient(l, o, log_a12, real80(o.mu - l.mu), n).value);
    }

    namespace
    {
        using detail::tier_count;
        using detail::Tiers;

        // Rounded coefficient from the first type whose error estimate is at
        // double level.
        template <std::size_t I = 0>
        double coefficient(const ProductModel &model, unsigned n, bool second)
        {
            using T = std::tuple_element_t<I, Tiers>;
            using std::abs;
            const auto snap = model.cache().ensure<T>(n + 1);
            const auto &row = (*snap.rows)[n];
            const T &v = second ? row.q : row.p;
            const T &e = second ? row.q_err : row.p_err;
            if constexpr (I + 1 < tier_count)
            {
                if (!(e <= T(1e-14) * abs(v)))
                    return coefficient<I + 1>(model, n, second);
            }
            return to_double(v);
        }
    }

    double coeff_A(const ProductModel &model, unsigned n)
    {
        if (model.gap_case() == GapCase::integer && n >= model.integer_gap())
            throw DomainError("coeff_A: integer gap requires n < N");
        return coefficient(model, n, false);
    }

    double coeff_B(const ProductModel &model, unsigned n)
    {
        if (model.gap_case() != GapCase::non_integer)
            throw DomainError("coeff_B: defined for a non-integer gap only");
        return coefficient(model, n, true);
    }

    double coeff_C(const ProductModel &model, unsigned n)
    {
        if (model.gap_case() != GapCase::integer)
            throw DomainError("coeff_C: defined for an integer gap only");
        if (n < model.integer_gap())
            throw DomainError("coeff_C: requires n >= N");
        return coefficient(model, n, false);
    }

    double coeff_D(const ProductModel &model, unsigned n)
    {
        if (model.gap_case() != GapCase::integer)
            throw DomainError("coeff_D: defined for an integer gap only");
        if (n < model.integer_gap())
            throw DomainError("coeff_D: requires n >= N");
        return coefficient(model, n, true);
    }

    double series_prefactor(const ProductModel &model)
    {
        const auto d1 = derive_coeffs(model.link1());
        const auto d2 = derive_coeffs(model.link2());
        return std::exp(std::log(d1.b) + std::log(d2.b) - std::lgamma(model.link1().mu) - std::lgamma(model.link2().mu));
    }

    namespace
    {
        constexpr std::size_t kChunk = 16;
        constexpr double kTopDigits = 300.0;
        constexpr int kTierDigits[tier_count] = {15, 40, 80, 160, 320};

        template <class T>
        struct TierEstimate
        {
            SeriesResult<T> sum;
            T rounding = 0;
            bool valid = true;
        };

        // Sums term(d, n, row, value, err) over n under the truncation policy.
        template <class T, class Term>
        TierEstimate<T> sum_series(const ProductModel &model, const TruncationPolicy &policy, Term &&term)
        {
            using std::abs;
            auto snap = model.cache().ensure<T>(kChunk);
            const auto &d = *snap.data;
            SeriesAccumulator<T> acc(T(policy.rel_tol), T(policy.abs_tol), policy.consecutive_small);
            TierEstimate<T> est;
            bool done = false;
            std::size_t n = 0;
            while (!done)
            {
                if (n >= policy.max_terms)
                    throw ConvergenceError("product series: no convergence within " + std::to_string(policy.max_terms) +
                                           " terms");
                if (n >= snap.rows->size())
                    snap = model.cache().ensure<T>(n + kChunk);
                T value = 0, err = 0;
                term(d, static_cast<unsigned>(n), (*snap.rows)[n], value, err);
                value *= d.prefactor;
                err *= d.prefactor;
                if (!is_finite(value) || !is_finite(err))
                {
                    est.valid = false;
                    return est;
                }
                est.rounding += err;
                done = acc.add(value);
                ++n;
            }
            est.sum.value = acc.value();
            est.sum.terms = acc.terms();
            est.sum.tail = acc.tail();
            est.sum.max_abs_term = acc.max_abs_term();
            est.sum.converged = true;
            est.rounding += epsilon_of<T>() * abs(est.sum.value);
            return est;
        }

        template <class T>
        SeriesValue finalize(const TierEstimate<T> &e, const TruncationPolicy &policy)
        {
            SeriesValue v = to_series_value(e.sum);
            // plus the final rounding to double
            v.rounding_estimate = to_double(e.rounding) + std::numeric_limits<double>::epsilon() * std::abs(v.value);
            v.precision_loss = v.precision_loss || !e.valid ||
                               !(v.rounding_estimate <= std::sqrt(policy.rel_tol) * std::abs(v.value) + policy.abs_tol);
            return v;
        }

        template <class T>
        bool accurate(const TierEstimate<T> &e, const TruncationPolicy &policy)
        {
            using std::abs;
            return e.valid && e.rounding <= T(policy.rel_tol) * abs(e.sum.value) + T(policy.abs_tol);
        }

        template <std::size_t I, class Eval>
        SeriesValue run_tiers(std::size_t start, const TruncationPolicy &policy, Eval &eval)
        {
            using T = std::tuple_element_t<I, Tiers>;
            if constexpr (I + 1 < tier_count)
            {
                if (I >= start)
                {
                    const auto e = eval(T{});
                    if (accurate(e, policy))
                        return finalize(e, policy);
                }
                return run_tiers<I + 1>(start, policy, eval);
            }
            else
            {
                const auto e = eval(T{});
                auto v = finalize(e, policy);
                if (!e.valid)
                    v.value = std::numeric_limits<double>::quiet_NaN();
                return v;
            }
        }

        SeriesValue not_attempted()
        {
            SeriesValue v;
            v.value = std::numeric_limits<double>::quiet_NaN();
            v.converged = false;
            v.precision_loss = true;
            v.digits = kTierDigits[tier_count - 1];
            return v;
        }

        // Digits lost to cancellation -> first adequate type.
        template <class Eval>
        SeriesValue evaluate(double lost_digits, const TruncationPolicy &policy, Eval &&eval)
        {
            policy.validate();
            if (lost_digits > kTopDigits)
                return not_attempted();
            const double need = lost_digits - std::log10(policy.rel_tol) + 3.0;
            std::size_t start = 0;
            while (start + 1 < tier_count && kTierDigits[start] < need)
                ++start;
            return run_tiers<0>(start, policy, eval);
        }

        double a12(const ProductModel &model)
        {
            return derive_coeffs(model.link1()).a * derive_coeffs(model.link2()).a;
        }

        // Largest term over value grows like exp(1.1 z), z = 2 sqrt(a1 a2 y)
        // (measured; escalation covers the misses).
        double lost_digits_y(const ProductModel &model, double y)
        {
            return 0.5 * 2.0 * std::sqrt(a12(model) * y);
        }
    }

    SeriesValue pdf_product(const ProductModel &model, double y, const TruncationPolicy &policy)
    {
        if (!(y > 0.0) || !std::isfinite(y))
            throw DomainError("pdf_product: y must be positive and finite");
        auto eval = [&](auto tag) {
            using T = decltype(tag);
            using std::abs;
            using std::exp;
            using std::log;
            const T ty(y), ly = log(ty), eps = epsilon_of<T>();
            T y1 = 0, y2 = 0;
            return sum_series<T>(model, policy, [&](const detail::PairData<T> &d, unsigned n, const detail::CoefficientRow<T> &row, T &value, T &err) {
                if (n == 0)
                {
                    y1 = exp((d.l1.mu - 1) * ly);
                    y2 = exp((d.l2.mu - 1) * ly);
                }
                const T grow = eps * T(n + 4) * (1 + abs(d.l2.mu * ly));
                if (!d.integer)
                {
                    value = row.p * y1 + row.q * y2;
                    err = row.p_err * y1 + row.q_err * y2 + grow * (abs(row.p * y1) + abs(row.q * y2));
                }
                else if (n < d.n_gap)
                {
                    value = row.p * y1;
                    err = row.p_err * y1 + grow * abs(value);
                }
                else
                {
                    value = (row.p - row.q * ly) * y1;
                    err = (row.p_err + row.q_err * abs(ly)) * y1 + grow * (abs(row.p) + abs(row.q * ly)) * y1;
                }
                y1 *= ty;
                y2 *= ty;
            });
        };
        return evaluate(lost_digits_y(model, y), policy, eval);
    }

    SeriesValue cdf_product(const ProductModel &model, double y, const TruncationPolicy &policy)
    {
        if (!(y >= 0.0) || !std::isfinite(y))
            throw DomainError("cdf_product: y must be nonnegative and finite");
        if (y == 0.0)
        {
            SeriesValue v;
            v.converged = true;
            v.exact = true;
            return v;
        }
        auto eval = [&](auto tag) {
            using T = decltype(tag);
            using std::abs;
            using std::exp;
            using std::log;
            const T ty(y), ly = log(ty), eps = epsilon_of<T>();
            T y1 = 0, y2 = 0;
            return sum_series<T>(model, policy, [&](const detail::PairData<T> &d, unsigned n, const detail::CoefficientRow<T> &row, T &value, T &err) {
                if (n == 0)
                {
                    y1 = exp(d.l1.mu * ly);
                    y2 = exp(d.l2.mu * ly);
                }
                const T k1 = T(n) + d.l1.mu, k2 = T(n) + d.l2.mu;
                const T grow = eps * T(n + 6) * (1 + abs(d.l2.mu * ly));
                if (!d.integer)
                {
                    const T u = row.p * y1 / k1, v = row.q * y2 / k2;
                    value = u + v;
                    err = row.p_err * y1 / k1 + row.q_err * y2 / k2 + grow * (abs(u) + abs(v));
                }
                else if (n < d.n_gap)
                {
                    value = row.p * y1 / k1;
                    err = row.p_err * y1 / k1 + grow * abs(value);
                }
                else
                {
                    const T u = (row.p - row.q * ly) * y1 / k1, v = row.q * y1 / (k1 * k1);
                    value = u + v;
                    err = (row.p_err + row.q_err * abs(ly)) * y1 / k1 + row.q_err * y1 / (k1 * k1) +
                          grow * ((abs(row.p) + abs(row.q * ly)) * y1 / k1 + abs(v));
                }
                y1 *= ty;
                y2 *= ty;
            });
        };
        SeriesValue v = evaluate(lost_digits_y(model, y), policy, eval);
        if (std::isfinite(v.value))
        {
            const double slack = v.tail_estimate + v.rounding_estimate;
            if (v.value < -slack || v.value > 1.0 + slack)
            {
                v.clamped = true;
                v.value = std::clamp(v.value, 0.0, 1.0);
            }
        }
        return v;
    }

    namespace
    {
        // Optimally truncated sum_k E[Y^k] s^k / k!; the remainder of this
        // alternating Stieltjes-type series is bounded by the first omitted term.
        SeriesValue mgf_by_moments(const ProductModel &model, double s, const TruncationPolicy &policy)
        {
            const double t = -s;
            SeriesValue out;
            out.method = SeriesMethod::moment_asymptotic;
            double sum = 0.0, comp = 0.0, prev = std::numeric_limits<double>::infinity(), max_abs = 0.0;
            for (unsigned k = 0; k < policy.max_terms; ++k)
            {
                const double mk = moment_product(model, k);
                const double mag = std::exp(std::log(mk) + k * std::log(t) - std::lgamma(k + 1.0));
                if (mag > prev)
                    break;
                const double term = (k % 2 == 0) ? mag : -mag;
                const double next = sum + term;
                comp += (std::abs(sum) >= mag) ? (sum - next) + term : (term - next) + sum;
                sum = next;
                max_abs = std::max(max_abs, mag);
                out.terms_used = k + 1;
                prev = mag;
                if (mag <= policy.rel_tol * std::abs(sum + comp) + policy.abs_tol && k > 0)
                    break;
            }
            out.value = sum + comp;
            out.tail_estimate = prev;
            out.max_term_ratio = max_abs / std::abs(out.value);
            out.converged = prev <= policy.rel_tol * std::abs(out.value) + policy.abs_tol;
            out.rounding_estimate = 4.0 * std::numeric_limits<double>::epsilon() * max_abs * out.terms_used;
            out.precision_loss = !(prev <= std::sqrt(policy.rel_tol) * std::abs(out.value));
            return out;
        }
    }

    SeriesValue mgf_product(const ProductModel &model, double s, const TruncationPolicy &policy)
    {
        if (!(s < 0.0) || !std::isfinite(s))
            throw DomainError("mgf_product: s < 0 required (the transform diverges for s >= 0)");
        policy.validate();
        const double t = -s;
        const double ratio = a12(model) / t;
        if (ratio > mgf_asymptotic_ratio)
            return mgf_by_moments(model, s, policy);

        auto eval = [&](auto tag) {
            using T = decltype(tag);
            using std::abs;
            using std::exp;
            using std::log;
            const T tt(t), lt = log(tt), eps = epsilon_of<T>();
            T w1 = 0, w2 = 0, psi = 0, base = 0;
            return sum_series<T>(model, policy, [&](const detail::PairData<T> &d, unsigned n, const detail::CoefficientRow<T> &row, T &value, T &err) {
                const T k1 = T(n) + d.l1.mu, k2 = T(n) + d.l2.mu;
                if (n == 0)
                {
                    w1 = exp(detail::lgamma_positive(d.l1.mu) - d.l1.mu * lt);
                    w2 = exp(detail::lgamma_positive(d.l2.mu) - d.l2.mu * lt);
                    psi = digamma(d.l1.mu);
                    base = 1 + abs(d.l2.mu * lt) + abs(detail::lgamma_positive(d.l1.mu)) + abs(detail::lgamma_positive(d.l2.mu));
                }
                const T grow = eps * T(n + 8) * base;
                if (!d.integer)
                {
                    value = row.p * w1 + row.q * w2;
                    err = row.p_err * w1 + row.q_err * w2 + grow * (abs(row.p * w1) + abs(row.q * w2));
                }
                else if (n < d.n_gap)
                {
                    value = row.p * w1;
                    err = row.p_err * w1 + grow * abs(value);
                }
                else
                {
                    const T h = lt - psi;
                    value = (row.p + row.q * h) * w1;
                    err = (row.p_err + row.q_err * abs(h)) * w1 + grow * (abs(row.p) + abs(row.q) * (abs(lt) + abs(psi))) * w1;
                }
                w1 *= k1 / tt;
                w2 *= k2 / tt;
                psi += 1 / k1;
            });
        };
        SeriesValue v = evaluate(std::log10(std::exp(1.0)) * ratio, policy, eval);
        v.method = SeriesMethod::residue;
        return v;
    }

    namespace
    {
        // (mu)_n / a^n 2F1(m, -n; mu; c / (c - 1)): E[X^n] with b (1 - c)^(-m) = 1
        // cancelled analytically; every term of the finite sum is positive.
        double single_moment(const ShadowedParams &p, unsigned n)
        {
            const auto d = derive_coeffs(p);
            const double z = d.c / (d.c - 1.0);
            const auto f = gauss_2f1<double>(p.m, -static_cast<double>(n), p.mu, z, SeriesControl<double>::working());
            return std::exp(std::lgamma(p.mu + n) - std::lgamma(p.mu) - n * std::log(d.a)) * f.value;
        }
    }

    double moment_product(const ProductModel &model, unsigned n)
    {
        return single_moment(model.link1(), n) * single_moment(model.link2(), n);
    }

    double moment_mixed(const ShadowedParams &shadowed, const ShadowedParams &km, unsigned n)
    {
        ShadowedParams k = km;
        k.m = 1.0;
        k.validate();
        const double a2 = k.mu * (1.0 + k.kappa) / k.gamma_bar;
        const auto f = kummer_1f1<double>(-static_cast<double>(n), k.mu, -k.kappa * k.mu, SeriesControl<double>::working());
        const double m2 = std::exp(std::lgamma(k.mu + n) - std::lgamma(k.mu) - n * std::log(a2)) * f.value;
        return single_moment(shadowed, n) * m2;
    }
}
