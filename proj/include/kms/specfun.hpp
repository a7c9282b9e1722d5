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

#ifndef KMS_SPECFUN_HPP
#define KMS_SPECFUN_HPP

// Real-argument special functions, templated on the scalar type.
//
// The double overloads (returning SeriesValue) follow a TruncationPolicy; the
// templated overloads take a SeriesControl<T> so that series can be driven to
// the working precision of T when they feed a larger cancelling sum.

#include "kms/error.hpp"
#include "kms/scalar.hpp"
#include "kms/series.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/bernoulli.hpp>

#include <cmath>
#include <cstddef>
#include <string>

namespace kms
{
    template <class T>
    struct SeriesControl
    {
        T rel_tol;
        T abs_tol;
        std::size_t max_terms;
        std::size_t consecutive_small;

        static SeriesControl from(const TruncationPolicy &p)
        {
            p.validate();
            return {T(p.rel_tol), T(p.abs_tol), p.max_terms, p.consecutive_small};
        }

        // Sum to the full precision of T.
        static SeriesControl working(std::size_t max_terms = 200000)
        {
            return {epsilon_of<T>() / 4, std::numeric_limits<T>::min(), max_terms, 3};
        }
    };

    namespace detail
    {
        template <class T>
        bool is_nonpositive_integer(const T &x, double tol = 0.0)
        {
            using std::abs;
            using std::round;
            if (x > T(tol))
                return false;
            return abs(x - round(x)) <= T(tol);
        }

        // Start of the asymptotic region for Stirling-type expansions: the
        // optimally truncated remainder behaves like exp(-2 pi x).
        template <class T>
        T asymptotic_threshold()
        {
            return T(0.4 * (digits10_of<T>() + 2) + 7);
        }

        // ln Gamma(x) for x > 0.
        template <class T>
        T lgamma_positive(T x)
        {
            using std::log;
            using std::abs;
            const T x0 = asymptotic_threshold<T>();
            T shift_log = 0;
            T prod = 1;
            while (x < x0)
            {
                prod *= x;
                if (prod > T(1e200))
                {
                    shift_log += log(prod);
                    prod = 1;
                }
                x += 1;
            }
            shift_log += log(prod);

            const T eps = epsilon_of<T>();
            const T half_log_two_pi = log(boost::math::constants::two_pi<T>()) / 2;
            T s = (x - T(0.5)) * log(x) - x + half_log_two_pi;
            const T inv_x2 = 1 / (x * x);
            T xpow = 1 / x;
            for (unsigned k = 1; k < 2000; ++k)
            {
                const T b2k = boost::math::bernoulli_b2n<T>(static_cast<int>(k));
                const T term = b2k / T(2 * k * (2 * k - 1)) * xpow;
                s += term;
                if (abs(term) <= eps * abs(s))
                    break;
                xpow *= inv_x2;
            }
            return s - shift_log;
        }

        // sin(pi x) reduced so that large arguments keep full relative accuracy.
        template <class T>
        T sin_pi(const T &x)
        {
            using std::round;
            using std::sin;
            const T n = round(x);
            const T r = x - n;
            T s = sin(boost::math::constants::pi<T>() * r);
            const long long ni = static_cast<long long>(to_double(n));
            return (ni % 2 == 0) ? s : T(-s);
        }

        template <class T>
        T cos_pi(const T &x)
        {
            using std::round;
            using std::cos;
            const T n = round(x);
            const T r = x - n;
            T c = cos(boost::math::constants::pi<T>() * r);
            const long long ni = static_cast<long long>(to_double(n));
            return (ni % 2 == 0) ? c : T(-c);
        }
    }

    // psi(x) = d/dx ln Gamma(x).
    template <class T>
    T digamma(T x)
    {
        using std::abs;
        using std::log;
        if (!is_finite(x))
            throw DomainError("digamma: non-finite argument");
        if (detail::is_nonpositive_integer(x, 1e-12))
            throw PoleError("digamma: pole at nonpositive integer " + std::to_string(to_double(x)));

        if (x < 0)
        {
            // psi(x) = psi(1 - x) - pi cot(pi x)
            const T pi = boost::math::constants::pi<T>();
            return digamma(T(1 - x)) - pi * detail::cos_pi(x) / detail::sin_pi(x);
        }

        const T x0 = detail::asymptotic_threshold<T>();
        T shift = 0;
        while (x < x0)
        {
            shift += 1 / x;
            x += 1;
        }

        const T eps = epsilon_of<T>();
        T s = log(x) - 1 / (2 * x);
        const T inv_x2 = 1 / (x * x);
        T xpow = inv_x2;
        for (unsigned k = 1; k < 2000; ++k)
        {
            const T term = boost::math::bernoulli_b2n<T>(static_cast<int>(k)) / T(2 * k) * xpow;
            s -= term;
            if (abs(term) <= eps * abs(s))
                break;
            xpow *= inv_x2;
        }
        return s - shift;
    }

    template <class T>
    struct SignedLog
    {
        T log_abs;
        int sign;
    };

    // Gamma(x) as sign * exp(log_abs). Negative arguments go through the
    // reflection formula on ln Gamma of a positive argument.
    template <class T>
    SignedLog<T> ln_gamma_signed(const T &x)
    {
        using std::abs;
        using std::floor;
        using std::log;
        if (!is_finite(x))
            throw DomainError("ln_gamma_signed: non-finite argument");
        if (detail::is_nonpositive_integer(x, 1e-12))
            throw PoleError("ln_gamma_signed: pole at nonpositive integer " + std::to_string(to_double(x)));
        if (x > 0)
            return {detail::lgamma_positive(x), 1};

        // Gamma(x) Gamma(1 - x) = pi / sin(pi x)
        const T pi = boost::math::constants::pi<T>();
        const T log_abs = log(pi) - log(abs(detail::sin_pi(x))) - detail::lgamma_positive(T(1 - x));
        const long long fl = static_cast<long long>(to_double(floor(x)));
        return {log_abs, (fl % 2 == 0) ? 1 : -1};
    }

    template <class T>
    T gamma_value(const T &x)
    {
        using std::exp;
        const auto g = ln_gamma_signed(x);
        return g.sign * exp(g.log_abs);
    }

    // Rising factorial (a)_k = a (a + 1) ... (a + k - 1); (a)_0 = 1.
    template <class T>
    T pochhammer(const T &a, unsigned k)
    {
        T p = 1;
        for (unsigned j = 0; j < k; ++j)
            p *= a + T(j);
        return p;
    }

    // Gauss hypergeometric series 2F1(a, b; c; z). Terminates when a or b is a
    // nonpositive integer (any z allowed then); otherwise requires |z| < 1.
    template <class T>
    SeriesResult<T> gauss_2f1(const T &a, const T &b, const T &c, const T &z, const SeriesControl<T> &ctl)
    {
        using std::abs;
        using std::round;
        if (!(c > 0))
            throw DomainError("gauss_2f1: c must be positive");

        const bool a_term = detail::is_nonpositive_integer(a);
        const bool b_term = detail::is_nonpositive_integer(b);
        SeriesResult<T> r;
        if (a_term || b_term)
        {
            long long n = -1;
            if (a_term)
                n = static_cast<long long>(-to_double(round(a)));
            if (b_term)
            {
                const long long nb = static_cast<long long>(-to_double(round(b)));
                n = (n < 0) ? nb : std::min(n, nb);
            }
            SeriesAccumulator<T> acc(ctl.rel_tol, ctl.abs_tol, ctl.consecutive_small);
            T term = 1;
            acc.add(term);
            for (long long k = 0; k < n; ++k)
            {
                term *= (a + T(k)) * (b + T(k)) * z / ((c + T(k)) * T(k + 1));
                acc.add(term);
            }
            r.value = acc.value();
            r.terms = static_cast<std::size_t>(n + 1);
            r.tail = 0;
            r.max_abs_term = acc.max_abs_term();
            r.converged = true;
            r.exact = true;
            return r;
        }

        if (!(abs(z) < 1))
            throw DomainError("gauss_2f1: |z| < 1 required for a non-terminating series");

        SeriesAccumulator<T> acc(ctl.rel_tol, ctl.abs_tol, ctl.consecutive_small);
        T term = 1;
        bool done = acc.add(term);
        std::size_t k = 0;
        while (!done)
        {
            if (acc.terms() >= ctl.max_terms)
                throw ConvergenceError("gauss_2f1: no convergence within " + std::to_string(ctl.max_terms) + " terms");
            term *= (a + T(k)) * (b + T(k)) * z / ((c + T(k)) * T(k + 1));
            ++k;
            done = acc.add(term);
        }
        r.value = acc.value();
        r.terms = acc.terms();
        r.tail = acc.tail();
        r.max_abs_term = acc.max_abs_term();
        r.converged = true;
        return r;
    }

    // d/db 2F1(a, b; c; z) evaluated at b = -n. Term-wise product rule: for
    // k <= n the Pochhammer (b)_k is nonzero and contributes
    // (b)_k * sum_{j<k} 1/(b + j); for k > n it carries exactly one zero factor
    // (b + n), whose derivative leaves (-1)^n n! (k - n - 1)!.
    template <class T>
    SeriesResult<T> gauss_2f1_db_at_neg_int(const T &a, unsigned n, const T &c, const T &z, const SeriesControl<T> &ctl)
    {
        using std::abs;
        if (!(c > 0))
            throw DomainError("gauss_2f1_db_at_neg_int: c must be positive");
        if (!(abs(z) < 1))
            throw DomainError("gauss_2f1_db_at_neg_int: |z| < 1 required");

        SeriesAccumulator<T> acc(ctl.rel_tol, ctl.abs_tol, ctl.consecutive_small);
        const T nb = -T(n);

        // k <= n: u_k = (a)_k (-n)_k z^k / ((c)_k k!), weight sum_{j<k} 1/(j - n)
        T u = 1;
        T weight = 0;
        acc.add(T(0));
        for (unsigned k = 1; k <= n; ++k)
        {
            u *= (a + T(k - 1)) * (nb + T(k - 1)) * z / ((c + T(k - 1)) * T(k));
            weight += 1 / (nb + T(k - 1));
            acc.add(u * weight);
        }

        // k = n + 1 onward: v_{n+1} = u_n (a + n) z / ((c + n)(n + 1)),
        // v_{k+1} = v_k (a + k) z (k - n) / ((c + k)(k + 1))
        T v = u * (a + T(n)) * z / ((c + T(n)) * T(n + 1));
        bool done = acc.add(v);
        std::size_t k = n + 1;
        while (!done)
        {
            if (acc.terms() >= ctl.max_terms + n)
                throw ConvergenceError("gauss_2f1_db_at_neg_int: no convergence within " + std::to_string(ctl.max_terms) + " terms");
            v *= (a + T(k)) * z * T(k - n) / ((c + T(k)) * T(k + 1));
            ++k;
            done = acc.add(v);
        }

        SeriesResult<T> r;
        r.value = acc.value();
        r.terms = acc.terms();
        r.tail = acc.tail();
        r.max_abs_term = acc.max_abs_term();
        r.converged = true;
        return r;
    }

    // Kummer confluent series 1F1(a; b; z), b > 0; terminates for a = -n.
    template <class T>
    SeriesResult<T> kummer_1f1(const T &a, const T &b, const T &z, const SeriesControl<T> &ctl)
    {
        using std::round;
        if (!(b > 0))
            throw DomainError("kummer_1f1: b must be positive");

        SeriesResult<T> r;
        SeriesAccumulator<T> acc(ctl.rel_tol, ctl.abs_tol, ctl.consecutive_small);
        T term = 1;
        if (detail::is_nonpositive_integer(a))
        {
            const long long n = static_cast<long long>(-to_double(round(a)));
            acc.add(term);
            for (long long k = 0; k < n; ++k)
            {
                term *= (a + T(k)) * z / ((b + T(k)) * T(k + 1));
                acc.add(term);
            }
            r.value = acc.value();
            r.terms = static_cast<std::size_t>(n + 1);
            r.max_abs_term = acc.max_abs_term();
            r.converged = true;
            r.exact = true;
            return r;
        }

        bool done = acc.add(term);
        std::size_t k = 0;
        while (!done)
        {
            if (acc.terms() >= ctl.max_terms)
                throw ConvergenceError("kummer_1f1: no convergence within " + std::to_string(ctl.max_terms) + " terms");
            term *= (a + T(k)) * z / ((b + T(k)) * T(k + 1));
            ++k;
            done = acc.add(term);
        }
        r.value = acc.value();
        r.terms = acc.terms();
        r.tail = acc.tail();
        r.max_abs_term = acc.max_abs_term();
        r.converged = true;
        return r;
    }

    // Double-precision entry points.
    double digamma(double x);
    SignedLog<double> ln_gamma_signed(double x);
    double pochhammer(double a, unsigned k);
    SeriesValue gauss_2f1(double a, double b, double c, double z, const TruncationPolicy &policy = {});
    SeriesValue gauss_2f1_db_at_neg_int(double a, unsigned n, double c, double z, const TruncationPolicy &policy = {});
    SeriesValue kummer_1f1(double a, double b, double z, const TruncationPolicy &policy = {});

    // ln[exp(-w) 1F1(a; b; z)] for a, b > 0 and z >= 0, robust for z far
    // beyond the double overflow range of 1F1 itself. Uses the large-z
    // asymptotic expansion where it is accurate to double precision.
    double log_scaled_kummer_1f1(double a, double b, double z, double w);
}

#endif
