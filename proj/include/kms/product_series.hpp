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

#ifndef KMS_PRODUCT_SERIES_HPP
#define KMS_PRODUCT_SERIES_HPP

// Residue-series engine behind the product statistics, templated on the
// scalar type. Coefficients carry an absolute rounding estimate so that a
// sum can decide whether its working type was wide enough.

#include "kms/product.hpp"
#include "kms/scalar.hpp"
#include "kms/specfun.hpp"

#include <cmath>
#include <cstddef>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

namespace kms::detail
{
    using Tiers = std::tuple<double, real40, real80, real160, real320>;
    inline constexpr std::size_t tier_count = std::tuple_size_v<Tiers>;

    template <class T>
    struct LinkData
    {
        T mu, m, a, c;
    };

    template <class T>
    struct PairData
    {
        LinkData<T> l1, l2;
        T log_a12;
        T gap; // exactly N in the integer case
        T prefactor;
        unsigned n_gap = 0;
        bool integer = false;
    };

    template <class T>
    LinkData<T> make_link_data(const ShadowedParams &p)
    {
        const auto d = derive_coeffs_as<T>(p);
        return {T(p.mu), T(p.m), d.a, d.c};
    }

    template <class T>
    PairData<T> make_pair_data(const ShadowedParams &p1, const ShadowedParams &p2, bool integer, unsigned n_gap)
    {
        using std::exp;
        using std::log;
        PairData<T> d;
        d.l1 = make_link_data<T>(p1);
        d.l2 = make_link_data<T>(p2);
        d.log_a12 = log(d.l1.a) + log(d.l2.a);
        d.integer = integer;
        d.n_gap = n_gap;
        d.gap = integer ? T(n_gap) : T(d.l2.mu - d.l1.mu);
        const auto c1 = derive_coeffs_as<T>(p1);
        const auto c2 = derive_coeffs_as<T>(p2);
        d.prefactor = exp(log(c1.b) + log(c2.b) - lgamma_positive(d.l1.mu) - lgamma_positive(d.l2.mu));
        return d;
    }

    template <class T>
    struct Valued
    {
        T value = 0;
        T err = 0; // absolute
    };

    template <class T>
    Valued<T> valued(const SeriesResult<T> &r)
    {
        using std::abs;
        return {r.value, 4 * epsilon_of<T>() * r.max_abs_term + abs(r.tail)};
    }

    // Product rule for absolute errors of x * y.
    template <class T>
    Valued<T> mul(const Valued<T> &x, const Valued<T> &y)
    {
        using std::abs;
        return {x.value * y.value, abs(x.value) * y.err + x.err * abs(y.value)};
    }

    // (a1 a2)^(n + mu_lead) Gamma(diff - n) 2F1(m_lead, -n; mu_lead; c_lead)
    //   2F1(m_other, diff - n; mu_other; c_other) / ((-1)^n n!)
    template <class T>
    Valued<T> residue_coefficient(const LinkData<T> &lead, const LinkData<T> &other, const T &log_a12, const T &diff,
                                  unsigned n)
    {
        using std::abs;
        using std::exp;
        const auto ctl = SeriesControl<T>::working();
        const T eps = epsilon_of<T>();
        const T tn(n);
        const auto g = ln_gamma_signed(T(diff - tn));
        const T log_mag = (tn + lead.mu) * log_a12 + g.log_abs - lgamma_positive(T(tn + 1));
        const int sign = g.sign * ((n % 2 == 0) ? 1 : -1);
        const auto f = mul(valued(gauss_2f1(lead.m, T(-tn), lead.mu, lead.c, ctl)),
                           valued(gauss_2f1(other.m, T(diff - tn), other.mu, other.c, ctl)));
        const T mag = exp(log_mag);
        Valued<T> out;
        out.value = sign * mag * f.value;
        out.err = mag * (f.err + abs(f.value) * eps * (8 + 2 * abs(log_mag)));
        return out;
    }

    template <class T>
    struct CoefficientRow
    {
        // non-integer gap: p = A_n, q = B_n
        // integer gap, n < N: p = A_n, q = 0; n >= N: p = C_n, q = D_n
        T p = 0, q = 0;
        T p_err = 0, q_err = 0;
    };

    template <class T>
    CoefficientRow<T> coefficient_row(const PairData<T> &d, unsigned n)
    {
        using std::abs;
        using std::exp;
        CoefficientRow<T> row;
        if (!d.integer)
        {
            const auto a = residue_coefficient(d.l1, d.l2, d.log_a12, d.gap, n);
            const auto b = residue_coefficient(d.l2, d.l1, d.log_a12, T(-d.gap), n);
            row.p = a.value;
            row.p_err = a.err;
            row.q = b.value;
            row.q_err = b.err;
            return row;
        }
        if (n < d.n_gap)
        {
            const auto a = residue_coefficient(d.l1, d.l2, d.log_a12, d.gap, n);
            row.p = a.value;
            row.p_err = a.err;
            return row;
        }

        const auto ctl = SeriesControl<T>::working();
        const T eps = epsilon_of<T>();
        const unsigned k = n - d.n_gap;
        const T tn(n), tk(k);
        const T log_mag = (tn + d.l1.mu) * d.log_a12 - lgamma_positive(T(tk + 1)) - lgamma_positive(T(tn + 1));
        const int sign = (d.n_gap % 2 == 0) ? 1 : -1;
        const T mag = exp(log_mag);
        const T mag_rel = eps * (8 + 2 * abs(log_mag));

        const auto f1 = valued(gauss_2f1(d.l1.m, T(-tn), d.l1.mu, d.l1.c, ctl));
        const auto f2 = valued(gauss_2f1(d.l2.m, T(-tk), d.l2.mu, d.l2.c, ctl));
        const auto g1 = valued(gauss_2f1_db_at_neg_int(d.l1.m, n, d.l1.mu, d.l1.c, ctl));
        const auto g2 = valued(gauss_2f1_db_at_neg_int(d.l2.m, k, d.l2.mu, d.l2.c, ctl));
        const T psi1 = digamma(T(tn + 1)), psi2 = digamma(T(tk + 1));
        const T psi = psi1 + psi2 - d.log_a12;
        const Valued<T> psi_v{psi, 4 * eps * (abs(psi1) + abs(psi2) + abs(d.log_a12))};

        const auto ff = mul(f1, f2);
        const auto t1 = mul(g1, f2);
        const auto t2 = mul(f1, g2);
        const auto t3 = mul(psi_v, ff);
        const T bracket = t1.value + t2.value + t3.value;
        const T bracket_err = t1.err + t2.err + t3.err + eps * (abs(t1.value) + abs(t2.value) + abs(t3.value));

        row.p = sign * mag * bracket;
        row.p_err = mag * (bracket_err + abs(bracket) * mag_rel);
        row.q = sign * mag * ff.value;
        row.q_err = mag * (ff.err + abs(ff.value) * mag_rel);
        return row;
    }

    // Write-once coefficient table for one scalar type. Readers hold immutable
    // snapshots; extension copies, appends and swaps under the lock.
    template <class T>
    class CoefficientTable
    {
    public:
        using Rows = std::vector<CoefficientRow<T>>;

        struct Snapshot
        {
            std::shared_ptr<const Rows> rows;
            const PairData<T> *data;
        };

        Snapshot ensure(std::size_t count, const ShadowedParams &l1, const ShadowedParams &l2, bool integer,
                        unsigned n_gap)
        {
            std::lock_guard<std::mutex> lock(mutex_);
            if (!data_)
            {
                data_ = std::make_unique<PairData<T>>(make_pair_data<T>(l1, l2, integer, n_gap));
                rows_ = std::make_shared<const Rows>();
            }
            if (rows_->size() < count)
            {
                auto next = std::make_shared<Rows>(*rows_);
                next->reserve(count);
                for (std::size_t n = next->size(); n < count; ++n)
                    next->push_back(coefficient_row(*data_, static_cast<unsigned>(n)));
                rows_ = std::move(next);
            }
            return {rows_, data_.get()};
        }

    private:
        std::mutex mutex_;
        std::unique_ptr<PairData<T>> data_;
        std::shared_ptr<const Rows> rows_;
    };

    struct CoefficientCache
    {
        ShadowedParams l1, l2;
        bool integer = false;
        unsigned n_gap = 0;
        std::tuple<CoefficientTable<double>, CoefficientTable<real40>, CoefficientTable<real80>,
                   CoefficientTable<real160>, CoefficientTable<real320>>
            tables;

        template <class T>
        typename CoefficientTable<T>::Snapshot ensure(std::size_t count)
        {
            return std::get<CoefficientTable<T>>(tables).ensure(count, l1, l2, integer, n_gap);
        }
    };
}

#endif
