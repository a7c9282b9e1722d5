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

#ifndef KMS_SCALAR_HPP
#define KMS_SCALAR_HPP

// Scalar types used by the templated numerics. Everything in specfun and the
// product series is written against a generic real type T; double is the
// default and the MPFR-backed types are used when a residue series cancels
// more digits than double carries.

#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <limits>

namespace kms
{
    namespace bmp = boost::multiprecision;

    template <unsigned Digits10>
    using mp_real = bmp::number<bmp::mpfr_float_backend<Digits10>, bmp::et_off>;

    using real40 = mp_real<40>;
    using real80 = mp_real<80>;
    using real160 = mp_real<160>;
    using real320 = mp_real<320>;

    template <class T>
    inline T epsilon_of() { return std::numeric_limits<T>::epsilon(); }

    template <class T>
    inline constexpr int digits10_of() { return std::numeric_limits<T>::digits10; }

    template <class T>
    inline double to_double(const T &x) { return static_cast<double>(x); }

    template <class T>
    inline bool is_finite(const T &x)
    {
        using std::isfinite;
        using boost::multiprecision::isfinite;
        return isfinite(x);
    }
}

#endif
