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

#ifndef KMS_ERROR_HPP
#define KMS_ERROR_HPP

#include <stdexcept>
#include <string>

namespace kms
{
    // Argument outside the admissible domain of an operation (invalid parameters,
    // Mellin strip violation, pole of Gamma/digamma, wrong pole-structure case).
    class DomainError : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    // Gamma/digamma evaluated at a nonpositive integer.
    class PoleError : public DomainError
    {
    public:
        using DomainError::DomainError;
    };

    // An infinite series hit its term limit before the stopping rule fired.
    class ConvergenceError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Adaptive quadrature could not reach the requested tolerance.
    class QuadratureError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };
}

#endif
