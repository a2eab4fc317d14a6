// SPDX-License-Identifier: Apache-2.0
//
// bianm: gridless one-bit channel estimation via binary atomic norm minimization
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

#ifndef BIANM_ERROR_HPP_
#define BIANM_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace bianm {

// Bad caller input: out-of-range frequencies, mismatched dimensions, even
// oversample counts, malformed configs.
class InvalidArgument : public std::invalid_argument {
 public:
    using std::invalid_argument::invalid_argument;
};

// Base for failures that arise inside the numerics rather than from input.
class NumericalError : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

class InfeasibleSeparation : public NumericalError {
 public:
    using NumericalError::NumericalError;
};

class DegenerateChannel : public NumericalError {
 public:
    using NumericalError::NumericalError;
};

class IllConditionedReweight : public NumericalError {
 public:
    using NumericalError::NumericalError;
};

// Non-finite iterates in the splitting solver. Usually fixed by a smaller rho.
class Divergence : public NumericalError {
 public:
    using NumericalError::NumericalError;
};

class DegenerateSolution : public NumericalError {
 public:
    using NumericalError::NumericalError;
};

}  // namespace bianm

#endif  // BIANM_ERROR_HPP_
