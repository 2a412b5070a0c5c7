// Copyright 2026 The PQC Ensemble Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <stdexcept>
#include <string>

namespace pqc {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: bad layout, out-of-range label, unnormalized data.
class ValidationError : public Error {
  public:
    using Error::Error;
};

/// A requested state would exceed the configured memory bound.
class CapacityError : public Error {
  public:
    using Error::Error;
};

/// The n1-register needs more constituents than the molecule budget holds.
class BudgetError : public Error {
  public:
    using Error::Error;
};

namespace detail {
[[noreturn]] inline void fail_validation(const std::string &msg) {
    throw ValidationError(msg);
}
} // namespace detail

} // namespace pqc
