// Copyright 2026 The wgbragg Authors
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

namespace wgbragg {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid input: bad parameters, malformed configuration, out-of-range angles.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A requested angle or order has no real solution (|cos| > 1).
class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Singular or ill-conditioned linear algebra.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Request exceeds what a model tier can do (e.g. Lindblad oracle beyond 6 atoms).
class CapabilityError : public Error {
 public:
  using Error::Error;
};

}  // namespace wgbragg
