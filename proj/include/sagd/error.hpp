// Copyright 2026 The sagd Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace sagd {

// Base of every error the library throws. The C API maps each subclass to a
// distinct status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (s <= 0 for
// log_gamma, x <= 0 for gamma data, invalid stability constants, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Vectors whose sizes do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A chain or optimizer produced a non-finite value.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

// Malformed or unknown configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Numerical integration that failed to settle within its budget.
class QuadratureError : public Error {
 public:
  using Error::Error;
};

}  // namespace sagd
