//
// Copyright 2026 The psolab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef PSOLAB_ERRORS_HPP_
#define PSOLAB_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace psolab {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration: unsupported widths, unknown registry names,
// malformed config files. The CLI maps these to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A construction parameter violates an operation's precondition.
class ParameterError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Data handed to an operation does not fit it (width mismatch, bad
// permutation, truncated dataset file).
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace psolab

#endif  // PSOLAB_ERRORS_HPP_
