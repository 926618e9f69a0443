/*
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#pragma once

#include <stdexcept>
#include <string>

namespace nsbco {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments: wrong dimensions, non-finite entries, bad exponents.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A point outside the domain of the mirror map (e.g. a zero entry under entropy).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An iterative solver failed to converge.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Rejected configuration. `key()` names the offending setting when known.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message, std::string key = {})
      : Error(key.empty() ? message : key + ": " + message), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// The loss oracle misbehaved (non-finite value).
class EnvironmentError : public Error {
 public:
  using Error::Error;
};

/// A run-time invariant failed. Always indicates a bug or a broken contract.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace nsbco
