/*
 * Copyright 2026 The mswell Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef MSWELL_ERRORS_HPP
#define MSWELL_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace mswell {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A (p, T) or other argument outside the validity range of a law.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Singular local systems, non-finite values, or other numerical breakdowns.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The slip-law parameters violate the condition under which the two-point
/// gas flux is monotone.
class MonotonicityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class MeshError : public Error {
 public:
  using Error::Error;
};

/// A reduced model was applied outside its assumptions (e.g. cross flow in
/// the single-implicit-unknown well).
class ModelAssumptionError : public Error {
 public:
  using Error::Error;
};

/// Time integration could not proceed (time-step underflow, repeated failures).
class SolverFailure : public Error {
 public:
  using Error::Error;
};

/// Output files or directories could not be created or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Scenario validation failure; carries every problem found, each already
/// prefixed with its line reference when one is known.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> problems)
      : Error(join(problems)), problems_(std::move(problems)) {}

  const std::vector<std::string>& problems() const { return problems_; }

 private:
  static std::string join(const std::vector<std::string>& p) {
    std::string out;
    for (const auto& s : p) {
      if (!out.empty()) out += '\n';
      out += s;
    }
    return out;
  }
  std::vector<std::string> problems_;
};

}  // namespace mswell

#endif  // MSWELL_ERRORS_HPP
