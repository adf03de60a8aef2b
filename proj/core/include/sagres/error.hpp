// Copyright 2026 The Sagres Authors.
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

#ifndef SAGRES_ERROR_HPP_
#define SAGRES_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace sagres {

/// Invalid or inconsistent configuration (schema or invariant violation).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Non-finite or exploding values during simulation or adaptation.
/// Carries the step index at which the blowup was detected.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, int step)
      : std::runtime_error(what + " at step " + std::to_string(step)),
        step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

/// Filesystem failure while reading configs or writing results.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sagres

#endif  // SAGRES_ERROR_HPP_
