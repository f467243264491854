// Copyright 2026 The hetspec Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace hetspec {

/// Argument outside the mathematical domain of an operation (negative
/// wavelength, efficiency above one, ...).
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed or inconsistent configuration. `path` locates the offending key
/// (e.g. "detector.gain_stages[1]") when the error came from a config file.
class config_error : public std::invalid_argument {
 public:
  explicit config_error(const std::string& what, std::string path = {})
      : std::invalid_argument(path.empty() ? what : path + ": " + what),
        path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// A physical modelling assumption does not hold for the given inputs, e.g.
/// quadrature statistics that are not symmetric, or a receiver that is not
/// shot-noise limited.
class assumption_violation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool ok, const char* what) {
  if (!ok) throw domain_error(what);
}

}  // namespace detail

}  // namespace hetspec
