// Copyright 2026 The rydarp Authors
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

namespace rydarp {

// Operation undefined for the given arguments (zero detuning in an
// elimination, zero-length gap, empty axis, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Integration left its accuracy envelope: norm/trace drift or loss of
// positivity. `magnitude` carries the offending drift or eigenvalue.
class NumericFailure : public std::runtime_error {
public:
    NumericFailure(const std::string& what, double magnitude)
        : std::runtime_error(what), magnitude_(magnitude) {}
    double magnitude() const noexcept { return magnitude_; }

private:
    double magnitude_;
};

// Bad configuration; `key` is the dotted path of the offending entry.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& key, const std::string& message)
        : std::runtime_error(key + ": " + message), key_(key) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace rydarp
