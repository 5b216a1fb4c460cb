// Copyright 2026 The qwalk-nm Authors
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

namespace qwalk {

// Failure categories. Each maps onto a process exit code in the CLI.
enum class ErrorKind { Shape, Usage, Config, Integrity, Unsupported };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct ShapeError : Error {
  explicit ShapeError(const std::string& w) : Error(ErrorKind::Shape, w) {}
};
struct UsageError : Error {
  explicit UsageError(const std::string& w) : Error(ErrorKind::Usage, w) {}
};
struct ConfigError : Error {
  explicit ConfigError(const std::string& w) : Error(ErrorKind::Config, w) {}
};
struct IntegrityError : Error {
  explicit IntegrityError(const std::string& w)
      : Error(ErrorKind::Integrity, w) {}
};
struct UnsupportedError : Error {
  explicit UnsupportedError(const std::string& w)
      : Error(ErrorKind::Unsupported, w) {}
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::Shape: return "shape";
    case ErrorKind::Usage: return "usage";
    case ErrorKind::Config: return "config";
    case ErrorKind::Integrity: return "integrity";
    case ErrorKind::Unsupported: return "unsupported";
  }
  return "unknown";
}

// 0 ok, 2 usage, 3 config, 4 numerical integrity.
inline int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::Usage:
    case ErrorKind::Shape: return 2;
    case ErrorKind::Config:
    case ErrorKind::Unsupported: return 3;
    case ErrorKind::Integrity: return 4;
  }
  return 1;
}

}  // namespace qwalk
