// Copyright 2026 The tabcondense Authors
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

namespace tabcondense {

/// Base of every exception thrown by the library. `origin()` names the
/// module that raised it so front ends can prefix diagnostics.
class Error : public std::runtime_error {
 public:
  Error(std::string origin, const std::string& what)
      : std::runtime_error(origin + ": " + what), origin_(std::move(origin)) {}

  const std::string& origin() const noexcept { return origin_; }

  /// True for failures caused by bad input (files, flags, data) rather than
  /// a defect or numerical breakdown inside the library.
  virtual bool user_error() const noexcept { return true; }

 private:
  std::string origin_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error("io", what) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error("parse", what) {}
};

class InvalidArgument : public Error {
 public:
  InvalidArgument(std::string origin, const std::string& what)
      : Error(std::move(origin), what) {}
};

/// Numerical breakdown (non-finite loss, diverging training).
class NumericalError : public Error {
 public:
  NumericalError(std::string origin, const std::string& what)
      : Error(std::move(origin), what) {}
  bool user_error() const noexcept override { return false; }
};

}  // namespace tabcondense
