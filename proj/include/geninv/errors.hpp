// Copyright 2026 The geninv Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace geninv {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Operand shapes do not conform.
class ShapeError : public Error {
  public:
    using Error::Error;
};

/// A mathematical hypothesis of an operation is violated (rank, connectivity, ...).
class PreconditionError : public Error {
  public:
    using Error::Error;
};

/// An iterative kernel hit its iteration cap.
class ConvergenceError : public Error {
  public:
    ConvergenceError(const std::string& what, std::size_t iterations)
        : Error(what + " (after " + std::to_string(iterations) + " iterations)"), iterations_(iterations) {}

    [[nodiscard]] std::size_t iterations() const noexcept { return iterations_; }

  private:
    std::size_t iterations_;
};

/// Malformed input text. `line()` is 1-based, 0 when unknown.
class ParseError : public Error {
  public:
    ParseError(const std::string& what, std::size_t line, const std::string& source = {})
        : Error(format(what, line, source)), detail_(what), line_(line) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }
    /// The message without location.
    [[nodiscard]] const std::string& detail() const noexcept { return detail_; }

  private:
    static std::string format(const std::string& what, std::size_t line, const std::string& source) {
        std::string loc = source;
        if (line > 0) {
            loc += (source.empty() ? "line " : ":") + std::to_string(line);
        }
        return loc.empty() ? what : loc + ": " + what;
    }

    std::string detail_;
    std::size_t line_;
};

/// File could not be opened, read or written.
class IoError : public Error {
  public:
    using Error::Error;
};

} // namespace geninv
