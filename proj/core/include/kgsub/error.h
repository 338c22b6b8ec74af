/* Copyright 2026 The kgsub Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef KGSUB_ERROR_H_
#define KGSUB_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kgsub {

// Base class for every error raised by the library. The category is a short
// lowercase token ("parse", "argument", ...) that the CLI prints verbatim so
// failures can be matched by scripts.
class Error : public std::runtime_error {
 public:
  Error(std::string category, const std::string& message);

  const std::string& category() const noexcept { return category_; }

 private:
  std::string category_;
};

class ParseError : public Error {
 public:
  // line is 1-based; 0 means "not tied to a line".
  ParseError(const std::string& message, std::size_t line = 0);

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ArgumentError : public Error {
 public:
  explicit ArgumentError(const std::string& message)
      : Error("argument", message) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message) : Error("config", message) {}
};

class VocabError : public Error {
 public:
  explicit VocabError(const std::string& message) : Error("vocab", message) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& message)
      : Error("numeric", message) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message) : Error("io", message) {}
};

// Raised when an operation is not defined for the given model family, e.g.
// negating an entity embedding of a non-negative model.
class InapplicableError : public Error {
 public:
  explicit InapplicableError(const std::string& message)
      : Error("inapplicable", message) {}
};

}  // namespace kgsub

#endif  // KGSUB_ERROR_H_
