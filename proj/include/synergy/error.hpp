/*
 * Copyright 2026 The Synergy Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace synergy {

// Base of every error raised by the library. Callers that only care about
// "bad input" can catch this one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidCoalition : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class OutOfBox : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of an operation (negative
// binomial arguments, a multinomial whose parts do not sum to k, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A size/degree/scale limit was exceeded.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

class NonFiniteValue : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// Raised when a method is asked to run on a function representation it does
// not support (e.g. a gradient method on a raw set-function table).
class CapabilityMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace synergy
