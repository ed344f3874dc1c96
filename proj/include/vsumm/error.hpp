// Copyright 2026 The Authors.
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

namespace vsumm {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The analysis database file could not be parsed under the schema.
class ParseError : public Error {
 public:
  using Error::Error;
};

// A parsed database violates a typed invariant. field() names the offending
// location, e.g. "frames[3].labels.object[0]".
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// Bad arguments to a ground-set, kernel, objective or optimizer call.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A query matched no item. Callers treat this as "no relevant content"
// rather than as a failure.
class EmptyQueryResult : public Error {
 public:
  using Error::Error;
};

// Unknown database id or missing resource in the service layer.
class NotFound : public Error {
 public:
  using Error::Error;
};

// A memoized gain disagreed with the from-scratch difference while
// verification was enabled.
class MemoizationMismatch : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace vsumm
