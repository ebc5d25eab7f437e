// Copyright 2026 The stlddp Authors
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

namespace stlddp {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed specification text. Carries the 1-based column of the offending
// token and what the parser expected there.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& msg, int column)
      : Error(msg + " at column " + std::to_string(column)), column_(column) {}
  int column() const { return column_; }

 private:
  int column_;
};

// Formula is syntactically valid but outside the supported STL fragment
// (nested temporal operators, disjunction between path formulas, negation
// above a non-predicate, bare state formula at path level).
class FragmentError : public Error {
 public:
  using Error::Error;
};

class UnknownPredicateError : public Error {
 public:
  explicit UnknownPredicateError(const std::string& name)
      : Error("unknown predicate '" + name + "'"), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

// A temporal window reaches past the end of the signal or horizon.
class HorizonExceededError : public Error {
 public:
  using Error::Error;
};

class LengthMismatchError : public Error {
 public:
  using Error::Error;
};

class EmptyArgumentError : public Error {
 public:
  using Error::Error;
};

// Dynamics produced a non-finite state; records the first bad timestep.
class NonFiniteStateError : public Error {
 public:
  NonFiniteStateError(const std::string& msg, int timestep)
      : Error(msg + " at timestep " + std::to_string(timestep)),
        timestep_(timestep) {}
  int timestep() const { return timestep_; }

 private:
  int timestep_;
};

class SingularMassMatrixError : public Error {
 public:
  using Error::Error;
};

// Scenario/config file violates the schema; message names the offending key.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int row)
      : Error(msg + " (row " + std::to_string(row) + ")"), row_(row) {}
  int row() const { return row_; }

 private:
  int row_;
};

}  // namespace stlddp
