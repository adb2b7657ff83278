// Copyright 2026 The msstokes Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace msstokes {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CircleTooSmall : public Error {
 public:
  using Error::Error;
};

class SnapDegeneracy : public Error {
 public:
  using Error::Error;
};

/// Malformed input file; carries the 1-based line where parsing stopped.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line);
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// A structural invariant was violated. `check()` names the failed check.
class InvariantViolation : public Error {
 public:
  InvariantViolation(std::string check, const std::string& detail);
  const std::string& check() const noexcept { return check_; }

 private:
  std::string check_;
};

class DegenerateElement : public Error {
 public:
  using Error::Error;
};

class SingularSystem : public Error {
 public:
  using Error::Error;
};

class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

class EmptyAfterPOD : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class MeshMismatch : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class MissingPrerequisite : public Error {
 public:
  using Error::Error;
};

}  // namespace msstokes
