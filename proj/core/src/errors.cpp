// Copyright 2026 The msstokes Authors.
// SPDX-License-Identifier: Apache-2.0

#include "msstokes/errors.hpp"

#include <utility>

namespace msstokes {

ParseError::ParseError(const std::string& what, int line)
    : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

InvariantViolation::InvariantViolation(std::string check, const std::string& detail)
    : Error(check + ": " + detail), check_(std::move(check)) {}

}  // namespace msstokes
