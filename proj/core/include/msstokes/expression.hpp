// Copyright 2026 The msstokes Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

namespace msstokes {

/// Arithmetic expression over (x, y): numeric literals, + - * /, unary minus,
/// parentheses and the variables x and y. Parse errors throw ConfigError.
class Expression {
 public:
  Expression() = default;
  explicit Expression(const std::string& text);

  double operator()(double x, double y) const;
  const std::string& text() const { return text_; }

 private:
  enum class Op { constant, var_x, var_y, add, sub, mul, div, neg };
  struct Node {
    Op op;
    double value = 0.0;
  };
  std::string text_;
  std::vector<Node> program_;  // postfix
};

}  // namespace msstokes
