// Copyright 2026 The msstokes Authors.
// SPDX-License-Identifier: Apache-2.0

#include "msstokes/expression.hpp"

#include <cctype>
#include <cstdlib>

#include "msstokes/errors.hpp"

namespace msstokes {

namespace {

// Recursive-descent parser emitting postfix code.
//   expr   := term (('+'|'-') term)*
//   term   := unary (('*'|'/') unary)*
//   unary  := '-' unary | '+' unary | atom
//   atom   := number | 'x' | 'y' | '(' expr ')'
template <class Node, class Op>
class Parser {
 public:
  Parser(const std::string& s, std::vector<Node>& out) : s_(s), out_(out) {}

  void parse() {
    expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& why) const {
    throw ConfigError("expression '" + s_ + "': " + why + " at column " + std::to_string(pos_ + 1));
  }
  void expr() {
    term();
    for (;;) {
      if (eat('+')) {
        term();
        out_.push_back({Op::add});
      } else if (eat('-')) {
        term();
        out_.push_back({Op::sub});
      } else {
        return;
      }
    }
  }
  void term() {
    unary();
    for (;;) {
      if (eat('*')) {
        unary();
        out_.push_back({Op::mul});
      } else if (eat('/')) {
        unary();
        out_.push_back({Op::div});
      } else {
        return;
      }
    }
  }
  void unary() {
    if (eat('-')) {
      unary();
      out_.push_back({Op::neg});
    } else if (eat('+')) {
      unary();
    } else {
      atom();
    }
  }
  void atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      expr();
      if (!eat(')')) fail("missing ')'");
    } else if (c == 'x' || c == 'y') {
      ++pos_;
      out_.push_back({c == 'x' ? Op::var_x : Op::var_y});
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      out_.push_back({Op::constant, v});
    } else {
      fail(std::string("unexpected '") + c + "'");
    }
  }

  const std::string& s_;
  std::vector<Node>& out_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression::Expression(const std::string& text) : text_(text) {
  Parser<Node, Op>(text_, program_).parse();
}

double Expression::operator()(double x, double y) const {
  if (program_.empty()) return 0.0;
  double stack[64];
  int top = 0;
  for (const Node& n : program_) {
    if (top >= 63) throw ConfigError("expression '" + text_ + "' is nested too deeply");
    switch (n.op) {
      case Op::constant: stack[top++] = n.value; break;
      case Op::var_x: stack[top++] = x; break;
      case Op::var_y: stack[top++] = y; break;
      case Op::neg: stack[top - 1] = -stack[top - 1]; break;
      case Op::add: --top; stack[top - 1] += stack[top]; break;
      case Op::sub: --top; stack[top - 1] -= stack[top]; break;
      case Op::mul: --top; stack[top - 1] *= stack[top]; break;
      case Op::div: --top; stack[top - 1] /= stack[top]; break;
    }
  }
  return stack[0];
}

}  // namespace msstokes
