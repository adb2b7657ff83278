// Copyright 2026 The msstokes Authors.
// SPDX-License-Identifier: Apache-2.0

#include "msstokes/problem.hpp"

namespace msstokes {

namespace {

VectorField constant(double x, double y) {
  return [x, y](Point) { return Point{x, y}; };
}

}  // namespace

ProblemData ProblemData::example1() {
  ProblemData p;
  p.name = "example1";
  p.f = constant(0.0, 0.0);
  p.g_dirichlet = constant(1.0, 0.0);
  p.g_neumann = constant(0.0, 0.0);
  p.sides.fill(BoundaryKind::dirichlet);
  return p;
}

ProblemData ProblemData::example2() {
  ProblemData p;
  p.name = "example2";
  p.f = constant(1.0, 1.0);
  p.g_dirichlet = constant(0.0, 0.0);
  p.g_neumann = constant(0.0, 0.0);
  p.sides.fill(BoundaryKind::neumann);
  return p;
}

ProblemData ProblemData::zero() {
  ProblemData p;
  p.name = "zero";
  p.f = constant(0.0, 0.0);
  p.g_dirichlet = constant(0.0, 0.0);
  p.g_neumann = constant(0.0, 0.0);
  return p;
}

ProblemData ProblemData::from_expressions(const std::array<Expression, 2>& f, const std::array<Expression, 2>& g_d,
                                          const std::array<Expression, 2>& g_n, std::array<BoundaryKind, 4> sides) {
  auto field = [](const std::array<Expression, 2>& e) -> VectorField {
    return [e](Point p) { return Point{e[0](p.x, p.y), e[1](p.x, p.y)}; };
  };
  ProblemData p;
  p.name = "custom";
  p.f = field(f);
  p.g_dirichlet = field(g_d);
  p.g_neumann = field(g_n);
  p.sides = sides;
  return p;
}

}  // namespace msstokes
