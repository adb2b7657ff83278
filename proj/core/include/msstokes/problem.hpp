// Copyright 2026 The msstokes Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <functional>
#include <string>

#include "msstokes/expression.hpp"
#include "msstokes/geometry.hpp"

namespace msstokes {

using VectorField = std::function<Point(Point)>;

enum class BoundaryKind : std::uint8_t { dirichlet, neumann };

/// Source and boundary data of a Stokes problem. The outer boundary is split
/// into Γ_D / Γ_N per side of the unit square; perforations always carry
/// u = 0.
struct ProblemData {
  std::string name = "custom";
  VectorField f;
  VectorField g_dirichlet;
  VectorField g_neumann;
  std::array<BoundaryKind, 4> sides{BoundaryKind::dirichlet, BoundaryKind::dirichlet, BoundaryKind::dirichlet,
                                    BoundaryKind::dirichlet};

  BoundaryKind kind(Side s) const { return sides[static_cast<std::size_t>(s)]; }

  /// f = 0, u = (1, 0) on ∂Ω.
  static ProblemData example1();
  /// f = (1, 1), (∇u - pI) n = 0 on ∂Ω.
  static ProblemData example2();
  /// All data zero, Dirichlet everywhere.
  static ProblemData zero();
  /// Data from expression pairs.
  static ProblemData from_expressions(const std::array<Expression, 2>& f, const std::array<Expression, 2>& g_d,
                                      const std::array<Expression, 2>& g_n, std::array<BoundaryKind, 4> sides);
};

}  // namespace msstokes
