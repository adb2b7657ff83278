// Copyright 2026 The msstokes Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "msstokes/femcore.hpp"
#include "msstokes/linalg.hpp"

namespace msstokes {

/// Default Brezzi–Pitkäranta coefficient in 0.05 h_T² ∫_T ∇p·∇q.
inline constexpr double kPressureStabilization = 0.05;

struct LocalStokesResult {
  /// Nodal velocity on the subdomain, one column per right-hand side.
  Eigen::MatrixXd velocity;
  /// Triangle averages of the zero-mean P1 pressure.
  Eigen::MatrixXd pressure;
  /// Divergence constant c = ∫_∂D g·n / |D| per column.
  Eigen::VectorXd divergence;
};

/// Stokes problem -Δu + ∇p = 0, div u = c on a set of fine triangles with
/// Dirichlet data on every boundary node. Equal-order P1/P1 with
/// Brezzi–Pitkäranta stabilization; the pressure mean is fixed by a scalar
/// multiplier. The factorization is built once and reused for every
/// right-hand side.
class LocalStokesSolver {
 public:
  LocalStokesSolver(const FineMesh& mesh, std::vector<int> triangles,
                    double stabilization = kPressureStabilization);

  const Subdomain& subdomain() const { return domain_; }
  /// Local node indices carrying Dirichlet data, in data order.
  std::span<const int> boundary_nodes() const { return domain_.boundary_nodes(); }
  std::size_t num_boundary_dofs() const { return 2 * domain_.boundary_nodes().size(); }

  /// `boundary_data` has 2 · #boundary nodes rows ordered (node, component)
  /// and one column per problem.
  LocalStokesResult solve(const Eigen::MatrixXd& boundary_data) const;

 private:
  Subdomain domain_;
  std::vector<int> free_index_;      // velocity dof -> free unknown or -1
  std::vector<int> boundary_index_;  // velocity dof -> boundary data row or -1
  SparseMatrix a_ib_;                // free rows, boundary columns
  SparseMatrix b_b_;                 // pressure rows, boundary columns
  Eigen::VectorXd pressure_mass_;    // ∫ φ_q
  Eigen::RowVectorXd boundary_flux_; // over boundary data rows
  std::unique_ptr<SaddlePointSolver> solver_;
};

struct LocalStokesProblem {
  std::vector<int> triangles;
  /// Dirichlet data per boundary node of the triangle set (sorted by global
  /// node id), ordered (node, component).
  Eigen::VectorXd boundary_data;
};

struct LocalStokesSolution {
  FineFunction velocity;
  Eigen::VectorXd pressure;  // per triangle, in `velocity.triangles` order
  double divergence = 0.0;
};

LocalStokesSolution solve_local_stokes(const FineMesh& mesh, const LocalStokesProblem& problem);

}  // namespace msstokes
