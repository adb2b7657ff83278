// Copyright 2026 The msstokes Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include "msstokes/dgform.hpp"
#include "msstokes/problem.hpp"

namespace msstokes {

/// Solution of a hybrid system. `u` holds fine DG coefficients in DgSpace
/// numbering (block-discontinuous), `coefficients` the coarse ones.
struct HybridSolution {
  Eigen::VectorXd coefficients;
  Eigen::VectorXd u;
  Eigen::VectorXd p;      // one value per coarse block
  Eigen::VectorXd p_hat;  // one value per coarse edge
  double gauge_multiplier = 0.0;
  double residual = 0.0;
  /// Constraint rows dropped because B was rank-deficient (0 normally).
  Eigen::Index dropped_constraints = 0;
  Eigen::Index n_u = 0;
  Eigen::Index n_p = 0;
  Eigen::Index n_ph = 0;
  double seconds = 0.0;
};

/// Solves [A Bᵀ 0; B 0 g; 0 gᵀ 0] for an assembled hybrid system. When B is
/// rank-deficient but the constraints are consistent (too few basis
/// functions per block), dependent rows are dropped and the pressure is
/// fixed by the gauge along the constant mode. Throws SingularSystem with a
/// diagnosis otherwise.
HybridSolution solve_hybrid(const BlockSpace& space, const HybridSystem& system);

HybridSolution solve_multiscale(const BlockSpace& space, const ProblemData& problem, double gamma);

/// Same system in the full space V_h^DG.
HybridSolution solve_reference(const DgSpace& dg, const ProblemData& problem, double gamma);

/// Fine DG coefficients of a coarse coefficient vector; throws DimensionMismatch.
Eigen::VectorXd downscale(const BlockSpace& space, const Eigen::VectorXd& coefficients);

struct InfSupResult {
  double constant = 0.0;
  /// Eigenvalue assigned to the deflated constant mode.
  double shift = 0.0;
};

/// Discrete inf-sup constant of b_DG on `space`: the square root of the
/// smallest eigenvalue of B N⁻¹ Bᵀ q = β² M_Q q with N the A-norm matrix and
/// M_Q = diag(|K|, h|E|), after deflating the constant (p, p̂) = (1, 1) mode.
InfSupResult inf_sup_constant(const BlockSpace& space);

}  // namespace msstokes
