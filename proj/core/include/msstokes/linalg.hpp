// Copyright 2026 The msstokes Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <memory>

#include "msstokes/femcore.hpp"

namespace msstokes {

/// Direct factorization of the symmetric saddle-point matrix
///
///   [ A   Bᵀ  0 ]
///   [ B  -C   g ]
///   [ 0   gᵀ  0 ]
///
/// where C (pressure stabilization) and the gauge column g are optional.
/// The gauge row adds a scalar multiplier enforcing gᵀp = 0.
class SaddlePointSolver {
 public:
  SaddlePointSolver(const SparseMatrix& A, const SparseMatrix& B, const SparseMatrix* C = nullptr,
                    const Eigen::VectorXd* gauge = nullptr);

  struct Solution {
    Eigen::MatrixXd u;
    Eigen::MatrixXd p;
    Eigen::RowVectorXd gauge_multiplier;
    /// Largest relative residual ‖Kx - b‖ / ‖b‖ over the columns.
    double residual = 0.0;
  };

  /// Solves for one or several right-hand sides (columns).
  Solution solve(const Eigen::MatrixXd& rhs_u, const Eigen::MatrixXd& rhs_p) const;

  Eigen::Index num_velocity() const { return nu_; }
  Eigen::Index num_pressure() const { return np_; }
  bool gauged() const { return gauged_; }
  const SparseMatrix& matrix() const { return kkt_; }

 private:
  Eigen::Index nu_, np_;
  bool gauged_;
  SparseMatrix kkt_;
  std::unique_ptr<Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>> lu_;
};

/// One-shot [A Bᵀ; B 0] solve; `rhs` stacks velocity and constraint parts.
/// Throws SingularSystem when the factorization fails or the relative
/// residual exceeds 1e-10.
Eigen::VectorXd sparse_saddle_solve(const SparseMatrix& A, const SparseMatrix& B, const Eigen::VectorXd& rhs);

struct GeneralizedEigenpairs {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // S-orthonormal columns
};

/// Symmetric-definite pencil A Φ = λ S Φ. Throws NotPositiveDefinite when the
/// smallest Cholesky pivot of S is below 1e-12 · trace(S)/n.
GeneralizedEigenpairs dense_generalized_eigensolve(const Eigen::MatrixXd& A, const Eigen::MatrixXd& S);

}  // namespace msstokes
