// Copyright 2026 The msstokes Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <utility>

#include "msstokes/geometry.hpp"

namespace msstokes::testing {

inline std::pair<FineMesh, CoarsePartition> unperforated(double H, int refinement,
                                                         BlockShape shape = BlockShape::rectangular) {
  return generate_perforated_mesh(PerforationSet{}, H, refinement, shape);
}

inline std::pair<FineMesh, CoarsePartition> one_hole(double H, int refinement, Point center, double radius,
                                                     BlockShape shape = BlockShape::rectangular) {
  PerforationSet set;
  set.circles.push_back({center, radius});
  return generate_perforated_mesh(set, H, refinement, shape);
}

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  return m;
}

inline Eigen::VectorXd random_vector(Eigen::Index n, std::uint64_t seed) { return random_matrix(n, 1, seed).col(0); }

inline Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& a, double rel_tol = 1e-10) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) > rel_tol * s(0)) ++rank;
  return svd.matrixU().leftCols(rank);
}

/// Sine of the largest principal angle between span(a) and span(b). Equal
/// spans give 0; spans of different dimension give 1.
inline double largest_principal_angle_sine(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const Eigen::MatrixXd qa = orthonormal_basis(a);
  const Eigen::MatrixXd qb = orthonormal_basis(b);
  if (qa.cols() != qb.cols()) return 1.0;
  const Eigen::MatrixXd residual = qb - qa * (qa.transpose() * qb);
  if (residual.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(residual);
  return svd.singularValues()(0);
}

/// ‖b − P_a b‖ / ‖b‖ column-wise maximum: how far span(b) sticks out of span(a).
inline double containment_defect(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const Eigen::MatrixXd qa = orthonormal_basis(a);
  double worst = 0.0;
  for (Eigen::Index j = 0; j < b.cols(); ++j) {
    const Eigen::VectorXd r = b.col(j) - qa * (qa.transpose() * b.col(j));
    worst = std::max(worst, r.norm() / std::max(1e-300, b.col(j).norm()));
  }
  return worst;
}

}  // namespace msstokes::testing
