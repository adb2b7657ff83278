// Copyright 2026 The msstokes Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <Eigen/LU>
#include <vector>

#include "msstokes/errors.hpp"
#include "msstokes/linalg.hpp"
#include "test_support.hpp"

namespace msstokes {
namespace {

SparseMatrix sparse(const Eigen::MatrixXd& d) { return d.sparseView(); }

Eigen::VectorXd dense_kkt_solve(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const Eigen::VectorXd& rhs) {
  const Eigen::Index n = a.rows(), m = b.rows();
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n + m, n + m);
  k.topLeftCorner(n, n) = a;
  k.topRightCorner(n, m) = b.transpose();
  k.bottomLeftCorner(m, n) = b;
  return k.fullPivLu().solve(rhs);
}

TEST(SaddleSolve, SmallKkt) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(2, 2);
  Eigen::MatrixXd b(1, 2);
  b << 1, 1;
  Eigen::VectorXd rhs(3);
  rhs << 1, 2, 4;
  const Eigen::VectorXd x = sparse_saddle_solve(sparse(a), sparse(b), rhs);
  const Eigen::VectorXd ref = dense_kkt_solve(a, b, rhs);
  EXPECT_LT((x - ref).norm(), 1e-14);
  // x + λ(1,1) = (1,2), x1 + x2 = 4 → λ = -1/2, x = (3/2, 5/2).
  EXPECT_NEAR(x(0), 1.5, 1e-14);
  EXPECT_NEAR(x(1), 2.5, 1e-14);
  EXPECT_NEAR(x(2), -0.5, 1e-14);
}

TEST(SaddleSolve, ZeroRhs) {
  const Eigen::MatrixXd r = testing::random_matrix(6, 6, 1);
  const Eigen::MatrixXd a = r * r.transpose() + Eigen::MatrixXd::Identity(6, 6);
  const Eigen::MatrixXd b = testing::random_matrix(2, 6, 2);
  const Eigen::VectorXd x = sparse_saddle_solve(sparse(a), sparse(b), Eigen::VectorXd::Zero(8));
  EXPECT_EQ(x.norm(), 0.0);
}

TEST(SaddleSolve, RandomWellPosedMatchesDense) {
  const Eigen::MatrixXd r = testing::random_matrix(40, 40, 11);
  const Eigen::MatrixXd a = r * r.transpose() + 40 * Eigen::MatrixXd::Identity(40, 40);
  const Eigen::MatrixXd b = testing::random_matrix(10, 40, 12);
  const Eigen::VectorXd rhs = testing::random_vector(50, 13);
  const Eigen::VectorXd x = sparse_saddle_solve(sparse(a), sparse(b), rhs);
  const Eigen::VectorXd ref = dense_kkt_solve(a, b, rhs);
  EXPECT_LT((x - ref).norm(), 1e-10 * ref.norm());
}

TEST(SaddleSolve, RankDeficientConstraints) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(3, 3);
  Eigen::MatrixXd b(2, 3);
  b << 1, 1, 0, 2, 2, 0;
  Eigen::VectorXd rhs(5);
  rhs << 1, 0, 0, 1, 3;  // inconsistent constraints
  EXPECT_THROW(sparse_saddle_solve(sparse(a), sparse(b), rhs), SingularSystem);
}

TEST(SaddlePointSolver, GaugeFixesConstantMode) {
  // B has the constant pressure vector in its left kernel; the gauge removes it.
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(3, 3);
  Eigen::MatrixXd b(2, 3);
  b << 1, -1, 0, -1, 1, 0;
  Eigen::VectorXd g(2);
  g << 1, 1;
  SaddlePointSolver solver(sparse(a), sparse(b), nullptr, &g);
  Eigen::MatrixXd fu(3, 1), fp(2, 1);
  fu << 1, 0, 2;
  fp << 0.5, -0.5;
  const auto sol = solver.solve(fu, fp);
  EXPECT_LT(sol.residual, 1e-12);
  EXPECT_NEAR(sol.p.col(0).sum(), 0.0, 1e-14);
  EXPECT_NEAR(sol.u(0, 0) - sol.u(1, 0), 0.5, 1e-14);
  EXPECT_NEAR(sol.u(2, 0), 2.0, 1e-14);
}

// Roots of det(A − λS) located by sign changes on a grid and refined by bisection.
std::vector<double> characteristic_roots(const Eigen::MatrixXd& a, const Eigen::MatrixXd& s, double lo, double hi,
                                         int samples) {
  auto det = [&](double l) { return Eigen::PartialPivLU<Eigen::MatrixXd>(a - l * s).determinant(); };
  std::vector<double> roots;
  double x0 = lo, f0 = det(lo);
  for (int i = 1; i <= samples; ++i) {
    const double x1 = lo + (hi - lo) * i / samples;
    const double f1 = det(x1);
    if ((f0 < 0) != (f1 < 0)) {
      double l = x0, r = x1, fl = f0;
      for (int it = 0; it < 200 && r - l > 1e-15 * std::max(1.0, std::abs(r)); ++it) {
        const double m = 0.5 * (l + r);
        const double fm = det(m);
        if ((fm < 0) == (fl < 0)) {
          l = m;
          fl = fm;
        } else {
          r = m;
        }
      }
      roots.push_back(0.5 * (l + r));
    }
    x0 = x1;
    f0 = f1;
  }
  return roots;
}

TEST(GeneralizedEigen, DiagonalAndIdentityPencils) {
  Eigen::MatrixXd a = Eigen::Vector2d(2, 1).asDiagonal();
  const auto e = dense_generalized_eigensolve(a, Eigen::MatrixXd::Identity(2, 2));
  EXPECT_NEAR(e.values(0), 1.0, 1e-14);
  EXPECT_NEAR(e.values(1), 2.0, 1e-14);
  const Eigen::MatrixXd r = testing::random_matrix(5, 5, 4);
  const Eigen::MatrixXd s = r * r.transpose() + Eigen::MatrixXd::Identity(5, 5);
  const auto same = dense_generalized_eigensolve(s, s);
  for (Eigen::Index i = 0; i < 5; ++i) EXPECT_NEAR(same.values(i), 1.0, 1e-12);
}

TEST(GeneralizedEigen, RandomPencilMatchesCharacteristicRoots) {
  const Eigen::MatrixXd ra = testing::random_matrix(8, 8, 21);
  const Eigen::MatrixXd rs = testing::random_matrix(8, 8, 22);
  const Eigen::MatrixXd a = 0.5 * (ra + ra.transpose());
  const Eigen::MatrixXd s = rs * rs.transpose() + 0.5 * Eigen::MatrixXd::Identity(8, 8);
  const auto e = dense_generalized_eigensolve(a, s);
  const double bound = 1.05 * std::max(std::abs(e.values(0)), std::abs(e.values(7))) + 1.0;
  const auto roots = characteristic_roots(a, s, -bound, bound, 400000);
  ASSERT_EQ(roots.size(), 8u);
  for (int i = 0; i < 8; ++i) EXPECT_NEAR(e.values(i), roots[i], 1e-8 * std::max(1.0, std::abs(roots[i])));

  for (int i = 0; i < 7; ++i) EXPECT_LE(e.values(i), e.values(i + 1));
  const Eigen::MatrixXd gram = e.vectors.transpose() * s * e.vectors;
  EXPECT_LT((gram - Eigen::MatrixXd::Identity(8, 8)).cwiseAbs().maxCoeff(), 1e-9);
  for (int k = 0; k < 8; ++k) {
    const Eigen::VectorXd res = a * e.vectors.col(k) - e.values(k) * s * e.vectors.col(k);
    EXPECT_LE(res.norm(), 1e-9 * (a.norm() + std::abs(e.values(k)) * s.norm()));
  }
}

TEST(GeneralizedEigen, SingularMassIsRejected) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(3, 3);
  s(0, 0) = s(1, 1) = 1.0;
  EXPECT_THROW(dense_generalized_eigensolve(Eigen::MatrixXd::Identity(3, 3), s), NotPositiveDefinite);
}

}  // namespace
}  // namespace msstokes
