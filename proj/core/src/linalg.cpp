// Copyright 2026 The msstokes Authors.
// SPDX-License-Identifier: Apache-2.0

#include "msstokes/linalg.hpp"

#include <cmath>
#include <sstream>

#include "msstokes/errors.hpp"

namespace msstokes {

namespace {

constexpr double kResidualTol = 1e-10;
constexpr int kRefinementSteps = 3;

}  // namespace

SaddlePointSolver::SaddlePointSolver(const SparseMatrix& A, const SparseMatrix& B, const SparseMatrix* C,
                                     const Eigen::VectorXd* gauge)
    : nu_(A.rows()), np_(B.rows()), gauged_(gauge != nullptr) {
  if (A.rows() != A.cols() || B.cols() != A.rows())
    throw DimensionMismatch("saddle-point blocks have inconsistent sizes");
  if (C && (C->rows() != np_ || C->cols() != np_)) throw DimensionMismatch("stabilization block size mismatch");
  if (gauge && gauge->size() != np_) throw DimensionMismatch("gauge vector size mismatch");

  const Eigen::Index n = nu_ + np_ + (gauged_ ? 1 : 0);
  Triplets trip;
  trip.reserve(A.nonZeros() + 2 * B.nonZeros() + (C ? C->nonZeros() : 0) + (gauged_ ? 2 * np_ : 0));
  for (int k = 0; k < A.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(A, k); it; ++it) trip.emplace_back(it.row(), it.col(), it.value());
  for (int k = 0; k < B.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(B, k); it; ++it) {
      trip.emplace_back(nu_ + it.row(), it.col(), it.value());
      trip.emplace_back(it.col(), nu_ + it.row(), it.value());
    }
  if (C)
    for (int k = 0; k < C->outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(*C, k); it; ++it)
        trip.emplace_back(nu_ + it.row(), nu_ + it.col(), -it.value());
  if (gauged_)
    for (Eigen::Index i = 0; i < np_; ++i)
      if ((*gauge)(i) != 0.0) {
        trip.emplace_back(nu_ + i, nu_ + np_, (*gauge)(i));
        trip.emplace_back(nu_ + np_, nu_ + i, (*gauge)(i));
      }
  kkt_.resize(n, n);
  kkt_.setFromTriplets(trip.begin(), trip.end());
  kkt_.makeCompressed();

  lu_ = std::make_unique<Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>>();
  lu_->analyzePattern(kkt_);
  lu_->factorize(kkt_);
  if (lu_->info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "saddle-point factorization failed (" << n << " unknowns: " << nu_ << " velocity, " << np_
        << " constraint" << (gauged_ ? ", 1 gauge" : ", no gauge") << "): " << lu_->lastErrorMessage();
    throw SingularSystem(msg.str());
  }
}

SaddlePointSolver::Solution SaddlePointSolver::solve(const Eigen::MatrixXd& rhs_u,
                                                     const Eigen::MatrixXd& rhs_p) const {
  if (rhs_u.rows() != nu_ || rhs_p.rows() != np_ || rhs_u.cols() != rhs_p.cols())
    throw DimensionMismatch("saddle-point right-hand side has the wrong shape");
  const Eigen::Index n = kkt_.rows();
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, rhs_u.cols());
  b.topRows(nu_) = rhs_u;
  b.middleRows(nu_, np_) = rhs_p;

  Eigen::MatrixXd x = lu_->solve(b);
  Eigen::MatrixXd r = b - kkt_ * x;
  for (int step = 0; step < kRefinementSteps; ++step) {
    x += lu_->solve(r);
    r = b - kkt_ * x;
  }
  Solution sol;
  for (Eigen::Index j = 0; j < b.cols(); ++j) {
    double bn = b.col(j).norm();
    double rn = r.col(j).norm();
    if (!std::isfinite(rn)) throw SingularSystem("saddle-point solve produced non-finite values");
    double rel = bn > 0.0 ? rn / bn : rn;
    sol.residual = std::max(sol.residual, rel);
  }
  if (sol.residual > kResidualTol) {
    std::ostringstream msg;
    msg << "saddle-point residual " << sol.residual << " exceeds " << kResidualTol
        << " (numerically singular system; rank-deficient constraints or missing gauge)";
    throw SingularSystem(msg.str());
  }
  sol.u = x.topRows(nu_);
  sol.p = x.middleRows(nu_, np_);
  if (gauged_) sol.gauge_multiplier = x.row(nu_ + np_);
  return sol;
}

Eigen::VectorXd sparse_saddle_solve(const SparseMatrix& A, const SparseMatrix& B, const Eigen::VectorXd& rhs) {
  if (rhs.size() != A.rows() + B.rows()) throw DimensionMismatch("rhs size must equal rows(A) + rows(B)");
  SaddlePointSolver solver(A, B);
  auto sol = solver.solve(rhs.head(A.rows()), rhs.tail(B.rows()));
  Eigen::VectorXd x(rhs.size());
  x << sol.u.col(0), sol.p.col(0);
  return x;
}

GeneralizedEigenpairs dense_generalized_eigensolve(const Eigen::MatrixXd& A, const Eigen::MatrixXd& S) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n || S.rows() != n || S.cols() != n) throw DimensionMismatch("pencil matrices must be square and equal-sized");
  if (n == 0) return {};
  Eigen::LDLT<Eigen::MatrixXd> ldlt(S);
  const double floor = 1e-12 * S.trace() / static_cast<double>(n);
  if (ldlt.info() != Eigen::Success || !(S.trace() > 0.0) || !ldlt.isPositive() ||
      ldlt.vectorD().minCoeff() <= floor)
    throw NotPositiveDefinite("pencil matrix S is not positive definite (smallest pivot " +
                              std::to_string(ldlt.vectorD().minCoeff()) + ", floor " + std::to_string(floor) + ")");
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, S, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
  if (es.info() != Eigen::Success) throw NotPositiveDefinite("generalized eigensolver failed to converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

}  // namespace msstokes
