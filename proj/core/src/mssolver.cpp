// Copyright 2026 The msstokes Authors.
// SPDX-License-Identifier: Apache-2.0

#include "msstokes/mssolver.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <algorithm>
#include <Eigen/SparseCholesky>
#include <chrono>

#include "msstokes/errors.hpp"
#include "msstokes/linalg.hpp"

namespace msstokes {

namespace {

std::string diagnose(const HybridSystem& sys) {
  std::vector<Eigen::Index> empty;
  Eigen::VectorXd row_norm = Eigen::VectorXd::Zero(sys.B.rows());
  for (int k = 0; k < sys.B.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(sys.B, k); it; ++it) row_norm(it.row()) += it.value() * it.value();
  for (Eigen::Index i = 0; i < row_norm.size(); ++i)
    if (row_norm(i) == 0.0) empty.push_back(i);
  if (sys.gauge.size() != sys.B.rows() || sys.gauge.cwiseAbs().sum() == 0.0) return "pressure gauge missing";
  if (!empty.empty()) {
    std::string msg = "rank-deficient B: " + std::to_string(empty.size()) + " empty constraint row(s), first ";
    msg += empty.front() < sys.n_p ? "block " + std::to_string(empty.front())
                                   : "edge " + std::to_string(empty.front() - sys.n_p);
    return msg;
  }
  return "rank-deficient B or indefinite A";
}

// Dense fallback sizes stay small: it only runs for coarse systems.
constexpr double kMaxDenseEntries = 2e7;

// Keeps a maximal independent set of constraint rows (column-pivoted QR of
// Bᵀ), solves without the gauge, then shifts (p, p̂) along the constant mode,
// which lies in the kernel of Bᵀ, to satisfy it. Returns false when the
// dropped rows are not satisfied by the reduced solution.
bool solve_dropping_dependent_rows(const HybridSystem& sys, HybridSolution& out) {
  const Eigen::Index m = sys.B.rows();
  if (static_cast<double>(sys.n_u) * static_cast<double>(m) > kMaxDenseEntries) return false;
  const Eigen::MatrixXd bt = Eigen::MatrixXd(sys.B.transpose());
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(bt);
  qr.setThreshold(1e-10);
  const Eigen::Index rank = qr.rank();
  if (rank == m) return false;
  std::vector<Eigen::Index> keep(qr.colsPermutation().indices().data(),
                                 qr.colsPermutation().indices().data() + rank);
  std::sort(keep.begin(), keep.end());

  SparseMatrix selector(rank, m);
  for (Eigen::Index i = 0; i < rank; ++i) selector.insert(i, keep[static_cast<std::size_t>(i)]) = 1.0;
  const SparseMatrix b_r = selector * sys.B;
  SaddlePointSolver solver(sys.A, b_r);
  auto sol = solver.solve(sys.rhs_u, selector * sys.rhs_p);

  const Eigen::VectorXd u = sol.u.col(0);
  const double scale = std::max(1.0, sys.rhs_p.norm());
  if ((sys.B * u - sys.rhs_p).norm() > 1e-9 * scale) return false;

  Eigen::VectorXd lambda = selector.transpose() * sol.p.col(0);
  const double g1 = sys.gauge.sum();
  if (g1 == 0.0) return false;
  lambda.array() -= sys.gauge.dot(lambda) / g1;
  out.coefficients = u;
  out.p = lambda.head(sys.n_p);
  out.p_hat = lambda.tail(sys.n_ph);
  out.gauge_multiplier = 0.0;
  out.residual = sol.residual;
  out.dropped_constraints = m - rank;
  return true;
}

}  // namespace

HybridSolution solve_hybrid(const BlockSpace& space, const HybridSystem& sys) {
  const auto start = std::chrono::steady_clock::now();
  HybridSolution out;
  out.n_u = sys.n_u;
  out.n_p = sys.n_p;
  out.n_ph = sys.n_ph;
  try {
    SaddlePointSolver solver(sys.A, sys.B, nullptr, &sys.gauge);
    auto sol = solver.solve(sys.rhs_u, sys.rhs_p);
    out.coefficients = sol.u.col(0);
    out.p = sol.p.col(0).head(sys.n_p);
    out.p_hat = sol.p.col(0).tail(sys.n_ph);
    out.gauge_multiplier = sol.gauge_multiplier(0);
    out.residual = sol.residual;
  } catch (const SingularSystem& e) {
    if (!solve_dropping_dependent_rows(sys, out))
      throw SingularSystem(std::string(e.what()) + "; diagnosis: " + diagnose(sys));
  }
  out.u = downscale(space, out.coefficients);
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

HybridSolution solve_multiscale(const BlockSpace& space, const ProblemData& problem, double gamma) {
  return solve_hybrid(space, assemble_hybrid_system(space, problem, gamma));
}

HybridSolution solve_reference(const DgSpace& dg, const ProblemData& problem, double gamma) {
  const BlockSpace space = BlockSpace::reference(dg);
  return solve_multiscale(space, problem, gamma);
}

Eigen::VectorXd downscale(const BlockSpace& space, const Eigen::VectorXd& coefficients) {
  if (coefficients.size() != space.dim())
    throw DimensionMismatch("coefficient vector has length " + std::to_string(coefficients.size()) +
                            ", space dimension is " + std::to_string(space.dim()));
  return space.prolongation() * coefficients;
}

InfSupResult inf_sup_constant(const BlockSpace& space) {
  const DgSpace& dg = space.dg();
  const SparseMatrix& phi = space.prolongation();
  SparseMatrix n = phi.transpose() * (dg.a_norm() * phi);
  SparseMatrix b = assemble_b_dg(space);
  Eigen::SimplicialLDLT<SparseMatrix> ldlt(n);
  if (ldlt.info() != Eigen::Success) throw NotPositiveDefinite("A-norm matrix of the velocity space is singular");
  const Eigen::MatrixXd bt = Eigen::MatrixXd(b.transpose());
  const Eigen::MatrixXd x = ldlt.solve(bt);
  Eigen::MatrixXd s = b * x;
  s = 0.5 * (s + s.transpose()).eval();

  const Eigen::VectorXd w = dg.pressure_norm_weights();
  // Rank-one shift moves the (1, 1) mode to the top of the spectrum.
  const Eigen::VectorXd mz = w;  // M_Q · 1
  const double zmz = w.sum();
  const double shift = 2.0 * s.diagonal().cwiseQuotient(w).maxCoeff() + 1.0;
  s += (shift / zmz) * mz * mz.transpose();

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(s, Eigen::MatrixXd(w.asDiagonal()),
                                                               Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  return {std::sqrt(std::max(0.0, lmin)), shift};
}

}  // namespace msstokes
