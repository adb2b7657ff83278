// Copyright 2026 The msstokes Authors.
// SPDX-License-Identifier: Apache-2.0

#include "msstokes/analysis.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

#include "msstokes/errors.hpp"
#include "msstokes/offline.hpp"

namespace msstokes {

namespace {

double quad(const SparseMatrix& m, const Eigen::VectorXd& x) { return x.dot(m * x); }

double relative(double num, double den) {
  if (den <= 0.0) return num <= 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return 100.0 * std::sqrt(std::max(0.0, num) / den);
}

}  // namespace

ErrorReport compute_errors(const DgSpace& dg, const HybridSolution& approx, const HybridSolution& reference,
                           double gamma) {
  if (approx.u.size() != dg.num_dofs() || reference.u.size() != dg.num_dofs() ||
      approx.p.size() != reference.p.size() || approx.p_hat.size() != reference.p_hat.size())
    throw MeshMismatch("solutions are not defined on the same mesh and partition");
  ErrorReport r;
  r.gamma = gamma;
  const Eigen::VectorXd d = reference.u - approx.u;
  const SparseMatrix a = dg.a_dg(gamma);
  const SparseMatrix h1 = dg.stiffness() + dg.mass();
  r.e_u_l2 = relative(quad(dg.mass(), d), quad(dg.mass(), reference.u));
  r.e_u_h1 = relative(quad(h1, d), quad(h1, reference.u));
  r.e_u_dg = relative(quad(a, d), quad(a, reference.u));
  const Eigen::VectorXd w = dg.gauge().head(reference.p.size());
  const Eigen::VectorXd dp = reference.p - approx.p;
  r.e_p_l2 = relative(dp.dot(w.cwiseProduct(dp)), reference.p.dot(w.cwiseProduct(reference.p)));
  return r;
}

ConservationAudit audit_conservation(const DgSpace& dg, const HybridSolution& solution, const ProblemData& problem) {
  const CoarsePartition& part = dg.partition();
  const FineMesh& mesh = dg.mesh();
  ConservationAudit out;

  // Prescribed ∫_E g_D·n on Dirichlet edges (2-point Gauss per fine edge).
  std::vector<double> prescribed(part.num_edges(), 0.0);
  const auto gauss = edge_quadrature();
  for (std::size_t e = 0; e < part.num_edges(); ++e) {
    if (dg.edge_kind(static_cast<int>(e)) != EdgeKind::dirichlet) continue;
    for (int fe : part.edges[e].fine_edges) {
      const Point a = mesh.nodes[mesh.edges[fe].nodes[0]];
      const Point b = mesh.nodes[mesh.edges[fe].nodes[1]];
      const Point n = part.outward_normal(mesh, fe, part.edges[e].plus);
      const double len = norm(b - a);
      for (const auto& [s, w] : gauss) prescribed[e] += w * len * dot(problem.g_dirichlet(a + s * (b - a)), n);
    }
  }

  for (std::size_t e = 0; e < part.num_edges(); ++e) {
    const CoarseEdge& ce = part.edges[e];
    const double plus = dg.edge_flux(static_cast<int>(e), ce.plus, solution.u);
    if (!ce.boundary()) {
      const double minus = dg.edge_flux(static_cast<int>(e), ce.minus, solution.u);
      out.max_interior_jump = std::max(out.max_interior_jump, std::abs(plus + minus));
    } else if (dg.edge_kind(static_cast<int>(e)) == EdgeKind::dirichlet) {
      out.max_dirichlet_mismatch = std::max(out.max_dirichlet_mismatch, std::abs(plus - prescribed[e]));
    }
  }

  for (std::size_t b = 0; b < part.num_blocks(); ++b) {
    double flux = 0.0, balance = 0.0;
    for (int e : part.blocks[b].edges) {
      const double f = dg.edge_flux(e, static_cast<int>(b), solution.u);
      flux += f;
      balance += dg.edge_kind(e) == EdgeKind::dirichlet ? prescribed[e] : f;
    }
    out.flux.push_back(flux);
    out.balance.push_back(balance);
    out.max_flux = std::max(out.max_flux, std::abs(flux));
    out.max_balance = std::max(out.max_balance, std::abs(balance));
  }
  return out;
}

CoercivityScan coercivity_scan(const BlockSpace& space, double gamma, int samples, std::uint64_t seed) {
  const SparseMatrix& phi = space.prolongation();
  const SparseMatrix a = phi.transpose() * (space.dg().a_dg(gamma) * phi);
  const SparseMatrix n = phi.transpose() * (space.dg().a_norm() * phi);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  CoercivityScan out;
  out.samples = samples;
  out.min_ratio = std::numeric_limits<double>::infinity();
  out.max_ratio = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd v(space.dim());
  for (int s = 0; s < samples; ++s) {
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = normal(rng);
    const double ratio = quad(a, v) / quad(n, v);
    out.min_ratio = std::min(out.min_ratio, ratio);
    out.max_ratio = std::max(out.max_ratio, ratio);
  }
  return out;
}

GalerkinCheck galerkin_orthogonality(const BlockSpace& space, const HybridSolution& approx,
                                     const HybridSolution& reference, double gamma) {
  const DgSpace& dg = space.dg();
  const SparseMatrix& phi = space.prolongation();
  const Eigen::VectorXd d = reference.u - approx.u;
  Eigen::VectorXd dq(reference.p.size() + reference.p_hat.size());
  dq << reference.p - approx.p, reference.p_hat - approx.p_hat;
  const SparseMatrix afine = dg.a_dg(gamma);
  const SparseMatrix nfine = dg.a_norm();
  const Eigen::VectorXd res = phi.transpose() * (afine * d) + phi.transpose() * (dg.divergence().transpose() * dq);
  const double uh = std::sqrt(quad(nfine, reference.u));
  const SparseMatrix nphi = nfine * phi;
  GalerkinCheck out;
  for (Eigen::Index j = 0; j < phi.cols(); ++j) {
    const double vn = std::sqrt(std::max(0.0, phi.col(j).dot(nphi.col(j))));
    const double scale = vn * uh;
    if (scale > 0.0) out.max_relative = std::max(out.max_relative, std::abs(res(j)) / scale);
  }
  return out;
}

StudyResult run_study(const FineMesh& mesh, const CoarsePartition& partition, const ProblemData& problem,
                      const StudyOptions& options) {
  StudyResult out;
  const DgSpace dg(mesh, partition, problem.sides);
  out.reference = solve_reference(dg, problem, options.gamma);
  out.reference_dofs = out.reference.n_u + out.reference.n_p + out.reference.n_ph;
  int lmax = 0;
  for (int l : options.m_off) lmax = std::max(lmax, l);

  for (SnapshotMode mode : options.modes) {
    SnapshotOptions so;
    so.mode = mode;
    so.layers = mode == SnapshotMode::standard ? 0 : options.layers;
    so.pod_tol = options.pod_tol;
    so.seed = options.seed;
    so.random_count = options.random_count > 0 ? options.random_count : lmax + 4;
    const auto snaps = build_snapshots(mesh, partition, so, options.workers);
    for (int l : options.m_off) {
      const auto start = std::chrono::steady_clock::now();
      const auto bases = reduce_all(mesh, partition, snaps, std::vector<int>(partition.num_blocks(), l), options.workers);
      EdgeMeanCheck check;
      const BlockSpace space = assemble_global_offline(dg, bases, &check);
      const HybridSolution sol = solve_multiscale(space, problem, options.gamma);
      ErrorReport r = compute_errors(dg, sol, out.reference, options.gamma);
      r.m_off = l;
      r.dof = table_dof_count(partition, bases);
      r.conservation_max = audit_conservation(dg, sol, problem).max();
      r.layers = so.layers;
      r.mode = to_string(mode);
      r.seed = options.seed;
      r.rank_warning = !check.passed();
      out.rows.push_back(r);
      out.timings.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    }
  }
  return out;
}

void write_study_csv(std::ostream& out, const std::vector<ErrorReport>& rows) {
  out << "m_off,dof,e_u_l2,e_u_dg,e_u_h1,e_p_l2,conservation_max\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%ld,%.1f,%.1f,%.1f,%.1f,%.3e\n", r.m_off, r.dof, r.e_u_l2, r.e_u_dg, r.e_u_h1,
                  r.e_p_l2, r.conservation_max);
    out << buf;
  }
}

}  // namespace msstokes
