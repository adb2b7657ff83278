// Copyright 2026 The msstokes Authors.
// SPDX-License-Identifier: Apache-2.0

#include "msstokes/snapshots.hpp"

#include <Eigen/SparseCholesky>
#include <random>

#include "msstokes/errors.hpp"
#include "msstokes/linalg.hpp"
#include "msstokes/local_stokes.hpp"
#include "msstokes/parallel.hpp"

namespace msstokes {

namespace {

// Identity columns for every boundary DOF of the solver not on a perforation.
Eigen::MatrixXd delta_data(const LocalStokesSolver& solver, const std::vector<bool>& pinned) {
  const auto& dom = solver.subdomain();
  const auto bnodes = solver.boundary_nodes();
  std::vector<Eigen::Index> rows;
  for (std::size_t k = 0; k < bnodes.size(); ++k)
    if (!pinned[dom.nodes()[bnodes[k]]])
      for (int c = 0; c < 2; ++c) rows.push_back(static_cast<Eigen::Index>(2 * k + c));
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(solver.num_boundary_dofs()),
                                            static_cast<Eigen::Index>(rows.size()));
  for (std::size_t j = 0; j < rows.size(); ++j) g(rows[j], static_cast<Eigen::Index>(j)) = 1.0;
  return g;
}

std::vector<int> oversampled_support(const FineMesh& mesh, const CoarsePartition& partition, int block,
                                     int layers) {
  if (layers < 0) throw std::invalid_argument("layers must be nonnegative");
  if (partition.layers == layers && partition.oversampled.size() == partition.num_blocks())
    return partition.oversampled[block];
  std::vector<int> tris = partition.blocks[block].triangles;
  std::sort(tris.begin(), tris.end());
  for (int l = 0; l < layers; ++l) tris = expand_by_vertex_ring(mesh, tris);
  return tris;
}

SparseMatrix h1_matrix(const Subdomain& d) {
  SparseMatrix m = d.stiffness() + d.mass();
  m.makeCompressed();
  return m;
}

}  // namespace

std::string to_string(SnapshotMode mode) {
  switch (mode) {
    case SnapshotMode::standard: return "standard";
    case SnapshotMode::oversampled_restricted: return "oversampled_restricted";
    case SnapshotMode::oversampled_unrestricted: return "oversampled_unrestricted";
    case SnapshotMode::randomized: return "randomized";
  }
  return "unknown";
}

std::optional<SnapshotMode> parse_snapshot_mode(const std::string& name) {
  for (auto m : {SnapshotMode::standard, SnapshotMode::oversampled_restricted, SnapshotMode::oversampled_unrestricted,
                 SnapshotMode::randomized})
    if (to_string(m) == name) return m;
  return std::nullopt;
}

PodResult pod_h1(const Subdomain& domain, const Eigen::MatrixXd& columns, double tol) {
  PodResult out;
  if (columns.cols() == 0) {
    out.modes = columns;
    out.transform.resize(0, 0);
    return out;
  }
  Eigen::SimplicialLLT<SparseMatrix> llt(h1_matrix(domain));
  if (llt.info() != Eigen::Success) throw NotPositiveDefinite("H1 Gram matrix of the subdomain is not definite");
  // ‖x‖² = ‖Lᵀ P x‖²
  const Eigen::MatrixXd px = llt.permutationP() * columns;
  const Eigen::MatrixXd r = llt.matrixU() * px;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(r, Eigen::ComputeThinV);
  out.singular_values = svd.singularValues();
  const double smax = out.singular_values.size() ? out.singular_values(0) : 0.0;
  Eigen::Index keep = 0;
  while (keep < out.singular_values.size() && out.singular_values(keep) > tol * smax && smax > 0.0) ++keep;
  out.transform = svd.matrixV().leftCols(keep) * out.singular_values.head(keep).cwiseInverse().asDiagonal();
  out.modes = columns * out.transform;
  return out;
}

Eigen::MatrixXd restrict_columns(const Subdomain& from, const Subdomain& to, const Eigen::MatrixXd& columns) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(to.num_dofs()), columns.cols());
  for (std::size_t i = 0; i < to.num_nodes(); ++i) {
    const int l = from.local(to.nodes()[i]);
    if (l < 0) throw DimensionMismatch("restriction target is not contained in the source subdomain");
    out.row(2 * static_cast<Eigen::Index>(i)) = columns.row(2 * l);
    out.row(2 * static_cast<Eigen::Index>(i) + 1) = columns.row(2 * l + 1);
  }
  return out;
}

SnapshotSpace build_standard_snapshots(const FineMesh& mesh, const CoarsePartition& partition, int block) {
  SnapshotSpace s;
  s.block = block;
  s.mode = SnapshotMode::standard;
  s.support = partition.blocks[block].triangles;
  std::sort(s.support.begin(), s.support.end());
  LocalStokesSolver solver(mesh, s.support);
  const Eigen::MatrixXd g = delta_data(solver, mesh.perforation_nodes());
  auto res = solver.solve(g);
  s.columns = std::move(res.velocity);
  s.divergence = std::move(res.divergence);
  s.solves = static_cast<int>(g.cols());
  return s;
}

SnapshotSpace build_oversampled_snapshots(const FineMesh& mesh, const CoarsePartition& partition, int block,
                                          int layers, bool restrict_to_block, double pod_tol) {
  SnapshotSpace s;
  s.block = block;
  s.mode = restrict_to_block ? SnapshotMode::oversampled_restricted : SnapshotMode::oversampled_unrestricted;
  s.layers = layers;
  s.pod_tol = pod_tol;

  LocalStokesSolver solver(mesh, oversampled_support(mesh, partition, block, layers));
  const Subdomain& plus = solver.subdomain();
  const Eigen::MatrixXd g = delta_data(solver, mesh.perforation_nodes());
  auto res = solver.solve(g);
  s.solves = static_cast<int>(g.cols());

  PodResult pod = pod_h1(plus, res.velocity, pod_tol);
  Eigen::VectorXd div = pod.transform.transpose() * res.divergence;
  if (pod.modes.cols() == 0) throw EmptyAfterPOD("block " + std::to_string(block) + ": no snapshot survived POD");

  if (!restrict_to_block) {
    s.support.assign(plus.triangles().begin(), plus.triangles().end());
    s.columns = std::move(pod.modes);
    s.divergence = std::move(div);
    return s;
  }

  s.support = partition.blocks[block].triangles;
  std::sort(s.support.begin(), s.support.end());
  Subdomain k(mesh, s.support);
  const Eigen::MatrixXd restricted = restrict_columns(plus, k, pod.modes);
  PodResult second = pod_h1(k, restricted, pod_tol);
  div = second.transform.transpose() * div;
  if (second.modes.cols() == 0) throw EmptyAfterPOD("block " + std::to_string(block) + ": restriction is empty");

  // Remove directions with vanishing trace on ∂K: keep the eigenvectors of
  // S x = μ (A + S) x with μ bounded away from zero. They span the
  // A-orthogonal complement of the trace-null subspace.
  const Eigen::MatrixXd& psi = second.modes;
  const Eigen::MatrixXd a = psi.transpose() * (k.stiffness() * psi);
  const Eigen::MatrixXd sm = psi.transpose() * (k.boundary_mass() * psi);
  const Eigen::MatrixXd as = 0.5 * ((a + sm) + (a + sm).transpose());
  const auto eig = dense_generalized_eigensolve(0.5 * (sm + sm.transpose()), as);
  const double mu_max = eig.values.maxCoeff();
  Eigen::Index first = 0;
  while (first < eig.values.size() && eig.values(first) <= pod_tol * mu_max) ++first;
  const Eigen::MatrixXd w = eig.vectors.rightCols(eig.values.size() - first);
  s.columns = psi * w;
  s.divergence = w.transpose() * div;
  if (s.columns.cols() == 0) throw EmptyAfterPOD("block " + std::to_string(block) + ": no snapshot trace survived");
  return s;
}

SnapshotSpace build_randomized_snapshots(const FineMesh& mesh, const CoarsePartition& partition, int block,
                                         int layers, int count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("randomized snapshot count must be at least 1");
  SnapshotSpace s;
  s.block = block;
  s.mode = SnapshotMode::randomized;
  s.layers = layers;
  s.seed = seed;
  LocalStokesSolver solver(mesh, oversampled_support(mesh, partition, block, layers));
  const auto& dom = solver.subdomain();
  const auto bnodes = solver.boundary_nodes();
  const auto pinned = mesh.perforation_nodes();

  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(block)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(solver.num_boundary_dofs()), count);
  for (int j = 0; j < count; ++j)
    for (std::size_t k = 0; k < bnodes.size(); ++k) {
      if (pinned[dom.nodes()[bnodes[k]]]) continue;
      for (int c = 0; c < 2; ++c) g(static_cast<Eigen::Index>(2 * k + c), j) = normal(rng);
    }
  auto res = solver.solve(g);
  s.support.assign(dom.triangles().begin(), dom.triangles().end());
  s.columns = std::move(res.velocity);
  s.divergence = std::move(res.divergence);
  s.solves = count;
  return s;
}

std::vector<SnapshotSpace> build_snapshots(const FineMesh& mesh, const CoarsePartition& partition,
                                           const SnapshotOptions& options, unsigned workers) {
  std::vector<SnapshotSpace> out(partition.num_blocks());
  parallel_for(out.size(), workers, [&](std::size_t b) {
    const int block = static_cast<int>(b);
    switch (options.mode) {
      case SnapshotMode::standard: out[b] = build_standard_snapshots(mesh, partition, block); break;
      case SnapshotMode::oversampled_restricted:
        out[b] = build_oversampled_snapshots(mesh, partition, block, options.layers, true, options.pod_tol);
        break;
      case SnapshotMode::oversampled_unrestricted:
        out[b] = build_oversampled_snapshots(mesh, partition, block, options.layers, false, options.pod_tol);
        break;
      case SnapshotMode::randomized:
        out[b] = build_randomized_snapshots(mesh, partition, block, options.layers, options.random_count,
                                            options.seed);
        break;
    }
  });
  return out;
}

}  // namespace msstokes
