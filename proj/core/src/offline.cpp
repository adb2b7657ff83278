// Copyright 2026 The msstokes Authors.
// SPDX-License-Identifier: Apache-2.0

#include "msstokes/offline.hpp"

#include "msstokes/errors.hpp"
#include "msstokes/linalg.hpp"
#include "msstokes/parallel.hpp"

namespace msstokes {

namespace {

struct Pencil {
  Eigen::VectorXd values;
  Eigen::MatrixXd coefficients;
};

Pencil block_pencil(const Subdomain& d, const Eigen::MatrixXd& psi, double H, int L) {
  if (L < 1 || L > psi.cols())
    throw DimensionMismatch("requested " + std::to_string(L) + " basis functions from " +
                            std::to_string(psi.cols()) + " snapshots");
  Eigen::MatrixXd a = psi.transpose() * (d.stiffness() * psi);
  Eigen::MatrixXd s = (1.0 / H) * (psi.transpose() * (d.boundary_mass() * psi));
  a = 0.5 * (a + a.transpose()).eval();
  s = 0.5 * (s + s.transpose()).eval();
  auto eig = dense_generalized_eigensolve(a, s);
  return {eig.values.head(L), eig.vectors.leftCols(L)};
}

std::vector<int> block_triangles(const CoarsePartition& partition, int block) {
  std::vector<int> t = partition.blocks[block].triangles;
  std::sort(t.begin(), t.end());
  return t;
}

}  // namespace

BlockBasis reduce_block(const FineMesh& mesh, const CoarsePartition& partition, const SnapshotSpace& snapshots,
                        int L) {
  Subdomain k(mesh, block_triangles(partition, snapshots.block));
  if (static_cast<Eigen::Index>(k.num_dofs()) != snapshots.columns.rows())
    throw DimensionMismatch("snapshot rows do not match the block");
  Pencil p = block_pencil(k, snapshots.columns, partition.H, L);
  BlockBasis out;
  out.block = snapshots.block;
  out.mode = snapshots.mode;
  out.eigenvalues = std::move(p.values);
  out.columns = snapshots.columns * p.coefficients;
  out.requested = L;
  return out;
}

BlockBasis reduce_block_oversampled(const FineMesh& mesh, const CoarsePartition& partition,
                                    const SnapshotSpace& snapshots, int L) {
  Subdomain plus(mesh, snapshots.support);
  if (static_cast<Eigen::Index>(plus.num_dofs()) != snapshots.columns.rows())
    throw DimensionMismatch("snapshot rows do not match the oversampled support");
  Pencil p = block_pencil(plus, snapshots.columns, partition.H, L);
  Subdomain k(mesh, block_triangles(partition, snapshots.block));
  const Eigen::MatrixXd restricted = restrict_columns(plus, k, snapshots.columns * p.coefficients);

  // Prefix-greedy independence in the H¹(K) inner product.
  const SparseMatrix g = k.stiffness() + k.mass();
  std::vector<Eigen::Index> keep;
  Eigen::MatrixXd ortho(restricted.rows(), 0);
  for (Eigen::Index j = 0; j < restricted.cols(); ++j) {
    Eigen::VectorXd v = restricted.col(j);
    const double n0 = std::sqrt(v.dot(g * v));
    for (Eigen::Index i = 0; i < ortho.cols(); ++i) v -= ortho.col(i).dot(g * v) * ortho.col(i);
    for (Eigen::Index i = 0; i < ortho.cols(); ++i) v -= ortho.col(i).dot(g * v) * ortho.col(i);
    const double n1 = std::sqrt(std::max(0.0, v.dot(g * v)));
    if (!(n0 > 0.0) || n1 <= 1e-6 * n0) continue;
    ortho.conservativeResize(Eigen::NoChange, ortho.cols() + 1);
    ortho.col(ortho.cols() - 1) = v / n1;
    keep.push_back(j);
  }

  BlockBasis out;
  out.block = snapshots.block;
  out.mode = snapshots.mode;
  out.requested = L;
  out.dropped = static_cast<int>(restricted.cols()) - static_cast<int>(keep.size());
  out.columns.resize(restricted.rows(), static_cast<Eigen::Index>(keep.size()));
  out.eigenvalues.resize(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) {
    out.columns.col(static_cast<Eigen::Index>(i)) = restricted.col(keep[i]);
    out.eigenvalues(static_cast<Eigen::Index>(i)) = p.values(keep[i]);
  }
  return out;
}

std::vector<BlockBasis> reduce_all(const FineMesh& mesh, const CoarsePartition& partition,
                                   const std::vector<SnapshotSpace>& snapshots, const std::vector<int>& L,
                                   unsigned workers) {
  if (snapshots.size() != partition.num_blocks() || L.size() != partition.num_blocks())
    throw DimensionMismatch("one snapshot space and one basis count per block expected");
  std::vector<BlockBasis> out(snapshots.size());
  parallel_for(out.size(), workers, [&](std::size_t b) {
    out[b] = snapshots[b].oversampled_support() ? reduce_block_oversampled(mesh, partition, snapshots[b], L[b])
                                                : reduce_block(mesh, partition, snapshots[b], L[b]);
  });
  return out;
}

Eigen::MatrixXd edge_mean_matrix(const FineMesh& mesh, const CoarsePartition& partition, int block,
                                 const Eigen::MatrixXd& columns) {
  Subdomain k(mesh, block_triangles(partition, block));
  const auto& edges = partition.blocks[block].edges;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(columns.cols(), static_cast<Eigen::Index>(edges.size()));
  for (std::size_t l = 0; l < edges.size(); ++l)
    for (int fe : partition.edges[edges[l]].fine_edges) {
      const Point n = partition.outward_normal(mesh, fe, block);
      const int a = k.local(mesh.edges[fe].nodes[0]);
      const int b = k.local(mesh.edges[fe].nodes[1]);
      const double half = 0.5 * mesh.edge_length(fe);
      for (Eigen::Index j = 0; j < columns.cols(); ++j)
        m(j, static_cast<Eigen::Index>(l)) +=
            half * ((columns(2 * a, j) + columns(2 * b, j)) * n.x + (columns(2 * a + 1, j) + columns(2 * b + 1, j)) * n.y);
    }
  return m;
}

BlockSpace assemble_global_offline(const DgSpace& dg, const std::vector<BlockBasis>& bases, EdgeMeanCheck* check) {
  std::vector<Eigen::MatrixXd> blocks;
  blocks.reserve(bases.size());
  for (const auto& b : bases) blocks.push_back(b.columns);
  if (check) {
    *check = {};
    const auto& part = dg.partition();
    for (const auto& b : bases) {
      const Eigen::MatrixXd m = edge_mean_matrix(dg.mesh(), part, b.block, b.columns);
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
      const auto& sv = svd.singularValues();
      const double smin = sv.size() ? sv(sv.size() - 1) : 0.0;
      const double smax = sv.size() ? sv(0) : 0.0;
      check->sigma_min.push_back(smin);
      check->relative_sigma_min.push_back(smax > 0.0 ? smin / smax : 0.0);
      if (m.rows() < m.cols() || !(smin > 1e-10 * smax)) check->failing.push_back(b.block);
    }
  }
  return BlockSpace::from_blocks(dg, std::move(blocks));
}

long table_dof_count(const CoarsePartition& partition, const std::vector<BlockBasis>& bases) {
  long n = 0;
  for (const auto& b : bases) n += b.columns.cols();
  return n + static_cast<long>(partition.num_blocks()) + static_cast<long>(partition.num_interior_edges());
}

}  // namespace msstokes
