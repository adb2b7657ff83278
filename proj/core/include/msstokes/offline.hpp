// Copyright 2026 The msstokes Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "msstokes/dgform.hpp"
#include "msstokes/snapshots.hpp"

namespace msstokes {

/// Reduced velocity basis of one block. Columns are in the local DOF order of
/// `Subdomain(mesh, partition.blocks[block].triangles)`.
struct BlockBasis {
  int block = -1;
  SnapshotMode mode = SnapshotMode::standard;
  /// The L smallest eigenvalues of the block pencil, ascending.
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd columns;
  int requested = 0;
  /// Columns removed after restriction because they became dependent.
  int dropped = 0;
};

/// A Φ = λ S Φ on the snapshot span with A = ∫_K ∇u:∇v and
/// S = (1/H) ∫_∂K u·v; keeps the eigenvectors of the L smallest eigenvalues.
/// Throws DimensionMismatch when L exceeds the snapshot dimension.
BlockBasis reduce_block(const FineMesh& mesh, const CoarsePartition& partition, const SnapshotSpace& snapshots,
                        int L);

/// Same pencil on the oversampled support K⁺, followed by restriction to K
/// and prefix-greedy removal of dependent columns.
BlockBasis reduce_block_oversampled(const FineMesh& mesh, const CoarsePartition& partition,
                                    const SnapshotSpace& snapshots, int L);

/// Dispatches on the snapshot mode (unrestricted and randomized spaces use
/// the oversampled reduction). `L[b]` is the count for block b.
std::vector<BlockBasis> reduce_all(const FineMesh& mesh, const CoarsePartition& partition,
                                   const std::vector<SnapshotSpace>& snapshots, const std::vector<int>& L,
                                   unsigned workers = 1);

struct EdgeMeanCheck {
  /// Smallest singular value of M_jl = ∫_{E_l} φ_j·n, per block.
  std::vector<double> sigma_min;
  /// Same, divided by the largest singular value.
  std::vector<double> relative_sigma_min;
  /// Blocks whose edge-mean matrix does not reach rank #edges.
  std::vector<int> failing;

  bool passed() const { return failing.empty(); }
};

/// Edge-mean matrix of one block basis (rows: columns φ_j, columns: the
/// block's coarse edges, outward normal).
Eigen::MatrixXd edge_mean_matrix(const FineMesh& mesh, const CoarsePartition& partition, int block,
                                 const Eigen::MatrixXd& columns);

/// Global offline space. The edge-mean check is evaluated and returned in
/// `check` (a failure is reported, never thrown).
BlockSpace assemble_global_offline(const DgSpace& dg, const std::vector<BlockBasis>& bases,
                                   EdgeMeanCheck* check = nullptr);

/// DOF count in the convention of the study tables: Σ L_i + #blocks + #interior edges.
long table_dof_count(const CoarsePartition& partition, const std::vector<BlockBasis>& bases);

}  // namespace msstokes
