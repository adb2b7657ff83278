// Copyright 2026 The msstokes Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "msstokes/femcore.hpp"
#include "msstokes/geometry.hpp"

namespace msstokes {

enum class SnapshotMode : std::uint8_t { standard, oversampled_restricted, oversampled_unrestricted, randomized };

std::string to_string(SnapshotMode mode);
std::optional<SnapshotMode> parse_snapshot_mode(const std::string& name);

/// Snapshot columns of one coarse block.
///
/// Rows follow the local DOF order of `Subdomain(mesh, support)`:
/// 2·(local node) + component.
struct SnapshotSpace {
  int block = -1;
  SnapshotMode mode = SnapshotMode::standard;
  int layers = 0;
  double pod_tol = 0.0;
  std::uint64_t seed = 0;
  /// Sorted fine triangles: K_i, or K_i⁺ for unrestricted and randomized spaces.
  std::vector<int> support;
  Eigen::MatrixXd columns;
  /// Divergence constant of each column (transformed along with POD).
  Eigen::VectorXd divergence;
  /// Number of local Stokes solves performed.
  int solves = 0;

  Eigen::Index size() const { return columns.cols(); }
  /// True when the support is larger than the block itself.
  bool oversampled_support() const { return mode == SnapshotMode::oversampled_unrestricted || mode == SnapshotMode::randomized; }
};

inline constexpr double kDefaultPodTolerance = 1e-10;

/// Local Stokes solves with per-component delta data at every boundary node
/// of K_i that is not on a perforation.
SnapshotSpace build_standard_snapshots(const FineMesh& mesh, const CoarsePartition& partition, int block);

/// Delta-driven solves on K_i⁺ (`layers` vertex rings) followed by POD in the
/// H¹ inner product. With `restrict_to_block` the columns are truncated to
/// K_i, compressed by a second POD, and directions with zero trace on ∂K_i
/// are removed (A-orthogonally). Throws EmptyAfterPOD if nothing survives.
SnapshotSpace build_oversampled_snapshots(const FineMesh& mesh, const CoarsePartition& partition, int block,
                                          int layers, bool restrict_to_block, double pod_tol = kDefaultPodTolerance);

/// `count` solves on K_i⁺ with i.i.d. standard normal boundary data per
/// boundary DOF (zero on perforations). Deterministic given (seed, block).
SnapshotSpace build_randomized_snapshots(const FineMesh& mesh, const CoarsePartition& partition, int block,
                                         int layers, int count, std::uint64_t seed);

struct SnapshotOptions {
  SnapshotMode mode = SnapshotMode::standard;
  int layers = 4;
  double pod_tol = kDefaultPodTolerance;
  int random_count = 0;
  std::uint64_t seed = 0;
};

/// Snapshot spaces of every block, built block-parallel.
std::vector<SnapshotSpace> build_snapshots(const FineMesh& mesh, const CoarsePartition& partition,
                                           const SnapshotOptions& options, unsigned workers = 1);

struct PodResult {
  /// Modes orthonormal in the H¹ inner product.
  Eigen::MatrixXd modes;
  /// modes = input · transform.
  Eigen::MatrixXd transform;
  /// All singular values, descending.
  Eigen::VectorXd singular_values;
};

/// POD of `columns` (rows in `domain` DOF order) in the inner product
/// ∫ ∇u:∇v + u·v. Keeps singular values > tol × largest.
PodResult pod_h1(const Subdomain& domain, const Eigen::MatrixXd& columns, double tol);

/// Restriction of columns from one subdomain to a sub-subdomain.
Eigen::MatrixXd restrict_columns(const Subdomain& from, const Subdomain& to, const Eigen::MatrixXd& columns);

}  // namespace msstokes
