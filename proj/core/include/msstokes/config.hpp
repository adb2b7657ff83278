// Copyright 2026 The msstokes Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "msstokes/geometry.hpp"
#include "msstokes/problem.hpp"
#include "msstokes/snapshots.hpp"

namespace msstokes {

/// Run configuration, read from TOML:
///
///   [geometry]  preset | circles = [[x, y, r], ...], H, refinement,
///               block_shape, mesh_file
///   [problem]   example = "example1" | "example2" | "custom",
///               f, g_D, g_N = ["expr_x", "expr_y"], dirichlet_sides
///   [method]    gamma, snapshot_mode, layers, pod_tol, m_off, seed,
///               random_count
///   [run]       out, workers
struct RunConfig {
  std::string preset = "small_inclusions";
  std::vector<Circle> circles;  // used when preset is empty
  double H = 0.1;
  int refinement = 10;
  std::optional<BlockShape> block_shape;
  std::string mesh_file;

  std::string example = "example1";
  std::array<std::string, 2> f{"0", "0"};
  std::array<std::string, 2> g_D{"0", "0"};
  std::array<std::string, 2> g_N{"0", "0"};
  /// Empty means: all sides Dirichlet for example1/custom, none for example2.
  std::optional<std::vector<std::string>> dirichlet_sides;

  double gamma = 4.0;
  SnapshotMode snapshot_mode = SnapshotMode::standard;
  int layers = 4;
  double pod_tol = kDefaultPodTolerance;
  std::vector<int> m_off{4, 8, 16, 32};
  std::uint64_t seed = 0;
  int random_count = 0;

  std::string out = "out";
  unsigned workers = 1;

  /// Throws ConfigError naming the offending field.
  void validate() const;

  BlockShape resolved_block_shape() const;
  PerforationSet perforations() const;
  ProblemData problem() const;
  /// Layer count used by the snapshot stage (0 for standard snapshots).
  int snapshot_layers() const;
  /// Randomized sample count: random_count, or max(m_off) + 4 when unset.
  int random_samples() const;

  /// Stable text form of every field; the config hash is its FNV-1a digest.
  std::string canonical() const;
  std::uint64_t hash() const;

  // Cache keys of the pipeline stages.
  std::uint64_t mesh_key() const;
  std::uint64_t snapshot_key() const;
  std::uint64_t offline_key(int L) const;
  std::uint64_t reference_key() const;
  std::uint64_t multiscale_key(int L) const;
};

RunConfig parse_config(const std::string& toml_text);
RunConfig load_config(const std::filesystem::path& path);

std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t h = 14695981039346656037ull);
std::uint64_t fnv1a(const std::string& s, std::uint64_t h = 14695981039346656037ull);
std::string hex(std::uint64_t v);

}  // namespace msstokes
