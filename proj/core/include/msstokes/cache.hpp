// Copyright 2026 The msstokes Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "msstokes/mssolver.hpp"
#include "msstokes/offline.hpp"
#include "msstokes/snapshots.hpp"

namespace msstokes {

/// Binary stage cache. Each entry is one file `<dir>/<stage>-<key>.bin`
/// holding a magic header, the key and the payload; a file whose header or
/// key does not match is treated as a miss.
class StageCache {
 public:
  explicit StageCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path path(const std::string& stage, std::uint64_t key) const;
  bool contains(const std::string& stage, std::uint64_t key) const;

  void store(std::uint64_t key, const std::vector<SnapshotSpace>& snapshots) const;
  void store(std::uint64_t key, const std::vector<BlockBasis>& bases) const;
  void store(const std::string& stage, std::uint64_t key, const HybridSolution& solution) const;

  std::optional<std::vector<SnapshotSpace>> load_snapshots(std::uint64_t key) const;
  std::optional<std::vector<BlockBasis>> load_bases(std::uint64_t key) const;
  std::optional<HybridSolution> load_solution(const std::string& stage, std::uint64_t key) const;

 private:
  std::filesystem::path dir_;
};

/// `MSSTOKES_CACHE` if set, otherwise `<out>/cache`.
std::filesystem::path default_cache_dir(const std::filesystem::path& out);

}  // namespace msstokes
