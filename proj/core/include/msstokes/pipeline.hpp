// Copyright 2026 The msstokes Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "msstokes/analysis.hpp"
#include "msstokes/cache.hpp"
#include "msstokes/config.hpp"
#include "msstokes/dgform.hpp"
#include "msstokes/offline.hpp"

namespace msstokes {

enum class Stage { mesh, reference, snapshots, offline, multiscale, errors, all };

std::optional<Stage> parse_stage(const std::string& name);
std::string to_string(Stage stage);

/// Staged driver: mesh → reference → snapshots → offline → multiscale →
/// errors. Results are cached under keys derived from the config; a stage
/// run on its own loads its prerequisites from the cache and throws
/// MissingPrerequisite when one is absent. The γ-dependent solves
/// (reference, multiscale) are recomputed on a cache miss.
class Pipeline {
 public:
  Pipeline(RunConfig config, std::ostream& log, std::filesystem::path cache_dir = {});
  ~Pipeline();

  const RunConfig& config() const { return config_; }
  const StageCache& cache() const { return cache_; }
  std::filesystem::path out_dir() const { return config_.out; }

  void run(Stage stage);

  /// Mesh stage: writes mesh.msh and mesh.vtk to the output directory.
  void run_mesh();
  /// Study over config.m_off and two snapshot families; writes study.csv and
  /// study.json. Returns the study rows.
  StudyResult run_study();

  const FineMesh& mesh();
  const CoarsePartition& partition();
  const DgSpace& dg();

 private:
  enum class Access { load, load_or_compute, compute };

  void load_mesh(Access access);
  const HybridSolution& reference(Access access);
  const std::vector<SnapshotSpace>& snapshots(Access access);
  const std::vector<BlockBasis>& bases(int L, Access access);
  const HybridSolution& multiscale(int L, Access access);
  ErrorReport errors(int L);
  void write_errors_json(const std::vector<ErrorReport>& rows);

  RunConfig config_;
  std::ostream& log_;
  StageCache cache_;
  std::unique_ptr<FineMesh> mesh_;
  std::unique_ptr<CoarsePartition> partition_;
  std::unique_ptr<DgSpace> dg_;
  std::optional<HybridSolution> reference_;
  std::optional<std::vector<SnapshotSpace>> snapshots_;
  std::map<int, std::vector<BlockBasis>> bases_;
  std::map<int, HybridSolution> multiscale_;
};

}  // namespace msstokes
