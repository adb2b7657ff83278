// Copyright 2026 The msstokes Authors.
// SPDX-License-Identifier: Apache-2.0

#include "msstokes/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "msstokes/errors.hpp"
#include "msstokes/mesh_io.hpp"
#include "msstokes/mssolver.hpp"
#include "msstokes/vtk.hpp"

namespace msstokes {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2fs", s);
  return buf;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

nlohmann::json to_json(const ErrorReport& r) {
  return {{"m_off", r.m_off},       {"dof", r.dof},       {"mode", r.mode},
          {"layers", r.layers},     {"gamma", r.gamma},   {"seed", r.seed},
          {"e_u_l2", r.e_u_l2},     {"e_u_dg", r.e_u_dg}, {"e_u_h1", r.e_u_h1},
          {"e_p_l2", r.e_p_l2},     {"conservation_max", r.conservation_max},
          {"rank_warning", r.rank_warning}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

}  // namespace

std::optional<Stage> parse_stage(const std::string& name) {
  for (auto s : {Stage::mesh, Stage::reference, Stage::snapshots, Stage::offline, Stage::multiscale, Stage::errors,
                 Stage::all})
    if (to_string(s) == name) return s;
  return std::nullopt;
}

std::string to_string(Stage stage) {
  switch (stage) {
    case Stage::mesh: return "mesh";
    case Stage::reference: return "reference";
    case Stage::snapshots: return "snapshots";
    case Stage::offline: return "offline";
    case Stage::multiscale: return "multiscale";
    case Stage::errors: return "errors";
    case Stage::all: return "all";
  }
  return "unknown";
}

Pipeline::Pipeline(RunConfig config, std::ostream& log, std::filesystem::path cache_dir)
    : config_(std::move(config)),
      log_(log),
      cache_(cache_dir.empty() ? default_cache_dir(config_.out) : std::move(cache_dir)) {
  config_.validate();
}

Pipeline::~Pipeline() = default;

const FineMesh& Pipeline::mesh() {
  load_mesh(Access::load_or_compute);
  return *mesh_;
}

const CoarsePartition& Pipeline::partition() {
  load_mesh(Access::load_or_compute);
  return *partition_;
}

const DgSpace& Pipeline::dg() {
  load_mesh(Access::load_or_compute);
  if (!dg_) dg_ = std::make_unique<DgSpace>(*mesh_, *partition_, config_.problem().sides);
  return *dg_;
}

void Pipeline::load_mesh(Access access) {
  if (mesh_ && access != Access::compute) return;
  const auto path = cache_.dir() / ("mesh-" + hex(config_.mesh_key()) + ".msh");
  if (access != Access::compute && std::filesystem::exists(path)) {
    mesh_ = std::make_unique<FineMesh>(import_mesh(path));
    partition_ = std::make_unique<CoarsePartition>(build_partition(*mesh_, config_.H));
    return;
  }
  if (access == Access::load) throw MissingPrerequisite("mesh stage has not been run for this configuration");
  const auto start = Clock::now();
  if (!config_.mesh_file.empty()) {
    auto m = import_mesh(config_.mesh_file);
    mesh_ = std::make_unique<FineMesh>(std::move(m));
    partition_ = std::make_unique<CoarsePartition>(build_partition(*mesh_, config_.H));
  } else {
    auto [m, p] = generate_perforated_mesh(config_.perforations(), config_.H, config_.refinement,
                                           config_.resolved_block_shape());
    mesh_ = std::make_unique<FineMesh>(std::move(m));
    partition_ = std::make_unique<CoarsePartition>(std::move(p));
  }
  dg_.reset();
  std::filesystem::create_directories(cache_.dir());
  write_mesh(path, *mesh_);
  log_ << "mesh        nodes=" << mesh_->num_nodes() << " triangles=" << mesh_->num_triangles()
       << " blocks=" << partition_->num_blocks() << " coarse_edges=" << partition_->num_edges()
       << " holes=" << mesh_->perforations.circles.size() << " (" << seconds(since(start)) << ")\n";
}

void Pipeline::run_mesh() {
  load_mesh(Access::compute);
  std::filesystem::create_directories(config_.out);
  write_mesh(std::filesystem::path(config_.out) / "mesh.msh", *mesh_);
  write_mesh_vtk(std::filesystem::path(config_.out) / "mesh.vtk", *mesh_);
}

const HybridSolution& Pipeline::reference(Access access) {
  if (reference_ && access != Access::compute) return *reference_;
  const auto key = config_.reference_key();
  if (access != Access::compute)
    if (auto s = cache_.load_solution("reference", key)) return reference_.emplace(std::move(*s));
  if (access == Access::load) throw MissingPrerequisite("reference stage has not been run for this configuration");
  const auto start = Clock::now();
  const DgSpace& space = dg();
  reference_ = solve_reference(space, config_.problem(), config_.gamma);
  cache_.store("reference", key, *reference_);
  write_solution_vtk(std::filesystem::path(config_.out) / "reference.vtk", space, reference_->u, reference_->p);
  log_ << "reference   n_u=" << reference_->n_u << " n_p=" << reference_->n_p << " n_ph=" << reference_->n_ph
       << " residual=" << sci(reference_->residual) << " (" << seconds(since(start)) << ")\n";
  return *reference_;
}

const std::vector<SnapshotSpace>& Pipeline::snapshots(Access access) {
  if (snapshots_ && access != Access::compute) return *snapshots_;
  const auto key = config_.snapshot_key();
  if (access != Access::compute)
    if (auto s = cache_.load_snapshots(key)) return snapshots_.emplace(std::move(*s));
  if (access == Access::load) throw MissingPrerequisite("snapshots stage has not been run for this configuration");
  const auto start = Clock::now();
  SnapshotOptions opt;
  opt.mode = config_.snapshot_mode;
  opt.layers = config_.snapshot_layers();
  opt.pod_tol = config_.pod_tol;
  opt.seed = config_.seed;
  opt.random_count = config_.random_samples();
  snapshots_ = build_snapshots(mesh(), partition(), opt, config_.workers);
  cache_.store(key, *snapshots_);
  long cols = 0, solves = 0;
  for (const auto& s : *snapshots_) {
    cols += s.size();
    solves += s.solves;
  }
  log_ << "snapshots   mode=" << to_string(config_.snapshot_mode) << " layers=" << opt.layers
       << " solves=" << solves << " columns=" << cols << " (" << seconds(since(start)) << ")\n";
  return *snapshots_;
}

const std::vector<BlockBasis>& Pipeline::bases(int L, Access access) {
  if (auto it = bases_.find(L); it != bases_.end() && access != Access::compute) return it->second;
  const auto key = config_.offline_key(L);
  if (access != Access::compute)
    if (auto b = cache_.load_bases(key)) return bases_[L] = std::move(*b);
  if (access == Access::load)
    throw MissingPrerequisite("offline stage has not been run for M_off = " + std::to_string(L));
  const auto& snaps = snapshots(access == Access::compute ? Access::load : Access::load_or_compute);
  const auto start = Clock::now();
  auto b = reduce_all(mesh(), partition(), snaps, std::vector<int>(partition().num_blocks(), L), config_.workers);
  cache_.store(key, b);
  int dropped = 0;
  double lmax = 0.0;
  for (const auto& x : b) {
    dropped += x.dropped;
    if (x.eigenvalues.size()) lmax = std::max(lmax, x.eigenvalues(x.eigenvalues.size() - 1));
  }
  log_ << "offline     m_off=" << L << " dof=" << table_dof_count(partition(), b) << " dropped=" << dropped
       << " max_lambda=" << sci(lmax) << " (" << seconds(since(start)) << ")\n";
  return bases_[L] = std::move(b);
}

const HybridSolution& Pipeline::multiscale(int L, Access access) {
  if (auto it = multiscale_.find(L); it != multiscale_.end() && access != Access::compute) return it->second;
  const auto key = config_.multiscale_key(L);
  if (access != Access::compute)
    if (auto s = cache_.load_solution("multiscale", key)) return multiscale_[L] = std::move(*s);
  if (access == Access::load)
    throw MissingPrerequisite("multiscale stage has not been run for M_off = " + std::to_string(L));
  const auto& b = bases(L, Access::load);
  const auto start = Clock::now();
  EdgeMeanCheck check;
  const BlockSpace space = assemble_global_offline(dg(), b, &check);
  HybridSolution sol = solve_multiscale(space, config_.problem(), config_.gamma);
  cache_.store("multiscale", key, sol);
  write_solution_vtk(std::filesystem::path(config_.out) / ("multiscale_m" + std::to_string(L) + ".vtk"), dg(), sol.u,
                     sol.p);
  log_ << "multiscale  m_off=" << L << " n_u=" << sol.n_u << " residual=" << sci(sol.residual);
  if (!check.passed())
    log_ << " warning: edge-mean rank check failed on " << check.failing.size() << " block(s)";
  log_ << " (" << seconds(since(start)) << ")\n";
  return multiscale_[L] = std::move(sol);
}

ErrorReport Pipeline::errors(int L) {
  const auto& b = bases(L, Access::load);
  const HybridSolution& ms = multiscale(L, Access::load_or_compute);
  const HybridSolution& ref = reference(Access::load_or_compute);
  ErrorReport r = compute_errors(dg(), ms, ref, config_.gamma);
  r.m_off = L;
  r.dof = table_dof_count(partition(), b);
  r.conservation_max = audit_conservation(dg(), ms, config_.problem()).max();
  r.layers = config_.snapshot_layers();
  r.mode = to_string(config_.snapshot_mode);
  r.seed = config_.seed;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "errors      m_off=%d dof=%ld e_u_l2=%.1f%% e_u_dg=%.1f%% e_u_h1=%.1f%% e_p_l2=%.1f%% "
                "conservation_max=%.2e\n",
                r.m_off, r.dof, r.e_u_l2, r.e_u_dg, r.e_u_h1, r.e_p_l2, r.conservation_max);
  log_ << buf;
  return r;
}

void Pipeline::write_errors_json(const std::vector<ErrorReport>& rows) {
  nlohmann::json j;
  j["config_hash"] = hex(config_.hash());
  j["rows"] = nlohmann::json::array();
  for (const auto& r : rows) j["rows"].push_back(to_json(r));
  write_text(std::filesystem::path(config_.out) / "errors.json", j.dump(2) + "\n");
}

void Pipeline::run(Stage stage) {
  std::filesystem::create_directories(config_.out);
  switch (stage) {
    case Stage::mesh: run_mesh(); return;
    case Stage::reference:
      load_mesh(Access::load);
      reference(Access::compute);
      return;
    case Stage::snapshots:
      load_mesh(Access::load);
      snapshots(Access::compute);
      return;
    case Stage::offline:
      load_mesh(Access::load);
      snapshots(Access::load);
      for (int L : config_.m_off) bases(L, Access::compute);
      return;
    case Stage::multiscale:
      load_mesh(Access::load);
      for (int L : config_.m_off) multiscale(L, Access::compute);
      return;
    case Stage::errors: {
      load_mesh(Access::load);
      std::vector<ErrorReport> rows;
      for (int L : config_.m_off) rows.push_back(errors(L));
      write_errors_json(rows);
      return;
    }
    case Stage::all: {
      run_mesh();
      reference(Access::compute);
      snapshots(Access::compute);
      std::vector<ErrorReport> rows;
      for (int L : config_.m_off) {
        bases(L, Access::compute);
        multiscale(L, Access::compute);
        rows.push_back(errors(L));
      }
      write_errors_json(rows);
      return;
    }
  }
}

StudyResult Pipeline::run_study() {
  const auto start = Clock::now();
  load_mesh(Access::load_or_compute);
  StudyOptions opt;
  opt.m_off = config_.m_off;
  opt.gamma = config_.gamma;
  opt.layers = config_.layers;
  opt.pod_tol = config_.pod_tol;
  opt.seed = config_.seed;
  opt.random_count = config_.random_count;
  opt.workers = config_.workers;
  opt.modes = {SnapshotMode::standard, config_.snapshot_mode == SnapshotMode::standard
                                           ? SnapshotMode::oversampled_restricted
                                           : config_.snapshot_mode};
  StudyResult res = msstokes::run_study(*mesh_, *partition_, config_.problem(), opt);

  std::ostringstream csv;
  write_study_csv(csv, res.rows);
  const std::filesystem::path out(config_.out);
  write_text(out / "study.csv", csv.str());

  nlohmann::json j;
  j["config_hash"] = hex(config_.hash());
  j["config"] = config_.canonical();
  j["mesh_hash"] = hex(mesh_->hash());
  j["reference"] = {{"n_u", res.reference.n_u},
                    {"n_p", res.reference.n_p},
                    {"n_ph", res.reference.n_ph},
                    {"residual", res.reference.residual}};
  j["rows"] = nlohmann::json::array();
  for (std::size_t i = 0; i < res.rows.size(); ++i) {
    auto row = to_json(res.rows[i]);
    row["seconds"] = res.timings[i];
    j["rows"].push_back(row);
  }
  j["seconds"] = since(start);
  write_text(out / "study.json", j.dump(2) + "\n");
  log_ << "study       rows=" << res.rows.size() << " reference_dofs=" << res.reference_dofs << " ("
       << seconds(since(start)) << ")\n";
  return res;
}

}  // namespace msstokes
