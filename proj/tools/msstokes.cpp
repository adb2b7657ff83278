// Copyright 2026 The msstokes Authors.
// SPDX-License-Identifier: Apache-2.0

// msstokes command-line driver: mesh, solve, study, report.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "msstokes/errors.hpp"
#include "msstokes/pipeline.hpp"

namespace {

enum Exit { kOk = 0, kUsage = 1, kMesh = 2, kMissing = 3, kSolver = 4 };

struct Overrides {
  std::string config;
  std::vector<int> m_off;
  std::optional<int> layers;
  std::optional<double> gamma;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::optional<std::string> out;
};

msstokes::RunConfig make_config(const Overrides& o) {
  msstokes::RunConfig c = o.config.empty() ? msstokes::RunConfig{} : msstokes::load_config(o.config);
  if (!o.m_off.empty()) c.m_off = o.m_off;
  if (o.layers) c.layers = *o.layers;
  if (o.gamma) c.gamma = *o.gamma;
  if (o.seed) c.seed = *o.seed;
  if (o.workers) c.workers = *o.workers;
  if (o.out) c.out = *o.out;
  c.validate();
  return c;
}

void add_common(CLI::App* app, Overrides& o) {
  app->add_option("--config", o.config, "TOML configuration file");
  app->add_option("--m-off", o.m_off, "Basis functions per block (repeatable)");
  app->add_option("--layers", o.layers, "Oversampling layers");
  app->add_option("--gamma", o.gamma, "Penalty parameter");
  app->add_option("--seed", o.seed, "Seed for randomized snapshots");
  app->add_option("--workers", o.workers, "Worker threads (0 = all cores)");
  app->add_option("--out", o.out, "Output directory");
}

int report(const std::string& out_dir) {
  std::ifstream in(std::filesystem::path(out_dir) / "study.json");
  if (!in) throw msstokes::MissingPrerequisite("no study.json in " + out_dir + " (run `msstokes study` first)");
  nlohmann::json j = nlohmann::json::parse(in);
  std::printf("config %s, reference n_u=%lld\n", j["config_hash"].get<std::string>().c_str(),
              j["reference"]["n_u"].get<long long>());
  std::string mode;
  for (const auto& r : j["rows"]) {
    const std::string m = r["mode"].get<std::string>();
    if (m != mode) {
      mode = m;
      std::printf("\n%s (layers %d)\n%6s %7s %8s %8s %8s %8s %12s\n", mode.c_str(), r["layers"].get<int>(), "M_off",
                  "DOF", "e_L2%", "e_DG%", "e_H1%", "e_p%", "max flux");
    }
    std::printf("%6d %7ld %8.1f %8.1f %8.1f %8.1f %12.2e%s\n", r["m_off"].get<int>(), r["dof"].get<long>(),
                r["e_u_l2"].get<double>(), r["e_u_dg"].get<double>(), r["e_u_h1"].get<double>(),
                r["e_p_l2"].get<double>(), r["conservation_max"].get<double>(),
                r["rank_warning"].get<bool>() ? "  (edge-mean rank warning)" : "");
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiscale hybridized DG solver for Stokes flow in perforated domains"};
  app.require_subcommand(1);
  Overrides o;
  std::string stage = "all";

  auto* mesh = app.add_subcommand("mesh", "Generate or import the mesh; write mesh.msh and mesh.vtk");
  add_common(mesh, o);
  auto* solve = app.add_subcommand("solve", "Run one pipeline stage (or all of them)");
  add_common(solve, o);
  solve->add_option("--stage", stage, "reference|snapshots|offline|multiscale|errors|all");
  auto* study = app.add_subcommand("study", "M_off sweep with and without oversampling; writes study.csv/json");
  add_common(study, o);
  auto* rep = app.add_subcommand("report", "Print the study table of an output directory");
  add_common(rep, o);

  CLI11_PARSE(app, argc, argv);

  const auto stage_of_error = [&]() { return mesh->parsed() ? kMesh : kSolver; };
  try {
    msstokes::RunConfig cfg = make_config(o);
    if (rep->parsed()) return report(cfg.out);
    msstokes::Pipeline pipeline(cfg, std::cout);
    if (mesh->parsed()) {
      pipeline.run_mesh();
    } else if (solve->parsed()) {
      auto s = msstokes::parse_stage(stage);
      if (!s) throw msstokes::ConfigError("--stage: unknown stage '" + stage + "'");
      pipeline.run(*s);
    } else {
      pipeline.run_study();
    }
    return kOk;
  } catch (const msstokes::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const msstokes::MissingPrerequisite& e) {
    std::cerr << "missing prerequisite: " << e.what() << '\n';
    return kMissing;
  } catch (const msstokes::ParseError& e) {
    std::cerr << "mesh error: " << e.what() << " (line " << e.line() << ")\n";
    return kMesh;
  } catch (const msstokes::CircleTooSmall& e) {
    std::cerr << "mesh error: " << e.what() << '\n';
    return kMesh;
  } catch (const msstokes::SnapDegeneracy& e) {
    std::cerr << "mesh error: " << e.what() << '\n';
    return kMesh;
  } catch (const msstokes::InvariantViolation& e) {
    std::cerr << "mesh error [" << e.check() << "]: " << e.what() << '\n';
    return kMesh;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return stage_of_error();
  } catch (const msstokes::Error& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSolver;
  }
}
