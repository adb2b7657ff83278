// Copyright 2026 The msstokes Authors.
// SPDX-License-Identifier: Apache-2.0

#include "msstokes/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "msstokes/errors.hpp"
#include "toml.hpp"

namespace msstokes {

std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t h) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < size; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t fnv1a(const std::string& s, std::uint64_t h) { return fnv1a(s.data(), s.size(), h); }

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& why) { throw ConfigError(field + ": " + why); }

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void check_keys(const toml::table& t, const std::string& name, std::initializer_list<const char*> allowed) {
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : t)
    if (!ok.count(std::string(k.str()))) fail(name + "." + std::string(k.str()), "unknown key");
}

template <class T>
std::optional<T> get(const toml::table& t, const std::string& table, const char* key) {
  const toml::node* n = t.get(key);
  if (!n) return std::nullopt;
  if constexpr (std::is_same_v<T, double>) {
    if (auto v = n->value<double>()) return *v;
    fail(table + "." + key, "expected a number");
  } else if constexpr (std::is_same_v<T, std::int64_t>) {
    if (auto v = n->value_exact<std::int64_t>()) return *v;
    fail(table + "." + key, "expected an integer");
  } else {
    if (auto v = n->value_exact<std::string>()) return *v;
    fail(table + "." + key, "expected a string");
  }
}

std::array<std::string, 2> get_pair(const toml::table& t, const std::string& table, const char* key,
                                    std::array<std::string, 2> fallback) {
  const toml::node* n = t.get(key);
  if (!n) return fallback;
  const toml::array* a = n->as_array();
  auto item = [&](std::size_t i) -> std::string {
    if (auto s = a->get(i)->value_exact<std::string>()) return *s;
    if (auto d = a->get(i)->value<double>()) return num(*d);
    fail(table + "." + key, "entries must be strings or numbers");
  };
  if (!a || a->size() != 2) fail(table + "." + key, "expected a two-component array");
  return {item(0), item(1)};
}

const toml::table* section(const toml::table& root, const char* name) {
  const toml::node* n = root.get(name);
  if (!n) return nullptr;
  if (!n->is_table()) fail(name, "expected a table");
  return n->as_table();
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error& e) {
    throw ConfigError("TOML parse error at line " + std::to_string(e.source().begin.line) + ": " +
                      std::string(e.description()));
  }
  check_keys(root, "config", {"geometry", "problem", "method", "run"});
  RunConfig c;

  if (const auto* g = section(root, "geometry")) {
    check_keys(*g, "geometry", {"preset", "circles", "H", "refinement", "block_shape", "mesh_file"});
    if (auto v = get<std::string>(*g, "geometry", "preset")) c.preset = *v;
    if (const toml::node* n = g->get("circles")) {
      const toml::array* arr = n->as_array();
      if (!arr) fail("geometry.circles", "expected an array of [x, y, r]");
      if (!g->get("preset")) c.preset.clear();
      for (std::size_t i = 0; i < arr->size(); ++i) {
        const toml::array* t = arr->get(i)->as_array();
        if (!t || t->size() != 3) fail("geometry.circles[" + std::to_string(i) + "]", "expected [x, y, r]");
        double v[3];
        for (int k = 0; k < 3; ++k) {
          auto d = t->get(k)->value<double>();
          if (!d) fail("geometry.circles[" + std::to_string(i) + "]", "entries must be numbers");
          v[k] = *d;
        }
        c.circles.push_back({{v[0], v[1]}, v[2]});
      }
    }
    if (auto v = get<double>(*g, "geometry", "H")) c.H = *v;
    if (auto v = get<std::int64_t>(*g, "geometry", "refinement")) c.refinement = static_cast<int>(*v);
    if (auto v = get<std::string>(*g, "geometry", "block_shape")) {
      c.block_shape = parse_block_shape(*v);
      if (!c.block_shape) fail("geometry.block_shape", "expected \"triangular\" or \"rectangular\"");
    }
    if (auto v = get<std::string>(*g, "geometry", "mesh_file")) c.mesh_file = *v;
  }

  if (const auto* p = section(root, "problem")) {
    check_keys(*p, "problem", {"example", "f", "g_D", "g_N", "dirichlet_sides"});
    if (auto v = get<std::string>(*p, "problem", "example")) c.example = *v;
    c.f = get_pair(*p, "problem", "f", c.f);
    c.g_D = get_pair(*p, "problem", "g_D", c.g_D);
    c.g_N = get_pair(*p, "problem", "g_N", c.g_N);
    if (const toml::node* n = p->get("dirichlet_sides")) {
      const toml::array* a = n->as_array();
      if (!a) fail("problem.dirichlet_sides", "expected an array of side names");
      std::vector<std::string> sides;
      for (std::size_t i = 0; i < a->size(); ++i) {
        auto s = a->get(i)->value_exact<std::string>();
        if (!s) fail("problem.dirichlet_sides", "expected strings");
        sides.push_back(*s);
      }
      c.dirichlet_sides = sides;
    }
  }

  if (const auto* m = section(root, "method")) {
    check_keys(*m, "method", {"gamma", "snapshot_mode", "layers", "pod_tol", "m_off", "seed", "random_count"});
    if (auto v = get<double>(*m, "method", "gamma")) c.gamma = *v;
    if (auto v = get<std::string>(*m, "method", "snapshot_mode")) {
      auto mode = parse_snapshot_mode(*v);
      if (!mode) fail("method.snapshot_mode", "unknown mode '" + *v + "'");
      c.snapshot_mode = *mode;
    }
    if (auto v = get<std::int64_t>(*m, "method", "layers")) c.layers = static_cast<int>(*v);
    if (auto v = get<double>(*m, "method", "pod_tol")) c.pod_tol = *v;
    if (const toml::node* n = m->get("m_off")) {
      c.m_off.clear();
      if (auto single = n->value_exact<std::int64_t>()) {
        c.m_off.push_back(static_cast<int>(*single));
      } else if (const toml::array* a = n->as_array()) {
        for (std::size_t i = 0; i < a->size(); ++i) {
          auto v = a->get(i)->value_exact<std::int64_t>();
          if (!v) fail("method.m_off", "expected integers");
          c.m_off.push_back(static_cast<int>(*v));
        }
      } else {
        fail("method.m_off", "expected an integer or an array of integers");
      }
    }
    if (auto v = get<std::int64_t>(*m, "method", "seed")) {
      if (*v < 0) fail("method.seed", "must be nonnegative");
      c.seed = static_cast<std::uint64_t>(*v);
    }
    if (auto v = get<std::int64_t>(*m, "method", "random_count")) c.random_count = static_cast<int>(*v);
  }

  if (const auto* r = section(root, "run")) {
    check_keys(*r, "run", {"out", "workers"});
    if (auto v = get<std::string>(*r, "run", "out")) c.out = *v;
    if (auto v = get<std::int64_t>(*r, "run", "workers")) {
      if (*v < 0) fail("run.workers", "must be nonnegative");
      c.workers = static_cast<unsigned>(*v);
    }
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void RunConfig::validate() const {
  if (mesh_file.empty()) {
    if (!preset.empty() && !parse_preset(preset))
      fail("geometry.preset", "expected \"small_inclusions\" or \"multi_size\"");
    if (preset.empty()) {
      for (std::size_t i = 0; i < circles.size(); ++i)
        if (!(circles[i].radius > 0.0)) fail("geometry.circles[" + std::to_string(i) + "]", "radius must be positive");
      try {
        PerforationSet{circles}.validate();
      } catch (const InvariantViolation& e) {
        fail("geometry.circles", e.what());
      }
    }
    if (refinement < 2) fail("geometry.refinement", "must be at least 2");
  }
  if (!(H > 0.0 && H <= 1.0)) fail("geometry.H", "must be in (0, 1]");
  const double n = 1.0 / H;
  if (std::abs(n - std::round(n)) > 1e-9) fail("geometry.H", "must divide 1 evenly");

  if (example != "example1" && example != "example2" && example != "custom")
    fail("problem.example", "expected \"example1\", \"example2\" or \"custom\"");
  if (example == "custom") {
    auto check = [](const std::array<std::string, 2>& e, const char* field) {
      for (const auto& s : e) {
        try {
          Expression{s};
        } catch (const ConfigError& err) {
          fail(std::string("problem.") + field, err.what());
        }
      }
    };
    check(f, "f");
    check(g_D, "g_D");
    check(g_N, "g_N");
  }
  if (dirichlet_sides)
    for (const auto& s : *dirichlet_sides)
      if (s != "left" && s != "right" && s != "bottom" && s != "top")
        fail("problem.dirichlet_sides", "unknown side '" + s + "'");

  if (!(gamma > 0.0) || !std::isfinite(gamma)) fail("method.gamma", "must be positive");
  if (layers < 0) fail("method.layers", "must be nonnegative");
  if (snapshot_mode != SnapshotMode::standard && snapshot_mode != SnapshotMode::randomized && layers < 1)
    fail("method.layers", "oversampled snapshots need at least one layer");
  if (!(pod_tol > 0.0 && pod_tol < 1.0)) fail("method.pod_tol", "must be in (0, 1)");
  if (m_off.empty()) fail("method.m_off", "must not be empty");
  for (int l : m_off)
    if (l < 1) fail("method.m_off", "entries must be positive");
  if (random_count < 0) fail("method.random_count", "must be nonnegative");
  if (out.empty()) fail("run.out", "must not be empty");
}

BlockShape RunConfig::resolved_block_shape() const {
  if (block_shape) return *block_shape;
  if (auto p = parse_preset(preset)) return preset_block_shape(*p);
  return BlockShape::rectangular;
}

PerforationSet RunConfig::perforations() const {
  if (auto p = parse_preset(preset)) return preset_perforations(*p, H);
  return PerforationSet{circles};
}

ProblemData RunConfig::problem() const {
  ProblemData p;
  if (example == "example1") {
    p = ProblemData::example1();
  } else if (example == "example2") {
    p = ProblemData::example2();
  } else {
    auto pair = [](const std::array<std::string, 2>& s) { return std::array<Expression, 2>{Expression(s[0]), Expression(s[1])}; };
    p = ProblemData::from_expressions(pair(f), pair(g_D), pair(g_N),
                                      {BoundaryKind::dirichlet, BoundaryKind::dirichlet, BoundaryKind::dirichlet,
                                       BoundaryKind::dirichlet});
  }
  if (dirichlet_sides) {
    p.sides.fill(BoundaryKind::neumann);
    const char* names[4] = {"left", "right", "bottom", "top"};
    for (const auto& s : *dirichlet_sides)
      for (int i = 0; i < 4; ++i)
        if (s == names[i]) p.sides[i] = BoundaryKind::dirichlet;
  }
  return p;
}

int RunConfig::snapshot_layers() const { return snapshot_mode == SnapshotMode::standard ? 0 : layers; }

int RunConfig::random_samples() const {
  if (random_count > 0) return random_count;
  int lmax = 0;
  for (int l : m_off) lmax = std::max(lmax, l);
  return lmax + 4;
}

namespace {

std::string geometry_text(const RunConfig& c) {
  std::ostringstream s;
  s << "preset=" << c.preset << ";circles=";
  for (const auto& k : c.circles) s << num(k.center.x) << ',' << num(k.center.y) << ',' << num(k.radius) << ';';
  s << "H=" << num(c.H) << ";refinement=" << c.refinement << ";block_shape=" << to_string(c.resolved_block_shape())
    << ";mesh_file=" << c.mesh_file;
  if (!c.mesh_file.empty()) {
    std::ifstream in(c.mesh_file, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    s << ";mesh_hash=" << hex(fnv1a(ss.str()));
  }
  return s.str();
}

std::string problem_text(const RunConfig& c) {
  std::ostringstream s;
  s << "example=" << c.example << ";f=" << c.f[0] << ',' << c.f[1] << ";g_D=" << c.g_D[0] << ',' << c.g_D[1]
    << ";g_N=" << c.g_N[0] << ',' << c.g_N[1] << ";dirichlet_sides=";
  if (c.dirichlet_sides)
    for (const auto& d : *c.dirichlet_sides) s << d << ',';
  else
    s << "default";
  return s.str();
}

std::string snapshot_text(const RunConfig& c) {
  std::ostringstream s;
  s << "mode=" << to_string(c.snapshot_mode) << ";layers=" << c.snapshot_layers() << ";pod_tol=" << num(c.pod_tol)
    << ";seed=" << c.seed;
  if (c.snapshot_mode == SnapshotMode::randomized) s << ";samples=" << c.random_samples();
  return s.str();
}

}  // namespace

std::string RunConfig::canonical() const {
  std::ostringstream s;
  s << "[geometry]" << geometry_text(*this) << "\n[problem]" << problem_text(*this) << "\n[method]gamma=" << num(gamma)
    << ";snapshot_mode=" << to_string(snapshot_mode) << ";layers=" << layers << ";pod_tol=" << num(pod_tol)
    << ";m_off=";
  for (int l : m_off) s << l << ',';
  s << ";seed=" << seed << ";random_count=" << random_count << "\n[run]out=" << out << ";workers=" << workers << "\n";
  return s.str();
}

std::uint64_t RunConfig::hash() const { return fnv1a(canonical()); }

std::uint64_t RunConfig::mesh_key() const { return fnv1a("mesh|" + geometry_text(*this)); }

std::uint64_t RunConfig::snapshot_key() const {
  return fnv1a("snapshots|" + hex(mesh_key()) + "|" + snapshot_text(*this));
}

std::uint64_t RunConfig::offline_key(int L) const {
  return fnv1a("offline|" + hex(snapshot_key()) + "|L=" + std::to_string(L));
}

std::uint64_t RunConfig::reference_key() const {
  return fnv1a("reference|" + hex(mesh_key()) + "|" + problem_text(*this) + "|gamma=" + num(gamma));
}

std::uint64_t RunConfig::multiscale_key(int L) const {
  return fnv1a("multiscale|" + hex(offline_key(L)) + "|" + problem_text(*this) + "|gamma=" + num(gamma));
}

}  // namespace msstokes
