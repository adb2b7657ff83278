// Copyright 2026 The msstokes Authors.
// SPDX-License-Identifier: Apache-2.0

#include "msstokes/cache.hpp"

#include <cstdlib>
#include <cstring>
#include <fstream>

#include "msstokes/config.hpp"
#include "msstokes/errors.hpp"

namespace msstokes {

namespace {

constexpr char kMagic[8] = {'M', 'S', 'S', 'C', 'A', 'C', 'H', '1'};

class Writer {
 public:
  explicit Writer(std::ofstream& out) : out_(out) {}
  template <class T>
  void pod(const T& v) {
    out_.write(reinterpret_cast<const char*>(&v), sizeof(T));
  }
  void ints(const std::vector<int>& v) {
    pod<std::uint64_t>(v.size());
    out_.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(int)));
  }
  void matrix(const Eigen::MatrixXd& m) {
    pod<std::int64_t>(m.rows());
    pod<std::int64_t>(m.cols());
    out_.write(reinterpret_cast<const char*>(m.data()), static_cast<std::streamsize>(m.size() * sizeof(double)));
  }
  void vector(const Eigen::VectorXd& v) { matrix(v); }

 private:
  std::ofstream& out_;
};

class Reader {
 public:
  explicit Reader(std::ifstream& in) : in_(in) {}
  template <class T>
  T pod() {
    T v{};
    in_.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in_) throw std::runtime_error("truncated cache file");
    return v;
  }
  std::vector<int> ints() {
    const auto n = pod<std::uint64_t>();
    if (n > (1ull << 32)) throw std::runtime_error("corrupt cache file");
    std::vector<int> v(n);
    in_.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(int)));
    if (!in_) throw std::runtime_error("truncated cache file");
    return v;
  }
  Eigen::MatrixXd matrix() {
    const auto r = pod<std::int64_t>();
    const auto c = pod<std::int64_t>();
    if (r < 0 || c < 0 || r * c > (1ll << 34)) throw std::runtime_error("corrupt cache file");
    Eigen::MatrixXd m(r, c);
    in_.read(reinterpret_cast<char*>(m.data()), static_cast<std::streamsize>(m.size() * sizeof(double)));
    if (!in_) throw std::runtime_error("truncated cache file");
    return m;
  }
  Eigen::VectorXd vector() {
    Eigen::MatrixXd m = matrix();
    return Eigen::Map<Eigen::VectorXd>(m.data(), m.size());
  }

 private:
  std::ifstream& in_;
};

template <class Fn>
void write_file(const std::filesystem::path& path, std::uint64_t key, Fn&& body) {
  std::filesystem::create_directories(path.parent_path());
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write cache file " + tmp.string());
    out.write(kMagic, sizeof kMagic);
    Writer w(out);
    w.pod(key);
    body(w);
    if (!out) throw Error("failed writing cache file " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

template <class T, class Fn>
std::optional<T> read_file(const std::filesystem::path& path, std::uint64_t key, Fn&& body) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[sizeof kMagic];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof magic) != 0) return std::nullopt;
  try {
    Reader r(in);
    if (r.pod<std::uint64_t>() != key) return std::nullopt;
    return body(r);
  } catch (const std::runtime_error&) {
    return std::nullopt;
  }
}

}  // namespace

std::filesystem::path StageCache::path(const std::string& stage, std::uint64_t key) const {
  return dir_ / (stage + "-" + hex(key) + ".bin");
}

bool StageCache::contains(const std::string& stage, std::uint64_t key) const {
  return std::filesystem::exists(path(stage, key));
}

void StageCache::store(std::uint64_t key, const std::vector<SnapshotSpace>& snapshots) const {
  write_file(path("snapshots", key), key, [&](Writer& w) {
    w.pod<std::uint64_t>(snapshots.size());
    for (const auto& s : snapshots) {
      w.pod<std::int32_t>(s.block);
      w.pod<std::uint8_t>(static_cast<std::uint8_t>(s.mode));
      w.pod<std::int32_t>(s.layers);
      w.pod(s.pod_tol);
      w.pod(s.seed);
      w.pod<std::int32_t>(s.solves);
      w.ints(s.support);
      w.matrix(s.columns);
      w.vector(s.divergence);
    }
  });
}

void StageCache::store(std::uint64_t key, const std::vector<BlockBasis>& bases) const {
  write_file(path("offline", key), key, [&](Writer& w) {
    w.pod<std::uint64_t>(bases.size());
    for (const auto& b : bases) {
      w.pod<std::int32_t>(b.block);
      w.pod<std::uint8_t>(static_cast<std::uint8_t>(b.mode));
      w.pod<std::int32_t>(b.requested);
      w.pod<std::int32_t>(b.dropped);
      w.vector(b.eigenvalues);
      w.matrix(b.columns);
    }
  });
}

void StageCache::store(const std::string& stage, std::uint64_t key, const HybridSolution& s) const {
  write_file(path(stage, key), key, [&](Writer& w) {
    w.vector(s.coefficients);
    w.vector(s.u);
    w.vector(s.p);
    w.vector(s.p_hat);
    w.pod(s.gauge_multiplier);
    w.pod(s.residual);
    w.pod<std::int64_t>(s.n_u);
    w.pod<std::int64_t>(s.n_p);
    w.pod<std::int64_t>(s.n_ph);
    w.pod(s.seconds);
  });
}

std::optional<std::vector<SnapshotSpace>> StageCache::load_snapshots(std::uint64_t key) const {
  return read_file<std::vector<SnapshotSpace>>(path("snapshots", key), key, [](Reader& r) {
    std::vector<SnapshotSpace> out(r.pod<std::uint64_t>());
    for (auto& s : out) {
      s.block = r.pod<std::int32_t>();
      s.mode = static_cast<SnapshotMode>(r.pod<std::uint8_t>());
      s.layers = r.pod<std::int32_t>();
      s.pod_tol = r.pod<double>();
      s.seed = r.pod<std::uint64_t>();
      s.solves = r.pod<std::int32_t>();
      s.support = r.ints();
      s.columns = r.matrix();
      s.divergence = r.vector();
    }
    return out;
  });
}

std::optional<std::vector<BlockBasis>> StageCache::load_bases(std::uint64_t key) const {
  return read_file<std::vector<BlockBasis>>(path("offline", key), key, [](Reader& r) {
    std::vector<BlockBasis> out(r.pod<std::uint64_t>());
    for (auto& b : out) {
      b.block = r.pod<std::int32_t>();
      b.mode = static_cast<SnapshotMode>(r.pod<std::uint8_t>());
      b.requested = r.pod<std::int32_t>();
      b.dropped = r.pod<std::int32_t>();
      b.eigenvalues = r.vector();
      b.columns = r.matrix();
    }
    return out;
  });
}

std::optional<HybridSolution> StageCache::load_solution(const std::string& stage, std::uint64_t key) const {
  return read_file<HybridSolution>(path(stage, key), key, [](Reader& r) {
    HybridSolution s;
    s.coefficients = r.vector();
    s.u = r.vector();
    s.p = r.vector();
    s.p_hat = r.vector();
    s.gauge_multiplier = r.pod<double>();
    s.residual = r.pod<double>();
    s.n_u = r.pod<std::int64_t>();
    s.n_p = r.pod<std::int64_t>();
    s.n_ph = r.pod<std::int64_t>();
    s.seconds = r.pod<double>();
    return s;
  });
}

std::filesystem::path default_cache_dir(const std::filesystem::path& out) {
  if (const char* env = std::getenv("MSSTOKES_CACHE"); env && *env) return env;
  return out / "cache";
}

}  // namespace msstokes
