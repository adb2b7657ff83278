// Copyright 2026 The msstokes Authors.
// SPDX-License-Identifier: Apache-2.0

#include "msstokes/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>
#include <tuple>

#include "msstokes/errors.hpp"

namespace msstokes {

namespace {

constexpr double kOnBoundaryTol = 1e-12;

bool on_outer_boundary(Point p) {
  return p.x <= kOnBoundaryTol || p.x >= 1.0 - kOnBoundaryTol || p.y <= kOnBoundaryTol ||
         p.y >= 1.0 - kOnBoundaryTol;
}

Side side_of_segment(Point a, Point b) {
  auto near = [](double v, double t) { return std::abs(v - t) <= kOnBoundaryTol; };
  if (near(a.x, 0.0) && near(b.x, 0.0)) return Side::left;
  if (near(a.x, 1.0) && near(b.x, 1.0)) return Side::right;
  if (near(a.y, 0.0) && near(b.y, 0.0)) return Side::bottom;
  if (near(a.y, 1.0) && near(b.y, 1.0)) return Side::top;
  return Side::none;
}

class Fnv1a {
 public:
  void add(const void* data, std::size_t n) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      state_ ^= bytes[i];
      state_ *= 1099511628211ULL;
    }
  }
  template <class T>
  void add_value(const T& v) {
    add(&v, sizeof(T));
  }
  std::uint64_t value() const { return state_; }

 private:
  std::uint64_t state_ = 14695981039346656037ULL;
};

std::vector<std::vector<int>> node_to_triangles(const FineMesh& mesh) {
  std::vector<std::vector<int>> adj(mesh.num_nodes());
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t)
    for (int v : mesh.triangles[t]) adj[v].push_back(static_cast<int>(t));
  return adj;
}

std::vector<int> expand_once(const FineMesh& mesh, const std::vector<std::vector<int>>& adj,
                             std::span<const int> triangles) {
  std::vector<char> in(mesh.num_triangles(), 0);
  for (int t : triangles) in[t] = 1;
  std::vector<int> out(triangles.begin(), triangles.end());
  for (int t : triangles)
    for (int v : mesh.triangles[t])
      for (int s : adj[v])
        if (!in[s]) {
          in[s] = 1;
          out.push_back(s);
        }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

double norm(Point a) { return std::hypot(a.x, a.y); }

void PerforationSet::validate() const {
  for (std::size_t i = 0; i < circles.size(); ++i) {
    const Circle& c = circles[i];
    if (!(c.radius > 0.0))
      throw InvariantViolation("perforation_radius", "circle " + std::to_string(i) + " has non-positive radius");
    if (c.center.x - c.radius <= 0.0 || c.center.x + c.radius >= 1.0 || c.center.y - c.radius <= 0.0 ||
        c.center.y + c.radius >= 1.0)
      throw InvariantViolation("perforation_inside_domain",
                               "circle " + std::to_string(i) + " touches the outer boundary");
    for (std::size_t j = 0; j < i; ++j) {
      const Circle& d = circles[j];
      if (norm(c.center - d.center) <= c.radius + d.radius)
        throw InvariantViolation("perforations_disjoint",
                                 "circles " + std::to_string(j) + " and " + std::to_string(i) + " intersect");
    }
  }
}

double FineMesh::triangle_area(int t) const {
  const auto& tri = triangles[t];
  return 0.5 * cross(nodes[tri[1]] - nodes[tri[0]], nodes[tri[2]] - nodes[tri[0]]);
}

Point FineMesh::centroid(int t) const {
  const auto& tri = triangles[t];
  return (1.0 / 3.0) * (nodes[tri[0]] + nodes[tri[1]] + nodes[tri[2]]);
}

double FineMesh::edge_length(int e) const { return norm(nodes[edges[e].nodes[1]] - nodes[edges[e].nodes[0]]); }

std::vector<bool> FineMesh::perforation_nodes() const {
  std::vector<bool> mask(num_nodes(), false);
  for (const auto& e : edges)
    if (e.marker == EdgeMarker::perforation) mask[e.nodes[0]] = mask[e.nodes[1]] = true;
  return mask;
}

Side FineMesh::outer_side(int e) const {
  const auto& edge = edges[e];
  if (edge.triangles[1] >= 0 || edge.marker == EdgeMarker::perforation) return Side::none;
  return side_of_segment(nodes[edge.nodes[0]], nodes[edge.nodes[1]]);
}

void FineMesh::build_edges(EdgeMarker outer_marker) {
  std::map<std::pair<int, int>, int> index;
  edges.clear();
  triangle_edges.assign(num_triangles(), {-1, -1, -1});
  for (std::size_t t = 0; t < num_triangles(); ++t) {
    for (int k = 0; k < 3; ++k) {
      int a = triangles[t][k];
      int b = triangles[t][(k + 1) % 3];
      auto key = std::minmax(a, b);
      auto [it, inserted] = index.try_emplace({key.first, key.second}, static_cast<int>(edges.size()));
      if (inserted) {
        FineEdge e;
        e.nodes = {a, b};
        e.triangles = {static_cast<int>(t), -1};
        edges.push_back(e);
      } else {
        FineEdge& e = edges[it->second];
        if (e.triangles[1] >= 0)
          throw InvariantViolation("conforming", "fine edge (" + std::to_string(a) + "," + std::to_string(b) +
                                                     ") shared by more than two triangles");
        if (e.nodes[0] == a)
          throw InvariantViolation("conforming", "triangles " + std::to_string(e.triangles[0]) + " and " +
                                                     std::to_string(t) + " overlap along a shared edge");
        e.triangles[1] = static_cast<int>(t);
      }
      triangle_edges[t][k] = it->second;
    }
  }
  for (auto& e : edges) {
    if (e.triangles[1] >= 0) {
      e.marker = EdgeMarker::interior;
      continue;
    }
    Point a = nodes[e.nodes[0]];
    Point b = nodes[e.nodes[1]];
    if (side_of_segment(a, b) != Side::none) {
      e.marker = outer_marker;
      continue;
    }
    e.marker = EdgeMarker::perforation;
    Point mid = 0.5 * (a + b);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < perforations.circles.size(); ++c) {
      const Circle& circ = perforations.circles[c];
      double d = std::abs(norm(mid - circ.center) - circ.radius);
      if (d < best) {
        best = d;
        e.circle = static_cast<int>(c);
      }
    }
  }
}

void FineMesh::validate() const {
  if (triangle_block.size() != triangles.size())
    throw InvariantViolation("block_ids", "triangle_block size does not match triangle count");
  for (std::size_t t = 0; t < num_triangles(); ++t) {
    for (int v : triangles[t])
      if (v < 0 || static_cast<std::size_t>(v) >= num_nodes())
        throw InvariantViolation("node_index", "triangle " + std::to_string(t) + " references a missing node");
    if (!(triangle_area(static_cast<int>(t)) > 0.0))
      throw InvariantViolation("positive_area", "triangle " + std::to_string(t) + " has non-positive area");
  }
  {
    std::vector<std::array<int, 3>> sorted = triangles;
    for (auto& tri : sorted) std::sort(tri.begin(), tri.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw InvariantViolation("conforming", "duplicated triangle");
  }
  if (triangle_edges.size() != triangles.size())
    throw InvariantViolation("conforming", "edge connectivity missing");
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto& edge = edges[e];
    bool shared = edge.triangles[1] >= 0;
    if (shared != (edge.marker == EdgeMarker::interior))
      throw InvariantViolation("conforming", "edge " + std::to_string(e) + " marker disagrees with adjacency");
    if (!shared && edge.marker != EdgeMarker::perforation &&
        side_of_segment(nodes[edge.nodes[0]], nodes[edge.nodes[1]]) == Side::none)
      throw InvariantViolation("conforming", "boundary edge " + std::to_string(e) +
                                                 " is neither on the outer boundary nor a perforation");
    if (edge.marker == EdgeMarker::perforation && edge.circle >= 0 &&
        static_cast<std::size_t>(edge.circle) < perforations.circles.size()) {
      const Circle& c = perforations.circles[edge.circle];
      for (int v : edge.nodes)
        if (std::abs(norm(nodes[v] - c.center) - c.radius) > 1e-12 * c.radius)
          throw InvariantViolation("perforation_fit", "perforation edge " + std::to_string(e) +
                                                          " has an endpoint off its circle");
    }
  }
  for (std::size_t v = 0; v < num_nodes(); ++v)
    for (std::size_t c = 0; c < perforations.circles.size(); ++c) {
      const Circle& circ = perforations.circles[c];
      if (norm(nodes[v] - circ.center) < circ.radius * (1.0 - 1e-12))
        throw InvariantViolation("node_outside_perforations",
                                 "node " + std::to_string(v) + " lies inside perforation " + std::to_string(c));
    }
}

std::uint64_t FineMesh::hash() const {
  Fnv1a f;
  for (const auto& p : nodes) {
    f.add_value(p.x);
    f.add_value(p.y);
  }
  for (const auto& t : triangles) f.add(t.data(), sizeof(int) * 3);
  for (int b : triangle_block) f.add_value(b);
  return f.value();
}

std::size_t CoarsePartition::num_interior_edges() const {
  return static_cast<std::size_t>(
      std::count_if(edges.begin(), edges.end(), [](const CoarseEdge& e) { return !e.boundary(); }));
}

Point CoarsePartition::outward_normal(const FineMesh& mesh, int fine_edge, int block) const {
  const FineEdge& e = mesh.edges[fine_edge];
  for (int t : e.triangles) {
    if (t < 0 || mesh.triangle_block[t] != block) continue;
    for (int k = 0; k < 3; ++k) {
      if (mesh.triangle_edges[t][k] != fine_edge) continue;
      Point a = mesh.nodes[mesh.triangles[t][k]];
      Point b = mesh.nodes[mesh.triangles[t][(k + 1) % 3]];
      Point d = b - a;
      double len = norm(d);
      return {d.y / len, -d.x / len};
    }
  }
  throw InvariantViolation("edge_block", "fine edge " + std::to_string(fine_edge) + " is not adjacent to block " +
                                             std::to_string(block));
}

CoarsePartition build_partition(const FineMesh& mesh, double H) {
  CoarsePartition part;
  part.H = H;
  int nb = 0;
  for (int b : mesh.triangle_block) {
    if (b < 0) throw InvariantViolation("partition", "triangle without coarse block");
    nb = std::max(nb, b + 1);
  }
  part.blocks.resize(nb);
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    auto& blk = part.blocks[mesh.triangle_block[t]];
    blk.triangles.push_back(static_cast<int>(t));
    blk.area += mesh.triangle_area(static_cast<int>(t));
  }
  for (int b = 0; b < nb; ++b)
    if (part.blocks[b].triangles.empty())
      throw InvariantViolation("partition", "coarse block " + std::to_string(b) + " is empty");

  // key: (plus, minus or -1, side)
  std::map<std::tuple<int, int, int>, std::vector<int>> groups;
  for (std::size_t e = 0; e < mesh.edges.size(); ++e) {
    const FineEdge& edge = mesh.edges[e];
    if (edge.marker == EdgeMarker::perforation) continue;
    if (edge.triangles[1] >= 0) {
      int b0 = mesh.triangle_block[edge.triangles[0]];
      int b1 = mesh.triangle_block[edge.triangles[1]];
      if (b0 == b1) continue;
      groups[{std::min(b0, b1), std::max(b0, b1), static_cast<int>(Side::none)}].push_back(static_cast<int>(e));
    } else {
      Side s = mesh.outer_side(static_cast<int>(e));
      groups[{mesh.triangle_block[edge.triangles[0]], -1, static_cast<int>(s)}].push_back(static_cast<int>(e));
    }
  }
  for (auto& [key, fine] : groups) {
    CoarseEdge ce;
    ce.plus = std::get<0>(key);
    ce.minus = std::get<1>(key);
    ce.side = static_cast<Side>(std::get<2>(key));
    Point n{0.0, 0.0};
    for (int e : fine) {
      double len = mesh.edge_length(e);
      n = n + len * part.outward_normal(mesh, e, ce.plus);
      ce.length += len;
    }
    ce.normal = (1.0 / norm(n)) * n;
    Point tangent{-ce.normal.y, ce.normal.x};
    auto along = [&](int e) {
      const auto& ed = mesh.edges[e];
      return dot(0.5 * (mesh.nodes[ed.nodes[0]] + mesh.nodes[ed.nodes[1]]), tangent);
    };
    std::stable_sort(fine.begin(), fine.end(), [&](int a, int b) { return along(a) < along(b); });
    ce.fine_edges = std::move(fine);
    int id = static_cast<int>(part.edges.size());
    part.blocks[ce.plus].edges.push_back(id);
    if (ce.minus >= 0) part.blocks[ce.minus].edges.push_back(id);
    part.edges.push_back(std::move(ce));
  }

  // Connectivity of each block through shared fine edges.
  for (int b = 0; b < nb; ++b) {
    const auto& tris = part.blocks[b].triangles;
    std::vector<char> seen(mesh.num_triangles(), 0);
    std::queue<int> q;
    q.push(tris.front());
    seen[tris.front()] = 1;
    std::size_t count = 0;
    while (!q.empty()) {
      int t = q.front();
      q.pop();
      ++count;
      for (int e : mesh.triangle_edges[t])
        for (int s : mesh.edges[e].triangles)
          if (s >= 0 && !seen[s] && mesh.triangle_block[s] == b) {
            seen[s] = 1;
            q.push(s);
          }
    }
    if (count != tris.size())
      throw InvariantViolation("block_connected", "coarse block " + std::to_string(b) + " is disconnected");
  }

  part.oversampled.resize(nb);
  for (int b = 0; b < nb; ++b) part.oversampled[b] = part.blocks[b].triangles;
  return part;
}

std::pair<FineMesh, CoarsePartition> generate_perforated_mesh(const PerforationSet& perforations, double H,
                                                              int refinement, BlockShape shape) {
  perforations.validate();
  if (!(H > 0.0) || H > 1.0) throw std::invalid_argument("coarse size H must lie in (0, 1]");
  const int nc = static_cast<int>(std::lround(1.0 / H));
  if (nc < 1 || std::abs(nc * H - 1.0) > 1e-9) throw std::invalid_argument("H must divide 1 evenly");
  if (refinement < 2) throw std::invalid_argument("refinement must be at least 2");
  const int n = nc * refinement;
  const double h = 1.0 / n;

  for (std::size_t c = 0; c < perforations.circles.size(); ++c)
    if (2.0 * perforations.circles[c].radius <= 2.0 * h)
      throw CircleTooSmall("circle " + std::to_string(c) + " is not resolved: diameter <= 2h");

  const int np = n + 1;
  std::vector<Point> grid(static_cast<std::size_t>(np) * np);
  for (int j = 0; j < np; ++j)
    for (int i = 0; i < np; ++i)
      grid[static_cast<std::size_t>(j) * np + i] = {static_cast<double>(i) / n, static_cast<double>(j) / n};

  std::vector<std::array<int, 3>> tris;
  std::vector<int> blocks;
  tris.reserve(2 * static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      int a = j * np + i, b = a + 1, c = a + np + 1, d = a + np;
      int I = i / refinement, J = j / refinement;
      int li = i - I * refinement, lj = j - J * refinement;
      int lower_block, upper_block;
      if (shape == BlockShape::rectangular) {
        lower_block = upper_block = J * nc + I;
      } else {
        int base = 2 * (J * nc + I);
        lower_block = (li >= lj) ? base : base + 1;
        upper_block = (li > lj) ? base : base + 1;
      }
      tris.push_back({a, b, c});
      blocks.push_back(lower_block);
      tris.push_back({a, c, d});
      blocks.push_back(upper_block);
    }
  }

  const auto& circles = perforations.circles;
  auto inside = [&](Point p, const Circle& c) {
    Point d = p - c.center;
    return dot(d, d) < c.radius * c.radius;
  };
  std::vector<int> removed_by(tris.size(), -1);
  std::vector<int> removed_count(circles.size(), 0);
  for (std::size_t t = 0; t < tris.size(); ++t) {
    Point g = (1.0 / 3.0) * (grid[tris[t][0]] + grid[tris[t][1]] + grid[tris[t][2]]);
    for (std::size_t c = 0; c < circles.size(); ++c)
      if (inside(g, circles[c])) {
        removed_by[t] = static_cast<int>(c);
        ++removed_count[c];
        break;
      }
  }
  for (std::size_t c = 0; c < circles.size(); ++c) {
    if (removed_count[c] > 0) continue;
    // A circle that removes nothing must at least cut a grid edge.
    bool cuts = false;
    for (std::size_t t = 0; t < tris.size() && !cuts; ++t)
      for (int k = 0; k < 3 && !cuts; ++k) {
        bool ia = inside(grid[tris[t][k]], circles[c]);
        bool ib = inside(grid[tris[t][(k + 1) % 3]], circles[c]);
        cuts = ia != ib;
      }
    if (!cuts) throw CircleTooSmall("circle " + std::to_string(c) + " encloses no centroid and cuts no edge");
  }

  // Projection can pull a kept triangle into a hole (all three nodes on the
  // circle). Such triangles are removed and the projection is redone.
  FineMesh mesh;
  for (int pass = 0;; ++pass) {
    mesh = FineMesh{};
    mesh.perforations = perforations;
    mesh.h = h;
    std::vector<int> renumber(grid.size(), -1);
    std::vector<int> origin;
    std::vector<std::size_t> kept;
    std::vector<char> used(grid.size(), 0);
    for (std::size_t t = 0; t < tris.size(); ++t)
      if (removed_by[t] < 0)
        for (int v : tris[t]) used[v] = 1;
    for (std::size_t v = 0; v < grid.size(); ++v)
      if (used[v]) {
        renumber[v] = static_cast<int>(mesh.nodes.size());
        mesh.nodes.push_back(grid[v]);
      }
    for (std::size_t t = 0; t < tris.size(); ++t) {
      if (removed_by[t] >= 0) continue;
      mesh.triangles.push_back({renumber[tris[t][0]], renumber[tris[t][1]], renumber[tris[t][2]]});
      mesh.triangle_block.push_back(blocks[t]);
      kept.push_back(t);
    }
    mesh.build_edges(EdgeMarker::dirichlet);

    // Hole-boundary nodes, and nodes within h/2 of a circle, are projected onto it.
    std::vector<int> target(mesh.num_nodes(), -1);
    for (const auto& e : mesh.edges) {
      if (e.marker != EdgeMarker::perforation) continue;
      for (int v : e.nodes) {
        if (target[v] >= 0 && target[v] != e.circle)
          throw SnapDegeneracy("node " + std::to_string(v) + " borders two perforations");
        target[v] = e.circle;
      }
    }
    for (std::size_t v = 0; v < mesh.num_nodes(); ++v) {
      for (std::size_t c = 0; c < circles.size(); ++c) {
        const double r = norm(mesh.nodes[v] - circles[c].center);
        if (r >= circles[c].radius + 0.5 * h) continue;
        if (target[v] >= 0 && target[v] != static_cast<int>(c))
          throw SnapDegeneracy("node " + std::to_string(v) + " lies near two perforations");
        target[v] = static_cast<int>(c);
      }
    }
    for (std::size_t v = 0; v < mesh.num_nodes(); ++v) {
      if (target[v] < 0) continue;
      const Circle& c = circles[target[v]];
      Point d = mesh.nodes[v] - c.center;
      double r = norm(d);
      if (on_outer_boundary(mesh.nodes[v]))
        throw SnapDegeneracy("perforation " + std::to_string(target[v]) + " would move an outer-boundary node");
      if (r < 1e-14) throw SnapDegeneracy("node at a perforation centre cannot be projected");
      mesh.nodes[v] = c.center + (c.radius / r) * d;
    }

    bool changed = false;
    for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
      const auto& tri = mesh.triangles[t];
      Point g = (1.0 / 3.0) * (mesh.nodes[tri[0]] + mesh.nodes[tri[1]] + mesh.nodes[tri[2]]);
      for (std::size_t c = 0; c < circles.size(); ++c) {
        Point d = g - circles[c].center;
        if (dot(d, d) < circles[c].radius * circles[c].radius * (1.0 - 1e-9)) {
          removed_by[kept[t]] = static_cast<int>(c);
          changed = true;
          break;
        }
      }
    }
    if (!changed) break;
    if (pass > 8) throw SnapDegeneracy("projection does not settle");
  }
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t)
    if (mesh.triangle_area(static_cast<int>(t)) < 1e-10 * h * h)
    {
      std::ostringstream msg;
      msg << "triangle " << t << " degenerates after snapping:";
      for (int v : mesh.triangles[t]) msg << " (" << mesh.nodes[v].x << ", " << mesh.nodes[v].y << ")";
      throw SnapDegeneracy(msg.str());
    }

  mesh.validate();
  CoarsePartition part = build_partition(mesh, H);
  return {std::move(mesh), std::move(part)};
}

std::vector<int> expand_by_vertex_ring(const FineMesh& mesh, std::span<const int> triangles) {
  return expand_once(mesh, node_to_triangles(mesh), triangles);
}

CoarsePartition build_oversampled(const FineMesh& mesh, CoarsePartition partition, int layers) {
  if (layers < 0) throw std::invalid_argument("layers must be nonnegative");
  auto adj = node_to_triangles(mesh);
  partition.layers = layers;
  partition.oversampled.resize(partition.num_blocks());
  for (std::size_t b = 0; b < partition.num_blocks(); ++b) {
    std::vector<int> current = partition.blocks[b].triangles;
    std::sort(current.begin(), current.end());
    for (int l = 0; l < layers; ++l) current = expand_once(mesh, adj, current);
    partition.oversampled[b] = std::move(current);
  }
  return partition;
}

PerforationSet preset_perforations(GeometryPreset preset, double H) {
  PerforationSet set;
  const int nc = static_cast<int>(std::lround(1.0 / H));
  if (preset == GeometryPreset::small_inclusions) {
    const double rin = 0.5 * H * (2.0 - std::sqrt(2.0));
    const double radii[3] = {0.13, 0.16, 0.19};
    for (int J = 0; J < nc; ++J)
      for (int I = 0; I < nc; ++I)
        for (int tri = 0; tri < 2; ++tri) {
          Point origin{I * H, J * H};
          Point local = tri == 0 ? Point{H - rin, rin} : Point{rin, H - rin};
          double r = radii[(7 * I + 3 * J + tri) % 3] * H;
          set.circles.push_back({origin + local, r});
        }
  } else {
    const double radii[7] = {0.35, 0.12, 0.28, 0.35, 0.12, 0.22, 0.30};
    const double shift[5] = {0.0, 0.04, -0.04, 0.02, -0.02};
    for (int J = 0; J < nc; ++J)
      for (int I = 0; I < nc; ++I) {
        double r = radii[(5 * I + 11 * J) % 7];
        double sx = r > 0.3 ? 0.0 : shift[(3 * I + J) % 5];
        double sy = r > 0.3 ? 0.0 : shift[(I + 2 * J) % 5];
        set.circles.push_back({{(I + 0.5 + sx) * H, (J + 0.5 + sy) * H}, r * H});
      }
  }
  return set;
}

BlockShape preset_block_shape(GeometryPreset preset) {
  return preset == GeometryPreset::small_inclusions ? BlockShape::triangular : BlockShape::rectangular;
}

std::optional<GeometryPreset> parse_preset(const std::string& name) {
  if (name == "small_inclusions") return GeometryPreset::small_inclusions;
  if (name == "multi_size") return GeometryPreset::multi_size;
  return std::nullopt;
}

std::string to_string(GeometryPreset preset) {
  return preset == GeometryPreset::small_inclusions ? "small_inclusions" : "multi_size";
}

std::string to_string(BlockShape shape) { return shape == BlockShape::triangular ? "triangular" : "rectangular"; }

std::optional<BlockShape> parse_block_shape(const std::string& name) {
  if (name == "triangular") return BlockShape::triangular;
  if (name == "rectangular") return BlockShape::rectangular;
  return std::nullopt;
}

}  // namespace msstokes
