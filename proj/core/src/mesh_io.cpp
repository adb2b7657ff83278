// Copyright 2026 The msstokes Authors.
// SPDX-License-Identifier: Apache-2.0

#include "msstokes/mesh_io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "msstokes/errors.hpp"

namespace msstokes {

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++number_;
      auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos) continue;
      line = line.substr(first);
      while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
      return true;
    }
    return false;
  }

  std::string expect_line(const char* what) {
    std::string line;
    if (!next(line)) fail(std::string("unexpected end of file, expected ") + what);
    return line;
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, number_); }
  int number() const { return number_; }

 private:
  std::istream& in_;
  int number_ = 0;
};

template <class... T>
void parse_fields(LineReader& reader, const std::string& line, T&... fields) {
  std::istringstream ss(line);
  ((ss >> fields), ...);
  if (ss.fail()) reader.fail("malformed record '" + line + "'");
  std::string rest;
  if (ss >> rest) reader.fail("trailing data in record '" + line + "'");
}

long parse_count(LineReader& reader) {
  std::string line = reader.expect_line("count");
  long n = -1;
  parse_fields(reader, line, n);
  if (n < 0) reader.fail("negative count");
  return n;
}

void expect_end(LineReader& reader, const std::string& name) {
  std::string line = reader.expect_line(("$End" + name).c_str());
  if (line != "$End" + name) reader.fail("expected $End" + name + ", found '" + line + "'");
}

EdgeMarker marker_from_int(LineReader& reader, int m) {
  if (m < 0 || m > 3) reader.fail("unknown edge marker " + std::to_string(m));
  return static_cast<EdgeMarker>(m);
}

// Applies explicitly listed markers to the rebuilt edge table.
void apply_markers(FineMesh& mesh, const std::vector<std::tuple<int, int, EdgeMarker>>& listed) {
  std::map<std::pair<int, int>, int> index;
  for (std::size_t e = 0; e < mesh.edges.size(); ++e) {
    auto key = std::minmax(mesh.edges[e].nodes[0], mesh.edges[e].nodes[1]);
    index[{key.first, key.second}] = static_cast<int>(e);
  }
  for (const auto& [a, b, marker] : listed) {
    auto key = std::minmax(a, b);
    auto it = index.find({key.first, key.second});
    if (it == index.end())
      throw InvariantViolation("edge_list", "listed edge (" + std::to_string(a) + "," + std::to_string(b) +
                                                ") is not an edge of any triangle");
    FineEdge& e = mesh.edges[it->second];
    bool boundary = e.triangles[1] < 0;
    if (boundary != (marker != EdgeMarker::interior))
      throw InvariantViolation("edge_markers", "edge (" + std::to_string(a) + "," + std::to_string(b) +
                                                   ") marker disagrees with triangle adjacency");
    if (marker == EdgeMarker::perforation && e.marker != EdgeMarker::perforation)
      throw InvariantViolation("edge_markers", "perforation marker on an outer-boundary edge");
    if ((marker == EdgeMarker::dirichlet || marker == EdgeMarker::neumann) && e.marker == EdgeMarker::perforation)
      throw InvariantViolation("edge_markers", "outer marker on an edge off the unit-square boundary");
    e.marker = marker;
  }
}

FineMesh read_native(LineReader& reader, std::string first) {
  FineMesh mesh;
  std::vector<std::tuple<int, int, EdgeMarker>> listed;
  bool have_nodes = false, have_triangles = false;
  std::string line = std::move(first);
  do {
    if (line == "$MeshParameters") {
      std::string rec = reader.expect_line("h");
      parse_fields(reader, rec, mesh.h);
      expect_end(reader, "MeshParameters");
    } else if (line == "$Nodes") {
      long n = parse_count(reader);
      mesh.nodes.resize(n);
      for (long i = 0; i < n; ++i) {
        long idx;
        Point p;
        parse_fields(reader, reader.expect_line("node"), idx, p.x, p.y);
        if (idx != i) reader.fail("node indices must be consecutive from 0");
        mesh.nodes[i] = p;
      }
      expect_end(reader, "Nodes");
      have_nodes = true;
    } else if (line == "$Triangles") {
      long n = parse_count(reader);
      for (long i = 0; i < n; ++i) {
        long idx;
        int a, b, c, blk;
        parse_fields(reader, reader.expect_line("triangle"), idx, a, b, c, blk);
        if (idx != i) reader.fail("triangle indices must be consecutive from 0");
        for (int v : {a, b, c})
          if (v < 0 || static_cast<std::size_t>(v) >= mesh.nodes.size())
            reader.fail("triangle references unknown node " + std::to_string(v));
        mesh.triangles.push_back({a, b, c});
        mesh.triangle_block.push_back(blk);
      }
      expect_end(reader, "Triangles");
      have_triangles = true;
    } else if (line == "$Edges") {
      long n = parse_count(reader);
      for (long i = 0; i < n; ++i) {
        long idx;
        int a, b, m;
        parse_fields(reader, reader.expect_line("edge"), idx, a, b, m);
        if (idx != i) reader.fail("edge indices must be consecutive from 0");
        listed.emplace_back(a, b, marker_from_int(reader, m));
      }
      expect_end(reader, "Edges");
    } else if (line == "$Perforations") {
      long n = parse_count(reader);
      for (long i = 0; i < n; ++i) {
        long idx;
        Circle c;
        parse_fields(reader, reader.expect_line("perforation"), idx, c.center.x, c.center.y, c.radius);
        mesh.perforations.circles.push_back(c);
      }
      expect_end(reader, "Perforations");
    } else {
      reader.fail("unknown section '" + line + "'");
    }
  } while (reader.next(line));
  if (!have_nodes || !have_triangles) reader.fail("missing $Nodes or $Triangles section");
  mesh.build_edges(EdgeMarker::dirichlet);
  apply_markers(mesh, listed);
  if (mesh.h <= 0.0) {
    double longest = 0.0;
    for (std::size_t e = 0; e < mesh.edges.size(); ++e) longest = std::max(longest, mesh.edge_length(static_cast<int>(e)));
    mesh.h = longest / std::sqrt(2.0);
  }
  return mesh;
}

FineMesh read_gmsh2(LineReader& reader) {
  // $MeshFormat already consumed.
  std::string fmt = reader.expect_line("format");
  {
    std::istringstream ss(fmt);
    double version = 0;
    ss >> version;
    if (version < 2.0 || version >= 3.0) reader.fail("only Gmsh v2 ASCII is supported");
    int filetype = -1;
    ss >> filetype;
    if (filetype != 0) reader.fail("binary Gmsh files are not supported");
  }
  expect_end(reader, "MeshFormat");
  FineMesh mesh;
  std::map<long, int> node_id;
  std::vector<std::tuple<int, int, EdgeMarker>> listed;
  std::string line;
  while (reader.next(line)) {
    if (line == "$Nodes") {
      long n = parse_count(reader);
      for (long i = 0; i < n; ++i) {
        long id;
        double x, y, z;
        parse_fields(reader, reader.expect_line("node"), id, x, y, z);
        node_id[id] = static_cast<int>(mesh.nodes.size());
        mesh.nodes.push_back({x, y});
      }
      expect_end(reader, "Nodes");
    } else if (line == "$Elements") {
      long n = parse_count(reader);
      for (long i = 0; i < n; ++i) {
        std::istringstream ss(reader.expect_line("element"));
        long id;
        int type, ntags;
        ss >> id >> type >> ntags;
        std::vector<long> tags(std::max(ntags, 0));
        for (auto& t : tags) ss >> t;
        int nv = type == 2 ? 3 : type == 1 ? 2 : type == 15 ? 1 : -1;
        if (nv < 0) reader.fail("unsupported element type " + std::to_string(type));
        std::vector<int> v(nv);
        for (auto& x : v) {
          long raw;
          ss >> raw;
          auto it = node_id.find(raw);
          if (ss.fail() || it == node_id.end()) reader.fail("element references unknown node");
          x = it->second;
        }
        if (ss.fail()) reader.fail("malformed element record");
        long physical = tags.empty() ? 0 : tags[0];
        if (type == 2) {
          mesh.triangles.push_back({v[0], v[1], v[2]});
          mesh.triangle_block.push_back(physical >= 1 ? static_cast<int>(physical - 1) : 0);
        } else if (type == 1 && physical >= 1 && physical <= 3) {
          listed.emplace_back(v[0], v[1], static_cast<EdgeMarker>(physical));
        }
      }
      expect_end(reader, "Elements");
    } else if (!line.empty() && line[0] == '$' && line.rfind("$End", 0) != 0) {
      std::string name = line.substr(1);
      std::string skip;
      while (reader.next(skip) && skip != "$End" + name) {
      }
    }
  }
  // Gmsh does not guarantee orientation.
  for (auto& tri : mesh.triangles) {
    Point a = mesh.nodes[tri[0]], b = mesh.nodes[tri[1]], c = mesh.nodes[tri[2]];
    if (cross(b - a, c - a) < 0.0) std::swap(tri[1], tri[2]);
  }
  mesh.build_edges(EdgeMarker::dirichlet);
  apply_markers(mesh, listed);
  double longest = 0.0;
  for (std::size_t e = 0; e < mesh.edges.size(); ++e) longest = std::max(longest, mesh.edge_length(static_cast<int>(e)));
  mesh.h = longest / std::sqrt(2.0);
  return mesh;
}

}  // namespace

void write_mesh(std::ostream& out, const FineMesh& mesh) {
  out << std::setprecision(17);
  out << "$MeshParameters\n" << mesh.h << "\n$EndMeshParameters\n";
  out << "$Nodes\n" << mesh.nodes.size() << "\n";
  for (std::size_t i = 0; i < mesh.nodes.size(); ++i)
    out << i << ' ' << mesh.nodes[i].x << ' ' << mesh.nodes[i].y << '\n';
  out << "$EndNodes\n$Triangles\n" << mesh.triangles.size() << "\n";
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    out << t << ' ' << tri[0] << ' ' << tri[1] << ' ' << tri[2] << ' ' << mesh.triangle_block[t] << '\n';
  }
  out << "$EndTriangles\n$Edges\n" << mesh.edges.size() << "\n";
  for (std::size_t e = 0; e < mesh.edges.size(); ++e) {
    const auto& edge = mesh.edges[e];
    out << e << ' ' << edge.nodes[0] << ' ' << edge.nodes[1] << ' ' << static_cast<int>(edge.marker) << '\n';
  }
  out << "$EndEdges\n";
  if (!mesh.perforations.circles.empty()) {
    out << "$Perforations\n" << mesh.perforations.circles.size() << "\n";
    for (std::size_t c = 0; c < mesh.perforations.circles.size(); ++c) {
      const auto& circ = mesh.perforations.circles[c];
      out << c << ' ' << circ.center.x << ' ' << circ.center.y << ' ' << circ.radius << '\n';
    }
    out << "$EndPerforations\n";
  }
}

void write_mesh(const std::filesystem::path& path, const FineMesh& mesh) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_mesh(out, mesh);
}

FineMesh read_mesh(std::istream& in) {
  LineReader reader(in);
  std::string first;
  if (!reader.next(first)) reader.fail("empty mesh file");
  FineMesh mesh = first == "$MeshFormat" ? read_gmsh2(reader) : read_native(reader, first);
  mesh.validate();
  return mesh;
}

FineMesh import_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open mesh file " + path.string());
  return read_mesh(in);
}

}  // namespace msstokes
