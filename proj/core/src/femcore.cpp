// Copyright 2026 The msstokes Authors.
// SPDX-License-Identifier: Apache-2.0

#include "msstokes/femcore.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "msstokes/errors.hpp"

namespace msstokes {

TriangleGeometry triangle_geometry(const Vertices& v) {
  TriangleGeometry g;
  g.vertices = v;
  double twice = cross(v[1] - v[0], v[2] - v[0]);
  if (!(twice > 0.0)) throw DegenerateElement("triangle with non-positive area");
  g.area = 0.5 * twice;
  // ∇λ_i is the inward edge normal of the opposite edge over twice the area.
  for (int i = 0; i < 3; ++i) {
    Point a = v[(i + 1) % 3];
    Point b = v[(i + 2) % 3];
    g.grad[i] = {(a.y - b.y) / twice, (b.x - a.x) / twice};
  }
  g.diameter = std::max({norm(v[1] - v[0]), norm(v[2] - v[1]), norm(v[0] - v[2])});
  return g;
}

TriangleGeometry triangle_geometry(const FineMesh& mesh, int triangle) {
  const auto& t = mesh.triangles[triangle];
  return triangle_geometry(Vertices{mesh.nodes[t[0]], mesh.nodes[t[1]], mesh.nodes[t[2]]});
}

Matrix6 element_laplacian(const Vertices& v) {
  const TriangleGeometry g = triangle_geometry(v);
  Matrix6 k = Matrix6::Zero();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double val = g.area * dot(g.grad[i], g.grad[j]);
      k(2 * i, 2 * j) = val;
      k(2 * i + 1, 2 * j + 1) = val;
    }
  return k;
}

Row6 element_divergence(const Vertices& v) {
  const TriangleGeometry g = triangle_geometry(v);
  Row6 r;
  for (int i = 0; i < 3; ++i) {
    r(2 * i) = -g.area * g.grad[i].x;
    r(2 * i + 1) = -g.area * g.grad[i].y;
  }
  return r;
}

Eigen::Matrix3d element_mass(const Vertices& v) {
  const TriangleGeometry g = triangle_geometry(v);
  Eigen::Matrix3d m;
  m.setConstant(g.area / 12.0);
  m.diagonal().setConstant(g.area / 6.0);
  return m;
}

Eigen::Matrix3d element_pressure_stabilization(const Vertices& v) {
  const TriangleGeometry g = triangle_geometry(v);
  Eigen::Matrix3d c;
  const double scale = g.diameter * g.diameter * g.area;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) c(i, j) = scale * dot(g.grad[i], g.grad[j]);
  return c;
}

std::span<const QuadraturePoint> triangle_quadrature() {
  static const QuadraturePoint rule[3] = {
      {{2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0}, 1.0 / 3.0},
      {{1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0}, 1.0 / 3.0},
      {{1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0}, 1.0 / 3.0},
  };
  return rule;
}

std::array<std::pair<double, double>, 2> edge_quadrature() {
  const double d = 0.5 / std::sqrt(3.0);
  return {{{0.5 - d, 0.5}, {0.5 + d, 0.5}}};
}

Subdomain::Subdomain(const FineMesh& mesh, std::vector<int> triangles)
    : mesh_(&mesh), triangles_(std::move(triangles)) {
  std::sort(triangles_.begin(), triangles_.end());
  for (int t : triangles_)
    for (int v : mesh.triangles[t]) nodes_.push_back(v);
  std::sort(nodes_.begin(), nodes_.end());
  nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());

  local_tris_.reserve(triangles_.size());
  for (int t : triangles_) {
    local_tris_.push_back(local_triangle(t));
    area_ += mesh.triangle_area(t);
  }

  std::unordered_map<int, int> edge_count;
  for (int t : triangles_)
    for (int e : mesh.triangle_edges[t]) ++edge_count[e];
  std::vector<char> on_boundary(nodes_.size(), 0);
  for (std::size_t i = 0; i < triangles_.size(); ++i) {
    int t = triangles_[i];
    for (int k = 0; k < 3; ++k) {
      int e = mesh.triangle_edges[t][k];
      if (edge_count[e] != 1) continue;
      BoundaryEdge be;
      be.edge = e;
      be.triangle = t;
      be.nodes = {local_tris_[i][k], local_tris_[i][(k + 1) % 3]};
      Point a = mesh.nodes[mesh.triangles[t][k]];
      Point b = mesh.nodes[mesh.triangles[t][(k + 1) % 3]];
      be.length = norm(b - a);
      be.normal = {(b.y - a.y) / be.length, -(b.x - a.x) / be.length};
      boundary_edges_.push_back(be);
      on_boundary[be.nodes[0]] = on_boundary[be.nodes[1]] = 1;
    }
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (on_boundary[i]) boundary_nodes_.push_back(static_cast<int>(i));
}

int Subdomain::local(int global_node) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), global_node);
  if (it == nodes_.end() || *it != global_node) return -1;
  return static_cast<int>(it - nodes_.begin());
}

std::array<int, 3> Subdomain::local_triangle(int t) const {
  const auto& tri = mesh_->triangles[t];
  return {local(tri[0]), local(tri[1]), local(tri[2])};
}

SparseMatrix Subdomain::stiffness() const {
  Triplets trip;
  trip.reserve(triangles_.size() * 18);
  for (std::size_t i = 0; i < triangles_.size(); ++i) {
    const TriangleGeometry g = triangle_geometry(*mesh_, triangles_[i]);
    const auto& lt = local_tris_[i];
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        double val = g.area * dot(g.grad[a], g.grad[b]);
        for (int c = 0; c < 2; ++c) trip.emplace_back(2 * lt[a] + c, 2 * lt[b] + c, val);
      }
  }
  SparseMatrix k(num_dofs(), num_dofs());
  k.setFromTriplets(trip.begin(), trip.end());
  return k;
}

SparseMatrix Subdomain::mass() const {
  Triplets trip;
  trip.reserve(triangles_.size() * 18);
  for (std::size_t i = 0; i < triangles_.size(); ++i) {
    const double area = mesh_->triangle_area(triangles_[i]);
    const auto& lt = local_tris_[i];
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        double val = area / (a == b ? 6.0 : 12.0);
        for (int c = 0; c < 2; ++c) trip.emplace_back(2 * lt[a] + c, 2 * lt[b] + c, val);
      }
  }
  SparseMatrix m(num_dofs(), num_dofs());
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

SparseMatrix Subdomain::boundary_mass() const {
  Triplets trip;
  for (const auto& be : boundary_edges_)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        double val = be.length / (a == b ? 3.0 : 6.0);
        for (int c = 0; c < 2; ++c) trip.emplace_back(2 * be.nodes[a] + c, 2 * be.nodes[b] + c, val);
      }
  SparseMatrix m(num_dofs(), num_dofs());
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

Eigen::RowVectorXd Subdomain::boundary_flux() const {
  Eigen::RowVectorXd w = Eigen::RowVectorXd::Zero(num_dofs());
  for (const auto& be : boundary_edges_)
    for (int a : be.nodes) {
      w(2 * a) += 0.5 * be.length * be.normal.x;
      w(2 * a + 1) += 0.5 * be.length * be.normal.y;
    }
  return w;
}

}  // namespace msstokes
