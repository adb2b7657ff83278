// Copyright 2026 The msstokes Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <array>
#include <span>
#include <vector>

#include "msstokes/geometry.hpp"

namespace msstokes {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplets = std::vector<Eigen::Triplet<double>>;
using Matrix6 = Eigen::Matrix<double, 6, 6>;
using Row6 = Eigen::Matrix<double, 1, 6>;
using Vertices = std::array<Point, 3>;

// Local velocity DOFs on a triangle are ordered (vertex, component):
// [v0x, v0y, v1x, v1y, v2x, v2y].

/// Barycentric gradients, area and diameter of a P1 triangle.
struct TriangleGeometry {
  Vertices vertices;
  double area = 0.0;
  std::array<Point, 3> grad;
  double diameter = 0.0;
};

/// Throws DegenerateElement when the signed area is not positive.
TriangleGeometry triangle_geometry(const Vertices& v);
TriangleGeometry triangle_geometry(const FineMesh& mesh, int triangle);

/// ∫_T ∇u : ∇v for vector P1 fields.
Matrix6 element_laplacian(const Vertices& v);
/// Row r with r · v = -∫_T div v.
Row6 element_divergence(const Vertices& v);
/// Scalar P1 mass matrix ∫_T φ_i φ_j.
Eigen::Matrix3d element_mass(const Vertices& v);
/// Brezzi–Pitkäranta pressure term h_T² ∫_T ∇φ_i · ∇φ_j (unscaled).
Eigen::Matrix3d element_pressure_stabilization(const Vertices& v);

struct QuadraturePoint {
  std::array<double, 3> barycentric;
  double weight;  // relative to the element measure
};

/// Degree-2 Gauss rule on triangles (3 interior points).
std::span<const QuadraturePoint> triangle_quadrature();
/// Two-point Gauss rule on [0, 1]: positions and weights (sum to 1).
std::array<std::pair<double, double>, 2> edge_quadrature();

/// Vector field with per-node coefficients (2 per node) on a triangle set.
struct FineFunction {
  std::vector<int> triangles;
  std::vector<int> nodes;
  Eigen::VectorXd coefficients;
};

/// Boundary edge of a subdomain, with its outward unit normal.
struct BoundaryEdge {
  int edge = -1;
  int triangle = -1;
  std::array<int, 2> nodes{};  // local node indices, counterclockwise w.r.t. the triangle
  Point normal;
  double length = 0.0;
};

/// A set of fine triangles with local node numbering and P1 operators.
class Subdomain {
 public:
  Subdomain(const FineMesh& mesh, std::vector<int> triangles);

  const FineMesh& mesh() const { return *mesh_; }
  std::span<const int> triangles() const { return triangles_; }
  std::span<const int> nodes() const { return nodes_; }
  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_dofs() const { return 2 * nodes_.size(); }
  double area() const { return area_; }

  /// Local index of a global node, -1 if absent.
  int local(int global_node) const;
  /// Local vertex indices of triangle `t` (global triangle id).
  std::array<int, 3> local_triangle(int t) const;

  std::span<const BoundaryEdge> boundary_edges() const { return boundary_edges_; }
  /// Sorted local indices of nodes on ∂D.
  std::span<const int> boundary_nodes() const { return boundary_nodes_; }

  /// Vector Laplacian ∫_D ∇u : ∇v.
  SparseMatrix stiffness() const;
  /// Vector mass ∫_D u · v.
  SparseMatrix mass() const;
  /// Boundary mass ∫_∂D u · v.
  SparseMatrix boundary_mass() const;
  /// Row vector w with w · u = ∫_∂D u · n for a nodal vector u on D.
  Eigen::RowVectorXd boundary_flux() const;

 private:
  const FineMesh* mesh_;
  std::vector<int> triangles_;
  std::vector<int> nodes_;
  std::vector<std::array<int, 3>> local_tris_;
  std::vector<BoundaryEdge> boundary_edges_;
  std::vector<int> boundary_nodes_;
  double area_ = 0.0;
};

}  // namespace msstokes
