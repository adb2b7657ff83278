// Copyright 2026 The msstokes Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace msstokes {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
double norm(Point a);

struct Circle {
  Point center;
  double radius = 0.0;
};

/// Circular holes B^eps inside the unit square.
struct PerforationSet {
  std::vector<Circle> circles;

  /// Throws InvariantViolation when a circle touches the outer boundary or
  /// two circles intersect.
  void validate() const;
};

enum class EdgeMarker : std::uint8_t { interior = 0, dirichlet = 1, neumann = 2, perforation = 3 };

/// Sides of the unit square, used to split the outer boundary into Γ_D / Γ_N.
enum class Side : std::uint8_t { left = 0, right = 1, bottom = 2, top = 3, none = 4 };

enum class BlockShape : std::uint8_t { triangular, rectangular };

struct FineEdge {
  std::array<int, 2> nodes{};
  EdgeMarker marker = EdgeMarker::interior;
  /// Adjacent triangles; second entry is -1 on the boundary.
  std::array<int, 2> triangles{-1, -1};
  /// Perforation index for perforation edges, -1 otherwise.
  int circle = -1;
};

/// Fitted triangulation of the perforated domain.
///
/// Triangles are counterclockwise. `triangle_edges[t][k]` is the edge from
/// local vertex k to vertex k+1 (mod 3). `triangle_block` stores the coarse
/// block a triangle belongs to.
struct FineMesh {
  std::vector<Point> nodes;
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> triangle_block;
  std::vector<FineEdge> edges;
  std::vector<std::array<int, 3>> triangle_edges;
  double h = 0.0;
  PerforationSet perforations;

  std::size_t num_nodes() const { return nodes.size(); }
  std::size_t num_triangles() const { return triangles.size(); }

  double triangle_area(int t) const;
  Point centroid(int t) const;
  double edge_length(int e) const;

  /// True for nodes lying on a perforation edge (velocity pinned to zero).
  std::vector<bool> perforation_nodes() const;

  /// Side of the unit square a boundary edge lies on (Side::none otherwise).
  Side outer_side(int e) const;

  /// Rebuilds `edges` and `triangle_edges` from the triangle list. Boundary
  /// edges on the unit-square boundary receive `outer_marker`; all other
  /// boundary edges are perforation edges, attached to the nearest circle.
  void build_edges(EdgeMarker outer_marker = EdgeMarker::dirichlet);

  /// Checks every FineMesh invariant; throws InvariantViolation naming the
  /// first failed check.
  void validate() const;

  /// 64-bit FNV-1a fingerprint of nodes, triangles and block ids.
  std::uint64_t hash() const;
};

struct CoarseEdge {
  /// Fine edges ordered along the edge.
  std::vector<int> fine_edges;
  /// K+ and K-; `minus` is -1 for boundary edges.
  int plus = -1;
  int minus = -1;
  Side side = Side::none;
  /// Nominal unit normal pointing from K+ to K- (outward for boundary edges).
  Point normal;
  double length = 0.0;

  bool boundary() const { return minus < 0; }
};

struct CoarseBlock {
  std::vector<int> triangles;
  /// Coarse edges on the block boundary.
  std::vector<int> edges;
  double area = 0.0;
};

/// Coarse partition T^H built on top of a fine mesh.
struct CoarsePartition {
  double H = 0.0;
  std::vector<CoarseBlock> blocks;
  std::vector<CoarseEdge> edges;
  /// Oversampled triangle sets K_i^+ (sorted), one per block.
  std::vector<std::vector<int>> oversampled;
  int layers = 0;

  std::size_t num_blocks() const { return blocks.size(); }
  std::size_t num_edges() const { return edges.size(); }
  std::size_t num_interior_edges() const;

  /// Outward unit normal of fine edge `fine_edge` seen from `block`.
  Point outward_normal(const FineMesh& mesh, int fine_edge, int block) const;
};

/// Derives blocks and coarse edges from `mesh.triangle_block`. Interior coarse
/// edges group fine edges by block pair; boundary ones by (block, side).
/// K+ is the block with the smaller id.
CoarsePartition build_partition(const FineMesh& mesh, double H);

/// Generates the structured background grid, removes triangles whose centroid
/// is inside a perforation and snaps hole-boundary nodes onto the circles.
std::pair<FineMesh, CoarsePartition> generate_perforated_mesh(const PerforationSet& perforations,
                                                              double H, int refinement,
                                                              BlockShape shape);

/// Extends every block by `layers` rings of vertex-adjacent fine triangles.
CoarsePartition build_oversampled(const FineMesh& mesh, CoarsePartition partition, int layers);

/// Vertex-adjacency expansion of a triangle set (one ring).
std::vector<int> expand_by_vertex_ring(const FineMesh& mesh, std::span<const int> triangles);

enum class GeometryPreset { small_inclusions, multi_size };

/// Deterministic perforation layouts for the two experiment families; the
/// circles stay clear of the coarse grid lines.
PerforationSet preset_perforations(GeometryPreset preset, double H);
BlockShape preset_block_shape(GeometryPreset preset);

std::optional<GeometryPreset> parse_preset(const std::string& name);
std::string to_string(GeometryPreset preset);
std::string to_string(BlockShape shape);
std::optional<BlockShape> parse_block_shape(const std::string& name);

}  // namespace msstokes
