// Copyright 2026 The msstokes Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "msstokes/errors.hpp"
#include "msstokes/mesh_io.hpp"
#include "test_support.hpp"

namespace msstokes {
namespace {

const char* kTwoTriangles = R"($Nodes
4
0 0 0
1 1 0
2 1 1
3 0 1
$EndNodes
$Triangles
2
0 0 1 2 0
1 0 2 3 0
$EndTriangles
)";

TEST(MeshIo, TwoTriangleSquare) {
  std::istringstream in(kTwoTriangles);
  const FineMesh mesh = read_mesh(in);
  EXPECT_EQ(mesh.num_nodes(), 4u);
  EXPECT_EQ(mesh.num_triangles(), 2u);
  int boundary = 0;
  for (const auto& e : mesh.edges) boundary += e.marker == EdgeMarker::dirichlet;
  EXPECT_EQ(boundary, 4);
  EXPECT_EQ(mesh.edges.size(), 5u);
}

TEST(MeshIo, RoundTripOfGeneratedMesh) {
  PerforationSet set{{{{0.5, 0.5}, 0.12}}};
  auto [mesh, part] = generate_perforated_mesh(set, 0.25, 8, BlockShape::rectangular);
  std::stringstream buf;
  write_mesh(buf, mesh);
  const FineMesh back = read_mesh(buf);
  ASSERT_EQ(back.num_nodes(), mesh.num_nodes());
  ASSERT_EQ(back.num_triangles(), mesh.num_triangles());
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
    EXPECT_EQ(back.nodes[i].x, mesh.nodes[i].x);
    EXPECT_EQ(back.nodes[i].y, mesh.nodes[i].y);
  }
  EXPECT_EQ(back.triangles, mesh.triangles);
  EXPECT_EQ(back.triangle_block, mesh.triangle_block);
  EXPECT_EQ(back.h, mesh.h);
  ASSERT_EQ(back.edges.size(), mesh.edges.size());
  for (std::size_t e = 0; e < mesh.edges.size(); ++e) EXPECT_EQ(back.edges[e].marker, mesh.edges[e].marker);
  EXPECT_EQ(back.hash(), mesh.hash());

  const auto path = std::filesystem::temp_directory_path() / "msstokes_roundtrip.msh";
  write_mesh(path, mesh);
  EXPECT_EQ(import_mesh(path).hash(), mesh.hash());
  std::filesystem::remove(path);
}

TEST(MeshIo, DuplicatedTriangleIsNonConforming) {
  std::string text = kTwoTriangles;
  text.replace(text.find("2\n0 0 1 2 0"), 11, "3\n0 0 1 2 0");
  text.replace(text.find("$EndTriangles"), 0, "2 0 1 2 0\n");
  std::istringstream in(text);
  try {
    read_mesh(in);
    FAIL() << "expected InvariantViolation";
  } catch (const InvariantViolation& e) {
    EXPECT_EQ(e.check(), "conforming");
  }
}

TEST(MeshIo, ClockwiseTriangleIsRejected) {
  std::string text = kTwoTriangles;
  text.replace(text.find("0 0 1 2 0"), 9, "0 0 2 1 0");
  std::istringstream in(text);
  EXPECT_THROW(read_mesh(in), InvariantViolation);
}

TEST(MeshIo, ParseErrorCarriesLineNumber) {
  std::string text = kTwoTriangles;
  text.replace(text.find("2 1 1"), 5, "2 1 x");
  std::istringstream in(text);
  try {
    read_mesh(in);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 5);
  }
}

TEST(MeshIo, MissingSectionEnd) {
  std::istringstream in("$Nodes\n1\n0 0 0\n$Triangles\n");
  EXPECT_THROW(read_mesh(in), ParseError);
}

TEST(MeshIo, NeumannMarkersAreKept) {
  std::string text = kTwoTriangles;
  text += "$Edges\n1\n0 0 1 2\n$EndEdges\n";
  std::istringstream in(text);
  const FineMesh mesh = read_mesh(in);
  int neumann = 0;
  for (const auto& e : mesh.edges) neumann += e.marker == EdgeMarker::neumann;
  EXPECT_EQ(neumann, 1);
}

TEST(MeshIo, GmshV2) {
  std::istringstream in(R"($MeshFormat
2.2 0 8
$EndMeshFormat
$Nodes
4
1 0 0 0
2 1 0 0
3 1 1 0
4 0 1 0
$EndNodes
$Elements
3
1 2 2 1 1 1 3 2
2 2 2 1 1 1 4 3
3 1 2 2 1 1 2
$EndElements
)");
  const FineMesh mesh = read_mesh(in);
  EXPECT_EQ(mesh.num_triangles(), 2u);
  for (std::size_t t = 0; t < 2; ++t) EXPECT_GT(mesh.triangle_area(static_cast<int>(t)), 0.0);
  int neumann = 0;
  for (const auto& e : mesh.edges) neumann += e.marker == EdgeMarker::neumann;
  EXPECT_EQ(neumann, 1);
}

}  // namespace
}  // namespace msstokes
