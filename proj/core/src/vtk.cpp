// Copyright 2026 The msstokes Authors.
// SPDX-License-Identifier: Apache-2.0

#include "msstokes/vtk.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include "msstokes/errors.hpp"

namespace msstokes {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void header(std::ostream& out, const char* title) {
  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
}

template <class Fn>
void to_file(const std::filesystem::path& path, Fn&& fn) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  fn(out);
}

}  // namespace

void write_mesh_vtk(std::ostream& out, const FineMesh& mesh) {
  header(out, "msstokes mesh");
  out << "POINTS " << mesh.num_nodes() << " double\n";
  for (const auto& p : mesh.nodes) out << fmt(p.x) << ' ' << fmt(p.y) << " 0\n";
  out << "CELLS " << mesh.num_triangles() << ' ' << 4 * mesh.num_triangles() << '\n';
  for (const auto& t : mesh.triangles) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out << "CELL_TYPES " << mesh.num_triangles() << '\n';
  for (std::size_t i = 0; i < mesh.num_triangles(); ++i) out << "5\n";
  out << "CELL_DATA " << mesh.num_triangles() << "\nSCALARS block int 1\nLOOKUP_TABLE default\n";
  for (int b : mesh.triangle_block) out << b << '\n';
}

void write_solution_vtk(std::ostream& out, const DgSpace& dg, const Eigen::VectorXd& u, const Eigen::VectorXd& p) {
  if (u.size() != dg.num_dofs()) throw DimensionMismatch("velocity has the wrong length for the DG space");
  if (p.size() != static_cast<Eigen::Index>(dg.num_blocks()))
    throw DimensionMismatch("pressure needs one value per coarse block");
  const FineMesh& mesh = dg.mesh();
  std::size_t npoints = 0, ncells = 0;
  for (std::size_t b = 0; b < dg.num_blocks(); ++b) {
    npoints += dg.block(b).num_nodes();
    ncells += dg.block(b).triangles().size();
  }
  header(out, "msstokes solution");
  out << "POINTS " << npoints << " double\n";
  for (std::size_t b = 0; b < dg.num_blocks(); ++b)
    for (int n : dg.block(b).nodes()) out << fmt(mesh.nodes[n].x) << ' ' << fmt(mesh.nodes[n].y) << " 0\n";
  out << "CELLS " << ncells << ' ' << 4 * ncells << '\n';
  std::size_t base = 0;
  for (std::size_t b = 0; b < dg.num_blocks(); ++b) {
    const Subdomain& d = dg.block(b);
    for (int t : d.triangles()) {
      const auto lt = d.local_triangle(t);
      out << "3 " << base + lt[0] << ' ' << base + lt[1] << ' ' << base + lt[2] << '\n';
    }
    base += d.num_nodes();
  }
  out << "CELL_TYPES " << ncells << '\n';
  for (std::size_t i = 0; i < ncells; ++i) out << "5\n";
  out << "POINT_DATA " << npoints << "\nVECTORS u double\n";
  for (Eigen::Index i = 0; i < u.size(); i += 2) out << fmt(u(i)) << ' ' << fmt(u(i + 1)) << " 0\n";
  out << "CELL_DATA " << ncells << "\nSCALARS p double 1\nLOOKUP_TABLE default\n";
  for (std::size_t b = 0; b < dg.num_blocks(); ++b)
    for (std::size_t i = 0; i < dg.block(b).triangles().size(); ++i) out << fmt(p(static_cast<Eigen::Index>(b))) << '\n';
  out << "SCALARS block int 1\nLOOKUP_TABLE default\n";
  for (std::size_t b = 0; b < dg.num_blocks(); ++b)
    for (std::size_t i = 0; i < dg.block(b).triangles().size(); ++i) out << b << '\n';
}

void write_mesh_vtk(const std::filesystem::path& path, const FineMesh& mesh) {
  to_file(path, [&](std::ostream& o) { write_mesh_vtk(o, mesh); });
}

void write_solution_vtk(const std::filesystem::path& path, const DgSpace& dg, const Eigen::VectorXd& u,
                        const Eigen::VectorXd& p) {
  to_file(path, [&](std::ostream& o) { write_solution_vtk(o, dg, u, p); });
}

}  // namespace msstokes
