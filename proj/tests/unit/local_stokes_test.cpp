// Copyright 2026 The msstokes Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "msstokes/errors.hpp"
#include "msstokes/local_stokes.hpp"
#include "test_support.hpp"

namespace msstokes {
namespace {

std::vector<int> all_triangles(const FineMesh& mesh) {
  std::vector<int> t(mesh.num_triangles());
  std::iota(t.begin(), t.end(), 0);
  return t;
}

template <class F>
Eigen::VectorXd boundary_data(const LocalStokesSolver& solver, F g) {
  const auto& d = solver.subdomain();
  Eigen::VectorXd out(solver.num_boundary_dofs());
  const auto nodes = solver.boundary_nodes();
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const Point v = g(d.mesh().nodes[d.nodes()[nodes[k]]]);
    out(2 * k) = v.x;
    out(2 * k + 1) = v.y;
  }
  return out;
}

// Degree-5 seven-point rule on triangles (barycentric, weights sum to 1).
double l2_error(const FineMesh& mesh, const Subdomain& d, const Eigen::VectorXd& u, Point (*exact)(Point)) {
  const double a = 0.059715871789770, b = 0.470142064105115, c = 0.797426985353087, e = 0.101286507323456;
  const double wa = 0.132394152788506, wc = 0.125939180544827;
  const std::array<std::array<double, 4>, 7> rule{{{1.0 / 3, 1.0 / 3, 1.0 / 3, 0.225},
                                                   {a, b, b, wa},
                                                   {b, a, b, wa},
                                                   {b, b, a, wa},
                                                   {c, e, e, wc},
                                                   {e, c, e, wc},
                                                   {e, e, c, wc}}};
  double err = 0.0;
  for (int t : d.triangles()) {
    const auto loc = d.local_triangle(t);
    const auto& tri = mesh.triangles[t];
    const double area = mesh.triangle_area(t);
    for (const auto& q : rule) {
      Point x{0, 0};
      double ux = 0, uy = 0;
      for (int k = 0; k < 3; ++k) {
        x = x + q[k] * mesh.nodes[tri[k]];
        ux += q[k] * u(2 * loc[k]);
        uy += q[k] * u(2 * loc[k] + 1);
      }
      const Point ex = exact(x);
      err += q[3] * area * ((ux - ex.x) * (ux - ex.x) + (uy - ex.y) * (uy - ex.y));
    }
  }
  return std::sqrt(err);
}

Point poiseuille(Point p) { return {p.y * (1.0 - p.y), 0.0}; }

TEST(LocalStokes, ZeroData) {
  auto [mesh, part] = testing::unperforated(0.5, 4);
  LocalStokesSolver solver(mesh, part.blocks[0].triangles);
  const auto res = solver.solve(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(solver.num_boundary_dofs()), 1));
  EXPECT_EQ(res.velocity.norm(), 0.0);
  EXPECT_EQ(res.pressure.norm(), 0.0);
  EXPECT_EQ(res.divergence(0), 0.0);
}

TEST(LocalStokes, RigidTranslation) {
  auto [mesh, part] = testing::unperforated(1.0, 8);
  LocalStokesSolver solver(mesh, all_triangles(mesh));
  const auto res = solver.solve(boundary_data(solver, [](Point) { return Point{1.0, 0.0}; }));
  for (Eigen::Index i = 0; i < res.velocity.rows(); i += 2) {
    EXPECT_NEAR(res.velocity(i, 0), 1.0, 1e-10);
    EXPECT_NEAR(res.velocity(i + 1, 0), 0.0, 1e-10);
  }
  EXPECT_LT(res.pressure.cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_NEAR(res.divergence(0), 0.0, 1e-14);
}

TEST(LocalStokes, CompatibilityAndBoundaryValues) {
  auto [mesh, part] = testing::one_hole(0.5, 12, {0.26, 0.24}, 0.1);
  LocalStokesSolver solver(mesh, part.blocks[0].triangles);
  const auto& d = solver.subdomain();
  const Eigen::MatrixXd g = testing::random_matrix(static_cast<Eigen::Index>(solver.num_boundary_dofs()), 3, 5);
  const auto res = solver.solve(g);
  const auto nodes = solver.boundary_nodes();
  for (Eigen::Index j = 0; j < 3; ++j) {
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      EXPECT_EQ(res.velocity(2 * nodes[k], j), g(2 * k, j));
      EXPECT_EQ(res.velocity(2 * nodes[k] + 1, j), g(2 * k + 1, j));
    }
    // ∫_D div u_h = ∫_∂D g·n = c |D|.
    double div = 0.0;
    for (int t : d.triangles()) {
      const auto loc = d.local_triangle(t);
      const Row6 r = element_divergence(triangle_geometry(mesh, t).vertices);
      for (int k = 0; k < 3; ++k)
        div -= r(2 * k) * res.velocity(2 * loc[k], j) + r(2 * k + 1) * res.velocity(2 * loc[k] + 1, j);
    }
    const double flux = d.boundary_flux().dot(res.velocity.col(j));
    EXPECT_NEAR(div, flux, 1e-10 * std::max(1.0, std::abs(flux)));
    EXPECT_NEAR(res.divergence(j) * d.area(), flux, 1e-12 * std::max(1.0, std::abs(flux)));
    // Zero-mean pressure (triangle averages weighted by area).
    double mean = 0.0, scale = 0.0;
    Eigen::Index i = 0;
    for (int t : d.triangles()) {
      mean += mesh.triangle_area(t) * res.pressure(i, j);
      scale += mesh.triangle_area(t) * std::abs(res.pressure(i, j));
      ++i;
    }
    EXPECT_NEAR(mean, 0.0, 1e-12 * std::max(1.0, scale));
  }
}

TEST(LocalStokes, Linearity) {
  auto [mesh, part] = testing::one_hole(0.5, 10, {0.74, 0.29}, 0.12);
  LocalStokesSolver solver(mesh, part.blocks[1].triangles);
  const Eigen::Index nb = static_cast<Eigen::Index>(solver.num_boundary_dofs());
  const Eigen::VectorXd g1 = testing::random_vector(nb, 1), g2 = testing::random_vector(nb, 2);
  Eigen::MatrixXd g(nb, 3);
  g << g1, g2, g1 + g2;
  const auto res = solver.solve(g);
  const Eigen::VectorXd diff = res.velocity.col(2) - res.velocity.col(0) - res.velocity.col(1);
  EXPECT_LT(diff.norm(), 1e-10 * res.velocity.col(2).norm());
  EXPECT_LT((res.pressure.col(2) - res.pressure.col(0) - res.pressure.col(1)).norm(),
            1e-10 * std::max(1.0, res.pressure.col(2).norm()));
}

TEST(LocalStokes, PoiseuilleConvergesAtSecondOrder) {
  std::vector<double> errors;
  for (int n : {8, 16, 32}) {
    auto [mesh, part] = testing::unperforated(1.0, n);
    LocalStokesSolver solver(mesh, all_triangles(mesh));
    const auto res = solver.solve(boundary_data(solver, poiseuille));
    errors.push_back(l2_error(mesh, solver.subdomain(), res.velocity.col(0), poiseuille));
  }
  for (std::size_t i = 1; i < errors.size(); ++i) EXPECT_GE(std::log2(errors[i - 1] / errors[i]), 1.9);
}

TEST(LocalStokes, FunctionInterface) {
  auto [mesh, part] = testing::unperforated(0.5, 4);
  LocalStokesProblem problem;
  problem.triangles = part.blocks[3].triangles;
  const Subdomain d(mesh, problem.triangles);
  problem.boundary_data = Eigen::VectorXd::Zero(2 * static_cast<Eigen::Index>(d.boundary_nodes().size()));
  for (Eigen::Index i = 0; i < problem.boundary_data.size(); i += 2) problem.boundary_data(i) = 1.0;
  const auto sol = solve_local_stokes(mesh, problem);
  EXPECT_EQ(sol.velocity.coefficients.size(), 2 * static_cast<Eigen::Index>(sol.velocity.nodes.size()));
  EXPECT_EQ(sol.pressure.size(), static_cast<Eigen::Index>(sol.velocity.triangles.size()));
  EXPECT_NEAR(sol.divergence, 0.0, 1e-14);
  for (Eigen::Index i = 0; i < sol.velocity.coefficients.size(); i += 2)
    EXPECT_NEAR(sol.velocity.coefficients(i), 1.0, 1e-10);
}

TEST(LocalStokes, DisconnectedDomainIsSingular) {
  auto [mesh, part] = testing::unperforated(0.25, 2);
  std::vector<int> tris = part.blocks[0].triangles;
  tris.insert(tris.end(), part.blocks[15].triangles.begin(), part.blocks[15].triangles.end());
  // Two islands: the pressure has two constant modes but only one gauge.
  EXPECT_THROW(
      {
        LocalStokesSolver s(mesh, tris);
        s.solve(testing::random_matrix(static_cast<Eigen::Index>(s.num_boundary_dofs()), 1, 3));
      },
      SingularSystem);
}

}  // namespace
}  // namespace msstokes
