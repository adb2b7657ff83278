// Copyright 2026 The msstokes Authors.
// SPDX-License-Identifier: Apache-2.0

#include "msstokes/local_stokes.hpp"

#include "msstokes/errors.hpp"

namespace msstokes {

LocalStokesSolver::LocalStokesSolver(const FineMesh& mesh, std::vector<int> triangles, double stabilization)
    : domain_(mesh, std::move(triangles)) {
  if (domain_.triangles().empty()) throw SingularSystem("local Stokes problem on an empty subdomain");
  const auto nd = static_cast<int>(domain_.num_dofs());
  const auto nn = static_cast<int>(domain_.num_nodes());
  free_index_.assign(nd, -1);
  boundary_index_.assign(nd, -1);
  int nb = 0;
  for (int v : domain_.boundary_nodes())
    for (int c = 0; c < 2; ++c) boundary_index_[2 * v + c] = nb++;
  int nf = 0;
  for (int d = 0; d < nd; ++d)
    if (boundary_index_[d] < 0) free_index_[d] = nf++;

  Triplets a_ff, a_fb, b_f, b_b, c_pp;
  pressure_mass_ = Eigen::VectorXd::Zero(nn);
  for (int t : domain_.triangles()) {
    const auto lt = domain_.local_triangle(t);
    const auto& tri = mesh.triangles[t];
    const Vertices verts{mesh.nodes[tri[0]], mesh.nodes[tri[1]], mesh.nodes[tri[2]]};
    const Matrix6 k = element_laplacian(verts);
    const Row6 div = element_divergence(verts);
    const Eigen::Matrix3d stab = element_pressure_stabilization(verts);
    const double area = mesh.triangle_area(t);
    for (int i = 0; i < 6; ++i) {
      const int di = 2 * lt[i / 2] + i % 2;
      if (free_index_[di] < 0) continue;
      for (int j = 0; j < 6; ++j) {
        const int dj = 2 * lt[j / 2] + j % 2;
        if (k(i, j) == 0.0) continue;
        if (free_index_[dj] >= 0)
          a_ff.emplace_back(free_index_[di], free_index_[dj], k(i, j));
        else
          a_fb.emplace_back(free_index_[di], boundary_index_[dj], k(i, j));
      }
    }
    // -∫ q div v with q = φ_a: the element row scaled by 1/3 (P1 pressure,
    // constant divergence on the triangle).
    for (int a = 0; a < 3; ++a) {
      pressure_mass_(lt[a]) += area / 3.0;
      for (int j = 0; j < 6; ++j) {
        const int dj = 2 * lt[j / 2] + j % 2;
        const double val = div(j) / 3.0;
        if (free_index_[dj] >= 0)
          b_f.emplace_back(lt[a], free_index_[dj], val);
        else
          b_b.emplace_back(lt[a], boundary_index_[dj], val);
      }
      for (int b = 0; b < 3; ++b) c_pp.emplace_back(lt[a], lt[b], stabilization * stab(a, b));
    }
  }
  SparseMatrix A(nf, nf), B(nn, nf), C(nn, nn);
  A.setFromTriplets(a_ff.begin(), a_ff.end());
  B.setFromTriplets(b_f.begin(), b_f.end());
  C.setFromTriplets(c_pp.begin(), c_pp.end());
  a_ib_.resize(nf, nb);
  a_ib_.setFromTriplets(a_fb.begin(), a_fb.end());
  b_b_.resize(nn, nb);
  b_b_.setFromTriplets(b_b.begin(), b_b.end());

  const Eigen::RowVectorXd flux = domain_.boundary_flux();
  boundary_flux_ = Eigen::RowVectorXd::Zero(nb);
  for (int d = 0; d < nd; ++d)
    if (boundary_index_[d] >= 0) boundary_flux_(boundary_index_[d]) = flux(d);

  solver_ = std::make_unique<SaddlePointSolver>(A, B, &C, &pressure_mass_);
}

LocalStokesResult LocalStokesSolver::solve(const Eigen::MatrixXd& boundary_data) const {
  const Eigen::Index nb = static_cast<Eigen::Index>(num_boundary_dofs());
  if (boundary_data.rows() != nb) throw DimensionMismatch("boundary data has the wrong number of rows");
  LocalStokesResult out;
  out.divergence = (boundary_flux_ * boundary_data).transpose() / domain_.area();

  // Continuity rows: -∫ q div u - stab(p, q) = -c ∫ q.
  Eigen::MatrixXd rhs_u = -(a_ib_ * boundary_data);
  Eigen::MatrixXd rhs_p = -(b_b_ * boundary_data) - pressure_mass_ * out.divergence.transpose();
  auto sol = solver_->solve(rhs_u, rhs_p);

  const auto nd = static_cast<Eigen::Index>(domain_.num_dofs());
  out.velocity.resize(nd, boundary_data.cols());
  for (Eigen::Index d = 0; d < nd; ++d) {
    if (free_index_[d] >= 0)
      out.velocity.row(d) = sol.u.row(free_index_[d]);
    else
      out.velocity.row(d) = boundary_data.row(boundary_index_[d]);
  }
  out.pressure.resize(static_cast<Eigen::Index>(domain_.triangles().size()), boundary_data.cols());
  Eigen::Index row = 0;
  for (int t : domain_.triangles()) {
    const auto lt = domain_.local_triangle(t);
    out.pressure.row(row++) = (sol.p.row(lt[0]) + sol.p.row(lt[1]) + sol.p.row(lt[2])) / 3.0;
  }
  return out;
}

LocalStokesSolution solve_local_stokes(const FineMesh& mesh, const LocalStokesProblem& problem) {
  LocalStokesSolver solver(mesh, problem.triangles);
  auto res = solver.solve(problem.boundary_data);
  LocalStokesSolution out;
  const auto& dom = solver.subdomain();
  out.velocity.triangles.assign(dom.triangles().begin(), dom.triangles().end());
  out.velocity.nodes.assign(dom.nodes().begin(), dom.nodes().end());
  out.velocity.coefficients = res.velocity.col(0);
  out.pressure = res.pressure.col(0);
  out.divergence = res.divergence(0);
  return out;
}

}  // namespace msstokes
