// Copyright 2026 The msstokes Authors.
// SPDX-License-Identifier: Apache-2.0

#include "msstokes/dgform.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "msstokes/errors.hpp"

namespace msstokes {

// Trace data of one side of a fine edge. Quadrature points are parametrized
// from edges[fe].nodes[0] to nodes[1] on both sides so the values line up.
struct DgSpace::Trace {
  std::array<Eigen::Index, 3> dof{};        // component-0 DOF of each vertex, -1 if pinned
  std::array<std::array<double, 2>, 3> phi{};  // φ_i at the two quadrature points
  std::array<double, 3> dn{};               // ∇φ_i · n
  std::array<Point, 2> x{};
  std::array<double, 2> w{};                // weights × length
  Point n;                                  // plus -> minus
};

DgSpace::DgSpace(const FineMesh& mesh, const CoarsePartition& partition, std::array<BoundaryKind, 4> sides)
    : mesh_(&mesh), partition_(&partition), sides_(sides) {
  const auto pinned = mesh.perforation_nodes();
  offsets_.push_back(0);
  blocks_.reserve(partition.num_blocks());
  for (std::size_t b = 0; b < partition.num_blocks(); ++b) {
    blocks_.emplace_back(mesh, partition.blocks[b].triangles);
    const Subdomain& sd = blocks_.back();
    for (std::size_t i = 0; i < sd.num_nodes(); ++i)
      if (!pinned[sd.nodes()[i]])
        for (int c = 0; c < 2; ++c) free_dofs_.push_back(offsets_.back() + 2 * static_cast<Eigen::Index>(i) + c);
    offsets_.push_back(offsets_.back() + static_cast<Eigen::Index>(sd.num_dofs()));
  }
  assemble();
}

Eigen::Index DgSpace::dof(int b, int node, int component) const {
  int l = blocks_[b].local(node);
  if (l < 0) return -1;
  return offsets_[b] + 2 * l + component;
}

EdgeKind DgSpace::edge_kind(int coarse_edge) const {
  const CoarseEdge& e = partition_->edges[coarse_edge];
  if (!e.boundary()) return EdgeKind::interior;
  if (e.side == Side::none) return EdgeKind::dirichlet;
  return sides_[static_cast<std::size_t>(e.side)] == BoundaryKind::dirichlet ? EdgeKind::dirichlet
                                                                              : EdgeKind::neumann;
}

DgSpace::Trace DgSpace::trace(int coarse_edge, int fine_edge, int side) const {
  const CoarseEdge& ce = partition_->edges[coarse_edge];
  const FineEdge& fe = mesh_->edges[fine_edge];
  const int b = side == 0 ? ce.plus : ce.minus;
  int t = -1;
  for (int s : fe.triangles)
    if (s >= 0 && mesh_->triangle_block[s] == b) t = s;
  if (t < 0) throw InvariantViolation("edge_block", "coarse edge side without a triangle");

  Trace tr;
  tr.n = partition_->outward_normal(*mesh_, fine_edge, ce.plus);
  const TriangleGeometry g = triangle_geometry(*mesh_, t);
  const Point a = mesh_->nodes[fe.nodes[0]];
  const Point d = mesh_->nodes[fe.nodes[1]] - a;
  const double len = norm(d);
  const auto quad = edge_quadrature();
  for (int q = 0; q < 2; ++q) {
    tr.x[q] = a + quad[q].first * d;
    tr.w[q] = quad[q].second * len;
  }
  const auto& tri = mesh_->triangles[t];
  for (int i = 0; i < 3; ++i) {
    tr.dof[i] = dof(b, tri[i], 0);
    tr.dn[i] = dot(g.grad[i], tr.n);
    for (int q = 0; q < 2; ++q) {
      const double s = quad[q].first;
      tr.phi[i][q] = tri[i] == fe.nodes[0] ? 1.0 - s : (tri[i] == fe.nodes[1] ? s : 0.0);
    }
  }
  return tr;
}

void DgSpace::assemble() {
  const FineMesh& mesh = *mesh_;
  const Eigen::Index n = num_dofs();
  Triplets k_trip, m_trip, c_trip, p_trip, j_trip, b_trip;

  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    for (int t : blocks_[b].triangles()) {
      const auto& tri = mesh.triangles[t];
      const Vertices v{mesh.nodes[tri[0]], mesh.nodes[tri[1]], mesh.nodes[tri[2]]};
      const Matrix6 k = element_laplacian(v);
      const Eigen::Matrix3d m = element_mass(v);
      const Row6 div = element_divergence(v);
      Eigen::Index d[6];
      for (int i = 0; i < 3; ++i) {
        d[2 * i] = dof(static_cast<int>(b), tri[i], 0);
        d[2 * i + 1] = d[2 * i] + 1;
      }
      for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 6; ++j)
          if (k(i, j) != 0.0) k_trip.emplace_back(d[i], d[j], k(i, j));
        b_trip.emplace_back(static_cast<Eigen::Index>(b), d[i], div(i));
      }
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          for (int c = 0; c < 2; ++c) m_trip.emplace_back(d[2 * i] + c, d[2 * j] + c, m(i, j));
    }
  }

  const auto nb = static_cast<Eigen::Index>(blocks_.size());
  for (std::size_t e = 0; e < partition_->num_edges(); ++e) {
    const CoarseEdge& ce = partition_->edges[e];
    const EdgeKind kind = edge_kind(static_cast<int>(e));
    const bool weak = kind != EdgeKind::neumann;
    const int nsides = ce.boundary() ? 1 : 2;
    const double avg = ce.boundary() ? 1.0 : 0.5;
    for (int fe : ce.fine_edges) {
      std::array<Trace, 2> tr;
      for (int s = 0; s < nsides; ++s) tr[s] = trace(static_cast<int>(e), fe, s);
      // Stencils over (side, vertex): jump value per quadrature point, flux.
      struct Entry {
        Eigen::Index dof;
        double jump[2];
        double flux;
      };
      std::vector<Entry> st;
      for (int s = 0; s < nsides; ++s) {
        const double sign = s == 0 ? 1.0 : -1.0;
        for (int i = 0; i < 3; ++i) {
          if (tr[s].dof[i] < 0) continue;
          st.push_back({tr[s].dof[i], {sign * tr[s].phi[i][0], sign * tr[s].phi[i][1]}, avg * tr[s].dn[i]});
        }
      }
      for (const Entry& a : st) {
        for (const Entry& c : st) {
          double jj = 0.0, cons = 0.0;
          for (int q = 0; q < 2; ++q) {
            const double w = tr[0].w[q];
            jj += w * a.jump[q] * c.jump[q];
            cons += w * (a.flux * c.jump[q] + a.jump[q] * c.flux);
          }
          for (int comp = 0; comp < 2; ++comp) {
            if (jj != 0.0) {
              j_trip.emplace_back(a.dof + comp, c.dof + comp, jj);
              if (weak) p_trip.emplace_back(a.dof + comp, c.dof + comp, jj);
            }
            if (weak && cons != 0.0) c_trip.emplace_back(a.dof + comp, c.dof + comp, cons);
          }
        }
        // ∫ [v]·n on the fine edge
        const double mean = tr[0].w[0] * a.jump[0] + tr[0].w[1] * a.jump[1];
        if (mean != 0.0) {
          b_trip.emplace_back(nb + static_cast<Eigen::Index>(e), a.dof, mean * tr[0].n.x);
          b_trip.emplace_back(nb + static_cast<Eigen::Index>(e), a.dof + 1, mean * tr[0].n.y);
        }
      }
    }
  }

  auto build = [n](SparseMatrix& m, Triplets& t, Eigen::Index rows) {
    m.resize(rows, n);
    m.setFromTriplets(t.begin(), t.end());
    m.makeCompressed();
  };
  build(stiffness_, k_trip, n);
  build(mass_, m_trip, n);
  build(consistency_, c_trip, n);
  build(penalty_, p_trip, n);
  build(jump_all_, j_trip, n);
  build(divergence_, b_trip, nb + static_cast<Eigen::Index>(partition_->num_edges()));
}

SparseMatrix DgSpace::a_dg(double gamma) const {
  if (!(gamma > 0.0)) throw std::invalid_argument("penalty must be positive");
  SparseMatrix a = stiffness_ - consistency_ + (gamma / mesh_->h) * penalty_;
  a.makeCompressed();
  return a;
}

SparseMatrix DgSpace::a_norm() const {
  SparseMatrix a = stiffness_ + (1.0 / mesh_->h) * jump_all_;
  a.makeCompressed();
  return a;
}

Eigen::VectorXd DgSpace::gauge() const {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(divergence_.rows());
  for (std::size_t b = 0; b < blocks_.size(); ++b) g(static_cast<Eigen::Index>(b)) = partition_->blocks[b].area;
  return g;
}

Eigen::VectorXd DgSpace::pressure_norm_weights() const {
  Eigen::VectorXd w = gauge();
  const auto nb = static_cast<Eigen::Index>(blocks_.size());
  for (std::size_t e = 0; e < partition_->num_edges(); ++e)
    w(nb + static_cast<Eigen::Index>(e)) = mesh_->h * partition_->edges[e].length;
  return w;
}

DgSpace::Rhs DgSpace::rhs(const ProblemData& problem, double gamma) const {
  const FineMesh& mesh = *mesh_;
  Rhs r;
  r.u = Eigen::VectorXd::Zero(num_dofs());
  r.p = Eigen::VectorXd::Zero(divergence_.rows());

  for (std::size_t b = 0; b < blocks_.size(); ++b)
    for (int t : blocks_[b].triangles()) {
      const auto& tri = mesh.triangles[t];
      const double area = mesh.triangle_area(t);
      for (const auto& qp : triangle_quadrature()) {
        Point x{0.0, 0.0};
        for (int i = 0; i < 3; ++i) x = x + qp.barycentric[i] * mesh.nodes[tri[i]];
        const Point f = problem.f(x);
        for (int i = 0; i < 3; ++i) {
          const Eigen::Index d = dof(static_cast<int>(b), tri[i], 0);
          const double w = qp.weight * area * qp.barycentric[i];
          r.u(d) += w * f.x;
          r.u(d + 1) += w * f.y;
        }
      }
    }

  const auto nb = static_cast<Eigen::Index>(blocks_.size());
  for (std::size_t e = 0; e < partition_->num_edges(); ++e) {
    const CoarseEdge& ce = partition_->edges[e];
    if (!ce.boundary()) continue;
    const EdgeKind kind = edge_kind(static_cast<int>(e));
    for (int fe : ce.fine_edges) {
      const Trace tr = trace(static_cast<int>(e), fe, 0);
      for (int q = 0; q < 2; ++q) {
        if (kind == EdgeKind::dirichlet) {
          const Point g = problem.g_dirichlet(tr.x[q]);
          r.p(nb + static_cast<Eigen::Index>(e)) += tr.w[q] * dot(g, tr.n);
          for (int i = 0; i < 3; ++i) {
            if (tr.dof[i] < 0) continue;
            const double c = tr.w[q] * ((gamma / mesh.h) * tr.phi[i][q] - tr.dn[i]);
            r.u(tr.dof[i]) += c * g.x;
            r.u(tr.dof[i] + 1) += c * g.y;
          }
        } else {
          const Point g = problem.g_neumann(tr.x[q]);
          for (int i = 0; i < 3; ++i) {
            if (tr.dof[i] < 0) continue;
            const double c = tr.w[q] * tr.phi[i][q];
            r.u(tr.dof[i]) += c * g.x;
            r.u(tr.dof[i] + 1) += c * g.y;
          }
        }
      }
    }
  }
  return r;
}

double DgSpace::edge_jump_integral(int coarse_edge, const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
  const CoarseEdge& ce = partition_->edges[coarse_edge];
  const int nsides = ce.boundary() ? 1 : 2;
  double total = 0.0;
  for (int fe : ce.fine_edges) {
    std::array<Trace, 2> tr;
    for (int s = 0; s < nsides; ++s) tr[s] = trace(coarse_edge, fe, s);
    for (int q = 0; q < 2; ++q) {
      double ju[2] = {0.0, 0.0}, jv[2] = {0.0, 0.0};
      for (int s = 0; s < nsides; ++s) {
        const double sign = s == 0 ? 1.0 : -1.0;
        for (int i = 0; i < 3; ++i) {
          if (tr[s].dof[i] < 0) continue;
          for (int c = 0; c < 2; ++c) {
            ju[c] += sign * tr[s].phi[i][q] * u(tr[s].dof[i] + c);
            jv[c] += sign * tr[s].phi[i][q] * v(tr[s].dof[i] + c);
          }
        }
      }
      total += tr[0].w[q] * (ju[0] * jv[0] + ju[1] * jv[1]);
    }
  }
  return total;
}

double DgSpace::edge_flux(int coarse_edge, int b, const Eigen::VectorXd& u) const {
  const CoarseEdge& ce = partition_->edges[coarse_edge];
  const int side = b == ce.plus ? 0 : (b == ce.minus ? 1 : -1);
  if (side < 0) throw InvariantViolation("edge_block", "block does not touch the coarse edge");
  const double sign = side == 0 ? 1.0 : -1.0;
  double total = 0.0;
  for (int fe : ce.fine_edges) {
    const Trace tr = trace(coarse_edge, fe, side);
    for (int q = 0; q < 2; ++q)
      for (int i = 0; i < 3; ++i) {
        if (tr.dof[i] < 0) continue;
        total += sign * tr.w[q] * tr.phi[i][q] * (u(tr.dof[i]) * tr.n.x + u(tr.dof[i] + 1) * tr.n.y);
      }
  }
  return total;
}

double DgSpace::block_boundary_flux(int b, const Eigen::VectorXd& u) const {
  double total = 0.0;
  for (int e : partition_->blocks[b].edges) total += edge_flux(e, b, u);
  return total;
}

BlockSpace BlockSpace::reference(const DgSpace& dg) {
  BlockSpace s;
  s.dg_ = &dg;
  const auto& free = dg.free_dofs();
  s.offsets_.assign(dg.num_blocks() + 1, 0);
  std::size_t b = 0;
  for (Eigen::Index d : free) {
    while (d >= dg.offset(b + 1)) ++b;
    ++s.offsets_[b + 1];
  }
  for (std::size_t i = 0; i < dg.num_blocks(); ++i) s.offsets_[i + 1] += s.offsets_[i];
  Triplets t;
  t.reserve(free.size());
  for (std::size_t j = 0; j < free.size(); ++j) t.emplace_back(free[j], static_cast<Eigen::Index>(j), 1.0);
  s.phi_.resize(dg.num_dofs(), static_cast<Eigen::Index>(free.size()));
  s.phi_.setFromTriplets(t.begin(), t.end());
  return s;
}

BlockSpace BlockSpace::from_blocks(const DgSpace& dg, std::vector<Eigen::MatrixXd> blocks) {
  if (blocks.size() != dg.num_blocks()) throw DimensionMismatch("one column block per coarse block expected");
  BlockSpace s;
  s.dg_ = &dg;
  s.offsets_.push_back(0);
  Triplets t;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const Eigen::MatrixXd& m = blocks[b];
    if (m.rows() != dg.block_dofs(b))
      throw DimensionMismatch("block " + std::to_string(b) + " columns have " + std::to_string(m.rows()) +
                              " rows, expected " + std::to_string(dg.block_dofs(b)));
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      for (Eigen::Index i = 0; i < m.rows(); ++i)
        if (m(i, j) != 0.0) t.emplace_back(dg.offset(b) + i, s.offsets_.back() + j, m(i, j));
    s.offsets_.push_back(s.offsets_.back() + m.cols());
  }
  s.phi_.resize(dg.num_dofs(), s.offsets_.back());
  s.phi_.setFromTriplets(t.begin(), t.end());
  s.blocks_ = std::move(blocks);
  return s;
}

double BlockSpace::min_gram_ratio() const {
  double worst = 1.0;
  for (const auto& m : blocks_) {
    if (m.cols() == 0) continue;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.transpose() * m, Eigen::EigenvaluesOnly);
    const double hi = es.eigenvalues().maxCoeff();
    worst = std::min(worst, hi > 0.0 ? es.eigenvalues().minCoeff() / hi : 0.0);
  }
  return worst;
}

void BlockSpace::check_independence() const {
  const double r = min_gram_ratio();
  if (!(r > 1e-12))
    throw InvariantViolation("block_independence", "block columns are dependent (Gram ratio " + std::to_string(r) + ")");
}

SparseMatrix assemble_a_dg(const BlockSpace& space, double gamma) {
  const SparseMatrix& phi = space.prolongation();
  SparseMatrix a = phi.transpose() * (space.dg().a_dg(gamma) * phi);
  // Symmetrize away the rounding of the triple product.
  SparseMatrix at = a.transpose();
  a = 0.5 * (a + at);
  a.makeCompressed();
  return a;
}

SparseMatrix assemble_b_dg(const BlockSpace& space) {
  SparseMatrix b = space.dg().divergence() * space.prolongation();
  b.makeCompressed();
  return b;
}

DgSpace::Rhs assemble_rhs(const ProblemData& problem, const BlockSpace& space, double gamma) {
  DgSpace::Rhs fine = space.dg().rhs(problem, gamma);
  return {space.prolongation().transpose() * fine.u, std::move(fine.p)};
}

HybridSystem assemble_hybrid_system(const BlockSpace& space, const ProblemData& problem, double gamma) {
  const DgSpace& dg = space.dg();
  if (problem.sides != dg.sides())
    throw DimensionMismatch("problem boundary sides differ from the DG space configuration");
  HybridSystem sys;
  sys.A = assemble_a_dg(space, gamma);
  sys.B = assemble_b_dg(space);
  auto rhs = assemble_rhs(problem, space, gamma);
  sys.rhs_u = std::move(rhs.u);
  sys.rhs_p = std::move(rhs.p);
  sys.gauge = dg.gauge();
  sys.n_u = space.dim();
  sys.n_p = static_cast<Eigen::Index>(dg.num_blocks());
  sys.n_ph = static_cast<Eigen::Index>(dg.partition().num_edges());
  sys.gamma = gamma;
  return sys;
}

double edge_jump_integral(const BlockSpace& space, int coarse_edge, const Eigen::VectorXd& u,
                          const Eigen::VectorXd& v) {
  if (u.size() != space.dim() || v.size() != space.dim())
    throw DimensionMismatch("coefficient vector length differs from the space dimension");
  const Eigen::VectorXd fu = space.prolongation() * u;
  const Eigen::VectorXd fv = space.prolongation() * v;
  return space.dg().edge_jump_integral(coarse_edge, fu, fv);
}

}  // namespace msstokes
