// Copyright 2026 The msstokes Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <array>
#include <vector>

#include "msstokes/femcore.hpp"
#include "msstokes/geometry.hpp"
#include "msstokes/problem.hpp"

namespace msstokes {

enum class EdgeKind : std::uint8_t { interior, dirichlet, neumann };

/// Block-discontinuous P1 velocity space V_h^DG and its fine operators.
///
/// Fine DOFs are numbered block by block: block b owns
/// [offset(b), offset(b+1)), local DOF 2·i + c for local node i of
/// `block(b)` and component c. Nodes on perforations keep their DOFs in this
/// numbering but are excluded from every velocity space (`free_dofs`).
class DgSpace {
 public:
  DgSpace(const FineMesh& mesh, const CoarsePartition& partition,
          std::array<BoundaryKind, 4> sides = {BoundaryKind::dirichlet, BoundaryKind::dirichlet,
                                               BoundaryKind::dirichlet, BoundaryKind::dirichlet});

  const FineMesh& mesh() const { return *mesh_; }
  const CoarsePartition& partition() const { return *partition_; }
  const std::array<BoundaryKind, 4>& sides() const { return sides_; }

  Eigen::Index num_dofs() const { return offsets_.back(); }
  std::size_t num_blocks() const { return blocks_.size(); }
  Eigen::Index offset(std::size_t b) const { return offsets_[b]; }
  Eigen::Index block_dofs(std::size_t b) const { return offsets_[b + 1] - offsets_[b]; }
  const Subdomain& block(std::size_t b) const { return blocks_[b]; }
  /// Global DOF of (block, global node, component); -1 if the node is not in the block.
  Eigen::Index dof(int b, int node, int component) const;
  /// Sorted DOFs not pinned by a perforation.
  const std::vector<Eigen::Index>& free_dofs() const { return free_dofs_; }

  EdgeKind edge_kind(int coarse_edge) const;

  /// Broken stiffness Σ_K ∫_K ∇u : ∇v.
  const SparseMatrix& stiffness() const { return stiffness_; }
  /// Broken vector mass ∫ u · v.
  const SparseMatrix& mass() const { return mass_; }
  /// Σ_E ∫_E ({∇u n}·[v] + {∇v n}·[u]) over interior and Dirichlet edges.
  const SparseMatrix& consistency() const { return consistency_; }
  /// Σ_E ∫_E [u]·[v] over interior and Dirichlet edges.
  const SparseMatrix& penalty() const { return penalty_; }
  /// Σ_E ∫_E [u]·[v] over every coarse edge.
  const SparseMatrix& jump_all() const { return jump_all_; }
  /// Element rows -∫_K div v, then edge rows ∫_E [v]·n.
  const SparseMatrix& divergence() const { return divergence_; }

  /// a_DG = stiffness - consistency + (γ/h) penalty.
  SparseMatrix a_dg(double gamma) const;
  /// Matrix of the A-norm: stiffness + (1/h) jump_all.
  SparseMatrix a_norm() const;
  /// Gauge weights: |K| on element rows, 0 on edge rows.
  Eigen::VectorXd gauge() const;
  /// Pressure-norm weights: |K| on element rows, h |E| on edge rows.
  Eigen::VectorXd pressure_norm_weights() const;

  struct Rhs {
    Eigen::VectorXd u;
    Eigen::VectorXd p;
  };
  Rhs rhs(const ProblemData& problem, double gamma) const;

  /// ∫_E [u]·[v] for fine coefficient vectors, by 2-point Gauss per fine edge.
  double edge_jump_integral(int coarse_edge, const Eigen::VectorXd& u, const Eigen::VectorXd& v) const;
  /// ∫ over the coarse edges of block b of u|_b · n_b (outward).
  double block_boundary_flux(int b, const Eigen::VectorXd& u) const;
  /// ∫_E u|_K · n_K for one coarse edge seen from block K.
  double edge_flux(int coarse_edge, int b, const Eigen::VectorXd& u) const;

 private:
  struct Trace;
  Trace trace(int coarse_edge, int fine_edge, int side) const;
  void assemble();

  const FineMesh* mesh_;
  const CoarsePartition* partition_;
  std::array<BoundaryKind, 4> sides_;
  std::vector<Subdomain> blocks_;
  std::vector<Eigen::Index> offsets_;
  std::vector<Eigen::Index> free_dofs_;
  SparseMatrix stiffness_, mass_, consistency_, penalty_, jump_all_, divergence_;
};

/// Velocity space spanned by fine-grid columns supported per coarse block.
///
/// Column j of block b lives in `columns(b)` with rows in the block-local DOF
/// order of DgSpace; the global prolongation `prolongation()` maps coarse
/// coefficients to fine DG coefficients.
class BlockSpace {
 public:
  /// Full V_h^DG: one unit column per free fine DOF.
  static BlockSpace reference(const DgSpace& dg);
  /// Dense per-block columns; throws DimensionMismatch on row mismatch.
  static BlockSpace from_blocks(const DgSpace& dg, std::vector<Eigen::MatrixXd> blocks);

  const DgSpace& dg() const { return *dg_; }
  Eigen::Index dim() const { return offsets_.back(); }
  std::size_t num_blocks() const { return offsets_.size() - 1; }
  Eigen::Index offset(std::size_t b) const { return offsets_[b]; }
  Eigen::Index block_dim(std::size_t b) const { return offsets_[b + 1] - offsets_[b]; }
  const SparseMatrix& prolongation() const { return phi_; }
  /// Block columns (empty for the reference space).
  const std::vector<Eigen::MatrixXd>& columns() const { return blocks_; }

  /// Smallest over blocks of λ_min/λ_max of the column Gram matrix.
  double min_gram_ratio() const;
  /// Throws InvariantViolation when min_gram_ratio() ≤ 1e-12.
  void check_independence() const;

 private:
  const DgSpace* dg_ = nullptr;
  std::vector<Eigen::MatrixXd> blocks_;
  std::vector<Eigen::Index> offsets_;
  SparseMatrix phi_;
};

struct HybridSystem {
  SparseMatrix A;
  SparseMatrix B;
  Eigen::VectorXd rhs_u;
  Eigen::VectorXd rhs_p;
  Eigen::VectorXd gauge;
  Eigen::Index n_u = 0;
  Eigen::Index n_p = 0;
  Eigen::Index n_ph = 0;
  double gamma = 0.0;
};

SparseMatrix assemble_a_dg(const BlockSpace& space, double gamma);
SparseMatrix assemble_b_dg(const BlockSpace& space);
DgSpace::Rhs assemble_rhs(const ProblemData& problem, const BlockSpace& space, double gamma);
HybridSystem assemble_hybrid_system(const BlockSpace& space, const ProblemData& problem, double gamma);
/// ∫_E [u]·[v] for coefficient vectors of `space`.
double edge_jump_integral(const BlockSpace& space, int coarse_edge, const Eigen::VectorXd& u,
                          const Eigen::VectorXd& v);

}  // namespace msstokes
