// Copyright 2026 The msstokes Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "msstokes/dgform.hpp"
#include "msstokes/mssolver.hpp"
#include "msstokes/snapshots.hpp"

namespace msstokes {

/// Relative errors in percent against a reference solution.
struct ErrorReport {
  int m_off = 0;
  long dof = 0;
  double e_u_l2 = 0.0;
  double e_u_dg = 0.0;
  double e_u_h1 = 0.0;
  double e_p_l2 = 0.0;
  double conservation_max = 0.0;
  double gamma = 0.0;
  int layers = 0;
  std::string mode;
  std::uint64_t seed = 0;
  /// Set when the edge-mean check failed for some block.
  bool rank_warning = false;
};

/// L², broken H¹ and DG errors of the velocity and the |K|-weighted pressure
/// error. Throws MeshMismatch if the solutions come from different spaces.
ErrorReport compute_errors(const DgSpace& dg, const HybridSolution& approx, const HybridSolution& reference,
                           double gamma);

struct ConservationAudit {
  /// ∫_∂K u·n per block (outward, traces from K).
  std::vector<double> flux;
  /// Same with the Dirichlet-edge flux replaced by the prescribed ∫ g_D·n.
  std::vector<double> balance;
  double max_flux = 0.0;
  double max_balance = 0.0;
  /// max over interior edges of |∫_E [u]·n|.
  double max_interior_jump = 0.0;
  /// max over Dirichlet edges of |∫_E (u - g_D)·n|.
  double max_dirichlet_mismatch = 0.0;

  double max() const { return std::max(max_flux, max_balance); }
};

ConservationAudit audit_conservation(const DgSpace& dg, const HybridSolution& solution, const ProblemData& problem);

struct CoercivityScan {
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  int samples = 0;
};

/// Ratios a_DG(v, v) / ‖v‖_A² over seeded standard normal coefficient vectors.
CoercivityScan coercivity_scan(const BlockSpace& space, double gamma, int samples, std::uint64_t seed);

struct GalerkinCheck {
  /// max_j |a_DG(u_h - u_H, φ_j) + b_DG(φ_j, Δp, Δp̂)| / (‖φ_j‖_A ‖u_h‖_A).
  double max_relative = 0.0;
};

/// Galerkin orthogonality of a multiscale solution against the reference,
/// tested with every basis function of `space`.
GalerkinCheck galerkin_orthogonality(const BlockSpace& space, const HybridSolution& approx,
                                     const HybridSolution& reference, double gamma);

struct StudyOptions {
  std::vector<int> m_off{4, 8, 16, 32};
  /// Snapshot families; the study table has one row block per family.
  std::vector<SnapshotMode> modes{SnapshotMode::standard, SnapshotMode::oversampled_restricted};
  int layers = 4;
  double gamma = 4.0;
  double pod_tol = kDefaultPodTolerance;
  std::uint64_t seed = 0;
  /// Randomized sample count; 0 means max(m_off) + 4.
  int random_count = 0;
  unsigned workers = 1;
};

struct StudyResult {
  std::vector<ErrorReport> rows;
  HybridSolution reference;
  long reference_dofs = 0;
  std::vector<double> timings;  // seconds per row
};

/// Reference solve once, then snapshots per family and offline spaces per
/// M_off, each solved and compared against the reference.
StudyResult run_study(const FineMesh& mesh, const CoarsePartition& partition, const ProblemData& problem,
                      const StudyOptions& options);

/// CSV with header m_off,dof,e_u_l2,e_u_dg,e_u_h1,e_p_l2,conservation_max.
void write_study_csv(std::ostream& out, const std::vector<ErrorReport>& rows);

}  // namespace msstokes
