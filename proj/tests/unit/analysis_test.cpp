// Copyright 2026 The msstokes Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <regex>
#include <sstream>

#include "msstokes/analysis.hpp"
#include "msstokes/errors.hpp"
#include "msstokes/offline.hpp"
#include "test_support.hpp"

namespace msstokes {
namespace {

class Study : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    PerforationSet set;
    set.circles = {{{0.26, 0.27}, 0.09}, {{0.76, 0.74}, 0.1}};
    auto [m, p] = generate_perforated_mesh(set, 0.5, 10, BlockShape::rectangular);
    mesh = new FineMesh(std::move(m));
    part = new CoarsePartition(std::move(p));
    dg = new DgSpace(*mesh, *part);
    reference = new HybridSolution(solve_reference(*dg, ProblemData::example1(), 4.0));
    for (std::size_t b = 0; b < part->num_blocks(); ++b)
      snaps.push_back(build_standard_snapshots(*mesh, *part, static_cast<int>(b)));
  }
  static void TearDownTestSuite() {
    delete reference;
    delete dg;
    delete part;
    delete mesh;
    snaps.clear();
  }
  static BlockSpace space(int L) {
    return assemble_global_offline(*dg, reduce_all(*mesh, *part, snaps, std::vector<int>(part->num_blocks(), L)));
  }

  static FineMesh* mesh;
  static CoarsePartition* part;
  static DgSpace* dg;
  static HybridSolution* reference;
  static std::vector<SnapshotSpace> snaps;
};

FineMesh* Study::mesh = nullptr;
CoarsePartition* Study::part = nullptr;
DgSpace* Study::dg = nullptr;
HybridSolution* Study::reference = nullptr;
std::vector<SnapshotSpace> Study::snaps;

HybridSolution scaled(const HybridSolution& s, double c) {
  HybridSolution out = s;
  out.u *= c;
  out.p *= c;
  out.p_hat *= c;
  return out;
}

TEST_F(Study, SelfErrorIsZero) {
  const ErrorReport r = compute_errors(*dg, *reference, *reference, 4.0);
  EXPECT_EQ(r.e_u_l2, 0.0);
  EXPECT_EQ(r.e_u_dg, 0.0);
  EXPECT_EQ(r.e_u_h1, 0.0);
  EXPECT_EQ(r.e_p_l2, 0.0);
}

TEST_F(Study, RelativeErrorsAreScaleInvariant) {
  const HybridSolution ms = solve_multiscale(space(8), ProblemData::example1(), 4.0);
  const ErrorReport a = compute_errors(*dg, ms, *reference, 4.0);
  const ErrorReport b = compute_errors(*dg, scaled(ms, 10.0), scaled(*reference, 10.0), 4.0);
  EXPECT_NEAR(a.e_u_l2, b.e_u_l2, 1e-10 * a.e_u_l2);
  EXPECT_NEAR(a.e_u_dg, b.e_u_dg, 1e-10 * a.e_u_dg);
  EXPECT_NEAR(a.e_u_h1, b.e_u_h1, 1e-10 * a.e_u_h1);
  EXPECT_NEAR(a.e_p_l2, b.e_p_l2, 1e-10 * a.e_p_l2);
  // Half the reference is 50% off in every norm.
  const ErrorReport half = compute_errors(*dg, scaled(*reference, 0.5), *reference, 4.0);
  EXPECT_NEAR(half.e_u_l2, 50.0, 1e-10);
  EXPECT_NEAR(half.e_u_dg, 50.0, 1e-10);
  EXPECT_NEAR(half.e_u_h1, 50.0, 1e-10);
  EXPECT_NEAR(half.e_p_l2, 50.0, 1e-10);
}

TEST_F(Study, L2ErrorMatchesQuadrature) {
  const HybridSolution ms = solve_multiscale(space(4), ProblemData::example1(), 4.0);
  const ErrorReport r = compute_errors(*dg, ms, *reference, 4.0);
  double num = 0.0, den = 0.0;
  for (std::size_t b = 0; b < dg->num_blocks(); ++b)
    for (int t : dg->block(b).triangles()) {
      const auto& tri = mesh->triangles[t];
      // Edge-midpoint rule, exact for the quadratic integrand.
      for (int k = 0; k < 3; ++k) {
        const int i = tri[k], j = tri[(k + 1) % 3];
        for (int c = 0; c < 2; ++c) {
          const Eigen::Index di = dg->dof(static_cast<int>(b), i, c), dj = dg->dof(static_cast<int>(b), j, c);
          const double ref = 0.5 * (reference->u(di) + reference->u(dj));
          const double err = ref - 0.5 * (ms.u(di) + ms.u(dj));
          num += mesh->triangle_area(t) / 3.0 * err * err;
          den += mesh->triangle_area(t) / 3.0 * ref * ref;
        }
      }
    }
  EXPECT_NEAR(r.e_u_l2, 100.0 * std::sqrt(num / den), 1e-9 * r.e_u_l2);
  double pnum = 0.0, pden = 0.0;
  for (std::size_t b = 0; b < part->num_blocks(); ++b) {
    const double d = reference->p(b) - ms.p(b);
    pnum += part->blocks[b].area * d * d;
    pden += part->blocks[b].area * reference->p(b) * reference->p(b);
  }
  EXPECT_NEAR(r.e_p_l2, 100.0 * std::sqrt(pnum / pden), 1e-9 * r.e_p_l2);
}

TEST_F(Study, MismatchedSolutionsAreRejected) {
  HybridSolution bad = *reference;
  bad.u.conservativeResize(bad.u.size() - 2);
  EXPECT_THROW(compute_errors(*dg, bad, *reference, 4.0), MeshMismatch);
  HybridSolution fewer = *reference;
  fewer.p.conservativeResize(fewer.p.size() - 1);
  EXPECT_THROW(compute_errors(*dg, *reference, fewer, 4.0), MeshMismatch);
}

TEST_F(Study, ConservationAudit) {
  const HybridSolution ms = solve_multiscale(space(8), ProblemData::example1(), 4.0);
  const ConservationAudit audit = audit_conservation(*dg, ms, ProblemData::example1());
  EXPECT_EQ(audit.flux.size(), part->num_blocks());
  EXPECT_LE(audit.max(), 1e-12);
  EXPECT_LE(audit.max_interior_jump, 1e-12);
  EXPECT_LE(audit.max_dirichlet_mismatch, 1e-12);
  // A non-solenoidal perturbation is detected.
  HybridSolution off = ms;
  for (Eigen::Index i = 0; i < off.u.size(); i += 2) off.u(i) *= 1.1;
  EXPECT_GT(audit_conservation(*dg, off, ProblemData::example1()).max(), 1e-3);
}

TEST_F(Study, GalerkinOrthogonality) {
  const BlockSpace s = space(8);
  const HybridSolution ms = solve_multiscale(s, ProblemData::example1(), 4.0);
  EXPECT_LE(galerkin_orthogonality(s, ms, *reference, 4.0).max_relative, 1e-8);
  HybridSolution off = ms;
  off.u += 0.01 * downscale(s, Eigen::VectorXd::Ones(s.dim()));
  EXPECT_GT(galerkin_orthogonality(s, off, *reference, 4.0).max_relative, 1e-6);
}

TEST_F(Study, EnergyErrorDecreasesWithNestedSpaces) {
  double previous = std::numeric_limits<double>::infinity();
  for (int L : {4, 8, 16, 32}) {
    const ErrorReport r = compute_errors(*dg, solve_multiscale(space(L), ProblemData::example1(), 4.0), *reference, 4.0);
    EXPECT_LE(r.e_u_dg, previous * (1 + 1e-9)) << "L = " << L;
    previous = r.e_u_dg;
  }
}

TEST_F(Study, CoercivityScan) {
  const BlockSpace s = space(8);
  const CoercivityScan a = coercivity_scan(s, 4.0, 100, 3);
  const CoercivityScan b = coercivity_scan(s, 4.0, 100, 3);
  const CoercivityScan c = coercivity_scan(s, 8.0, 100, 3);
  EXPECT_EQ(a.samples, 100);
  EXPECT_EQ(a.min_ratio, b.min_ratio);
  EXPECT_LE(a.min_ratio, a.max_ratio);
  EXPECT_GE(a.min_ratio, 0.1);
  EXPECT_GE(c.min_ratio, a.min_ratio);
}

TEST(StudyCsv, Format) {
  ErrorReport r;
  r.m_off = 8;
  r.dof = 1234;
  r.e_u_l2 = 12.345;
  r.e_u_dg = 7.0;
  r.e_u_h1 = 99.95;
  r.e_p_l2 = 0.04;
  r.conservation_max = 3.2e-15;
  std::ostringstream out;
  write_study_csv(out, {r});
  EXPECT_EQ(out.str(), "m_off,dof,e_u_l2,e_u_dg,e_u_h1,e_p_l2,conservation_max\n8,1234,12.3,7.0,100.0,0.0,3.200e-15\n");
}

TEST(RunStudy, RowsPerFamilyAndSize) {
  PerforationSet set;
  set.circles = {{{0.25, 0.25}, 0.1}};
  auto [mesh, part] = generate_perforated_mesh(set, 0.5, 8, BlockShape::rectangular);
  StudyOptions opt;
  opt.m_off = {4, 8};
  opt.layers = 1;
  const StudyResult res = run_study(mesh, part, ProblemData::example2(), opt);
  ASSERT_EQ(res.rows.size(), 4u);
  EXPECT_EQ(res.rows[0].mode, "standard");
  EXPECT_EQ(res.rows[2].mode, "oversampled_restricted");
  EXPECT_EQ(res.rows[0].layers, 0);
  EXPECT_EQ(res.rows[2].layers, 1);
  EXPECT_EQ(res.rows[1].dof, 8 * 4 + 4 + 4);
  for (const auto& r : res.rows) EXPECT_LE(r.conservation_max, 1e-12);
  EXPECT_GT(res.reference_dofs, 0);
  std::ostringstream out;
  write_study_csv(out, res.rows);
  const std::regex row(R"(\d+,\d+,[0-9.]+,[0-9.]+,[0-9.]+,[0-9.]+,[0-9.]+e[-+]\d+)");
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  int n = 0;
  while (std::getline(in, line)) {
    EXPECT_TRUE(std::regex_match(line, row)) << line;
    ++n;
  }
  EXPECT_EQ(n, 4);
}

}  // namespace
}  // namespace msstokes
