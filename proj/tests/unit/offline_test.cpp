// Copyright 2026 The msstokes Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "msstokes/errors.hpp"
#include "msstokes/offline.hpp"
#include "test_support.hpp"

namespace msstokes {
namespace {

class OfflineBlock : public ::testing::Test {
 protected:
  void SetUp() override {
    std::tie(mesh, part) = testing::one_hole(0.5, 8, {0.74, 0.26}, 0.11);
    snaps = build_standard_snapshots(mesh, part, 1);
    k = std::make_unique<Subdomain>(mesh, snaps.support);
  }
  Eigen::MatrixXd pencil_a(const Eigen::MatrixXd& v) const { return v.transpose() * (k->stiffness() * v); }
  Eigen::MatrixXd pencil_s(const Eigen::MatrixXd& v) const {
    return (1.0 / part.H) * (v.transpose() * (k->boundary_mass() * v));
  }

  FineMesh mesh;
  CoarsePartition part;
  SnapshotSpace snaps;
  std::unique_ptr<Subdomain> k;
};

TEST_F(OfflineBlock, FullSelectionSpansTheSnapshots) {
  const BlockBasis basis = reduce_block(mesh, part, snaps, static_cast<int>(snaps.size()));
  EXPECT_EQ(basis.columns.cols(), snaps.size());
  EXPECT_LT(testing::largest_principal_angle_sine(snaps.columns, basis.columns), 1e-8);
}

TEST_F(OfflineBlock, EigenpairsSolveThePencil) {
  const int L = 10;
  const BlockBasis basis = reduce_block(mesh, part, snaps, L);
  ASSERT_EQ(basis.eigenvalues.size(), L);
  EXPECT_EQ(basis.requested, L);
  for (int i = 1; i < L; ++i) EXPECT_LE(basis.eigenvalues(i - 1), basis.eigenvalues(i));
  const Eigen::MatrixXd s = pencil_s(basis.columns);
  EXPECT_LT((s - Eigen::MatrixXd::Identity(L, L)).cwiseAbs().maxCoeff(), 1e-8);
  const Eigen::MatrixXd a = pencil_a(basis.columns);
  EXPECT_LT((a - Eigen::MatrixXd(basis.eigenvalues.asDiagonal())).cwiseAbs().maxCoeff(), 1e-8 * (1 + basis.eigenvalues(L - 1)));
  // Fields vanish on the hole, so no constant mode: the pencil is definite.
  EXPECT_GT(basis.eigenvalues(0), 1e-3);

  // Independent check: the L smallest eigenvalues of the projected pencil.
  const Eigen::MatrixXd fa = pencil_a(snaps.columns), fs = pencil_s(snaps.columns);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (fa + fa.transpose()), 0.5 * (fs + fs.transpose()),
                                                               Eigen::EigenvaluesOnly);
  for (int i = 0; i < L; ++i) EXPECT_NEAR(basis.eigenvalues(i), es.eigenvalues()(i), 1e-8 * (1 + es.eigenvalues()(i)));
}

TEST_F(OfflineBlock, ThreeSnapshotPencilByHand) {
  SnapshotSpace small = snaps;
  small.columns = snaps.columns.leftCols(3);
  const BlockBasis basis = reduce_block(mesh, part, small, 3);
  const Eigen::MatrixXd a = pencil_a(small.columns), s = pencil_s(small.columns);
  // det(A - λS) = 0 for each eigenvalue; scale by the magnitude of det(S).
  for (int i = 0; i < 3; ++i) {
    const double d = (a - basis.eigenvalues(i) * s).determinant();
    EXPECT_LT(std::abs(d), 1e-8 * std::abs(s.determinant()) * std::pow(1 + std::abs(basis.eigenvalues(i)), 3));
  }
  const double trace_ratio = (s.inverse() * a).trace();
  EXPECT_NEAR(basis.eigenvalues.sum(), trace_ratio, 1e-8 * std::abs(trace_ratio));
}

TEST_F(OfflineBlock, SpacesAreNested) {
  const BlockBasis b4 = reduce_block(mesh, part, snaps, 4);
  const BlockBasis b8 = reduce_block(mesh, part, snaps, 8);
  const BlockBasis b16 = reduce_block(mesh, part, snaps, 16);
  EXPECT_LT(testing::containment_defect(b8.columns, b4.columns), 1e-8);
  EXPECT_LT(testing::containment_defect(b16.columns, b8.columns), 1e-8);
}

TEST_F(OfflineBlock, InvariantUnderRecombination) {
  const Eigen::MatrixXd r = testing::random_matrix(snaps.size(), snaps.size(), 17) +
                            3.0 * Eigen::MatrixXd::Identity(snaps.size(), snaps.size());
  SnapshotSpace mixed = snaps;
  mixed.columns = snaps.columns * r;
  const int L = 7;
  const BlockBasis a = reduce_block(mesh, part, snaps, L);
  const BlockBasis b = reduce_block(mesh, part, mixed, L);
  for (int i = 0; i < L; ++i) EXPECT_NEAR(a.eigenvalues(i), b.eigenvalues(i), 1e-7 * (1 + a.eigenvalues(i)));
  const BlockBasis next = reduce_block(mesh, part, snaps, L + 1);
  ASSERT_GT(next.eigenvalues(L) - next.eigenvalues(L - 1), 1e-3);
  EXPECT_LT(testing::largest_principal_angle_sine(a.columns, b.columns), 1e-6);
}

TEST_F(OfflineBlock, RejectsBadCounts) {
  EXPECT_THROW(reduce_block(mesh, part, snaps, static_cast<int>(snaps.size()) + 1), DimensionMismatch);
  EXPECT_THROW(reduce_block(mesh, part, snaps, 0), DimensionMismatch);
  SnapshotSpace wrong = snaps;
  wrong.block = 0;
  EXPECT_THROW(reduce_block(mesh, part, wrong, 4), DimensionMismatch);
  std::vector<SnapshotSpace> all{snaps};
  EXPECT_THROW(reduce_all(mesh, part, all, {4}), DimensionMismatch);
}

TEST_F(OfflineBlock, OversampledReductionWithoutLayersMatches) {
  const SnapshotSpace wide = build_oversampled_snapshots(mesh, part, 1, 0, false);
  ASSERT_TRUE(wide.oversampled_support());
  ASSERT_EQ(wide.support, snaps.support);
  const int L = 6;
  const BlockBasis a = reduce_block(mesh, part, snaps, L);
  const BlockBasis b = reduce_block_oversampled(mesh, part, wide, L);
  EXPECT_EQ(b.dropped, 0);
  ASSERT_EQ(b.columns.cols(), L);
  for (int i = 0; i < L; ++i) EXPECT_NEAR(a.eigenvalues(i), b.eigenvalues(i), 1e-7 * (1 + a.eigenvalues(i)));
  EXPECT_LT(testing::largest_principal_angle_sine(a.columns, b.columns), 1e-6);
}

TEST_F(OfflineBlock, OversampledReductionDropsDependentColumns) {
  const SnapshotSpace wide = build_oversampled_snapshots(mesh, part, 1, 2, false);
  const BlockBasis b = reduce_block_oversampled(mesh, part, wide, 12);
  EXPECT_EQ(b.columns.cols() + b.dropped, 12);
  EXPECT_EQ(b.columns.rows(), static_cast<Eigen::Index>(k->num_dofs()));
  const Eigen::MatrixXd g = b.columns.transpose() * ((k->stiffness() + k->mass()) * b.columns);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
  EXPECT_GT(es.eigenvalues().minCoeff() / es.eigenvalues().maxCoeff(), 1e-14);
}

TEST(Offline, ConstantsComeFirstWithoutPerforations) {
  auto [mesh, part] = testing::unperforated(0.5, 6);
  const BlockBasis basis = reduce_block(mesh, part, build_standard_snapshots(mesh, part, 2), 4);
  EXPECT_NEAR(basis.eigenvalues(0), 0.0, 1e-9);
  EXPECT_NEAR(basis.eigenvalues(1), 0.0, 1e-9);
  EXPECT_GT(basis.eigenvalues(2), 1e-3);
  const Subdomain k(mesh, part.blocks[2].triangles);
  EXPECT_LT((k.stiffness() * basis.columns.leftCols(2)).norm(), 1e-9 * basis.columns.leftCols(2).norm());
}

TEST(Offline, EdgeMeanCheck) {
  auto [mesh, part] = testing::one_hole(0.5, 8, {0.26, 0.74}, 0.1);
  const DgSpace dg(mesh, part);
  std::vector<BlockBasis> good, poor;
  for (int b = 0; b < 4; ++b) {
    const SnapshotSpace s = build_standard_snapshots(mesh, part, b);
    good.push_back(reduce_block(mesh, part, s, 8));
    poor.push_back(reduce_block(mesh, part, s, 2));
  }
  EdgeMeanCheck check;
  const BlockSpace space = assemble_global_offline(dg, good, &check);
  EXPECT_TRUE(check.passed());
  EXPECT_EQ(check.sigma_min.size(), 4u);
  EXPECT_EQ(space.dim(), 32);
  assemble_global_offline(dg, poor, &check);
  EXPECT_FALSE(check.passed());
  EXPECT_EQ(check.failing.size(), 4u);

  // Edge means of the rigid translation (1, 0): ±|E| on vertical edges.
  const Subdomain k(mesh, part.blocks[0].triangles);
  Eigen::MatrixXd shift = Eigen::MatrixXd::Zero(k.num_dofs(), 1);
  for (std::size_t i = 0; i < k.num_nodes(); ++i) shift(2 * i, 0) = 1.0;
  const Eigen::MatrixXd m = edge_mean_matrix(mesh, part, 0, shift);
  const auto& edges = part.blocks[0].edges;
  for (std::size_t l = 0; l < edges.size(); ++l) {
    const CoarseEdge& e = part.edges[edges[l]];
    const double nx = e.plus == 0 ? e.normal.x : -e.normal.x;
    EXPECT_NEAR(m(0, static_cast<Eigen::Index>(l)), nx * e.length, 1e-14);
  }
}

TEST(Offline, TableDofCounts) {
  auto tri = testing::unperforated(0.1, 2, BlockShape::triangular);
  auto rect = testing::unperforated(0.1, 2, BlockShape::rectangular);
  auto fake = [](const CoarsePartition& p, int L) {
    std::vector<BlockBasis> v(p.num_blocks());
    for (auto& b : v) b.columns = Eigen::MatrixXd::Zero(1, L);
    return v;
  };
  EXPECT_EQ(table_dof_count(tri.second, fake(tri.second, 32)), 6880);
  EXPECT_EQ(table_dof_count(rect.second, fake(rect.second, 4)), 680);
}

TEST(Offline, ReduceAllDispatchesOnTheMode) {
  auto [mesh, part] = testing::one_hole(0.5, 6, {0.26, 0.24}, 0.12);
  SnapshotOptions opt;
  opt.mode = SnapshotMode::oversampled_unrestricted;
  opt.layers = 1;
  const auto snaps = build_snapshots(mesh, part, opt);
  const auto bases = reduce_all(mesh, part, snaps, {4, 5, 6, 7}, 2);
  for (int b = 0; b < 4; ++b) {
    const Subdomain k(mesh, part.blocks[b].triangles);
    EXPECT_EQ(bases[b].block, b);
    EXPECT_EQ(bases[b].requested, 4 + b);
    EXPECT_EQ(bases[b].columns.rows(), static_cast<Eigen::Index>(k.num_dofs()));
  }
}

}  // namespace
}  // namespace msstokes
