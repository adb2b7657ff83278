// Copyright 2026 The msstokes Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <iosfwd>

#include "msstokes/dgform.hpp"

namespace msstokes {

/// Legacy ASCII unstructured grid of the mesh with coarse block ids as cell data.
void write_mesh_vtk(std::ostream& out, const FineMesh& mesh);

/// Block-discontinuous field: points are duplicated per block, `u` (fine DG
/// coefficients) is point data, `p` (one value per block) and the block id
/// are cell data.
void write_solution_vtk(std::ostream& out, const DgSpace& dg, const Eigen::VectorXd& u, const Eigen::VectorXd& p);

void write_mesh_vtk(const std::filesystem::path& path, const FineMesh& mesh);
void write_solution_vtk(const std::filesystem::path& path, const DgSpace& dg, const Eigen::VectorXd& u,
                        const Eigen::VectorXd& p);

}  // namespace msstokes
