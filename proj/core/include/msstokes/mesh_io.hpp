// Copyright 2026 The msstokes Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>

#include "msstokes/geometry.hpp"

namespace msstokes {

// Native ASCII mesh format. Sections, each closed by `$End<Name>` and led by
// a count line; indices are 0-based:
//
//   $MeshParameters   h
//   $Nodes            index x y
//   $Triangles        index n1 n2 n3 coarse_block_id
//   $Edges            index n1 n2 marker   (0 interior, 1 Γ_D, 2 Γ_N, 3 perforation)
//   $Perforations     index cx cy r        (optional)
//
// Gmsh v2 ASCII files are accepted too: triangles carry the coarse block id
// as physical tag (id + 1), line elements map physical tags 1/2/3 to
// Γ_D/Γ_N/perforation.

void write_mesh(std::ostream& out, const FineMesh& mesh);
void write_mesh(const std::filesystem::path& path, const FineMesh& mesh);

FineMesh read_mesh(std::istream& in);
FineMesh import_mesh(const std::filesystem::path& path);

}  // namespace msstokes
