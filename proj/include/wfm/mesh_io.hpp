// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "wfm/mesh.hpp"

namespace wfm {

// ASCII mesh format:
//   wfmesh 1
//   <nv> <nt>
//   nv lines "x y z"   (%.16e, i.e. 17 significant digits)
//   nt lines "a b c d" (zero-based vertex indices)

void write_mesh(std::ostream& out, const Mesh& mesh);
void write_mesh(const std::filesystem::path& path, const Mesh& mesh);

/// The domain defaults to the vertices' bounding box when not given.
Mesh read_mesh(std::istream& in, std::optional<Box> domain = {});
Mesh read_mesh(const std::filesystem::path& path, std::optional<Box> domain = {});

}  // namespace wfm
