#pragma once

#include <filesystem>
#include <iosfwd>

#include "gfnet/geometry.hpp"

namespace gfnet {

// GFMESH 1 text format:
//   GFMESH 1
//   V <count>   then `x1 x2 bflag` per vertex
//   T <count>   then `i j k` per triangle (0-based, counterclockwise)
//   E <count>   then `i j nx ny` per boundary edge
void write_mesh(std::ostream& out, const TriMesh& mesh);
TriMesh read_mesh(std::istream& in);

void save_mesh(const std::filesystem::path& path, const TriMesh& mesh);
TriMesh load_mesh(const std::filesystem::path& path);

}  // namespace gfnet
