#include "gfnet/mesh_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "gfnet/error.hpp"
#include "gfnet/text_io.hpp"

namespace gfnet {

void write_mesh(std::ostream& out, const TriMesh& mesh) {
  out << "GFMESH 1\n";
  out << "V " << mesh.vertices.size() << '\n';
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i)
    out << format_double(mesh.vertices[i].x1) << ' ' << format_double(mesh.vertices[i].x2) << ' '
        << (mesh.is_boundary_vertex[i] ? 1 : 0) << '\n';
  out << "T " << mesh.triangles.size() << '\n';
  for (const auto& t : mesh.triangles) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out << "E " << mesh.boundary_edges.size() << '\n';
  for (const auto& e : mesh.boundary_edges)
    out << e.v[0] << ' ' << e.v[1] << ' ' << format_double(e.normal.x1) << ' '
        << format_double(e.normal.x2) << '\n';
}

TriMesh read_mesh(std::istream& in) {
  TokenReader rd(in);
  rd.expect("GFMESH");
  if (rd.integer("version") != 1) throw Error(ErrorKind::parse_failure, "unsupported GFMESH version");
  TriMesh mesh;
  rd.expect("V");
  const long nv = rd.integer("vertex count");
  if (nv < 0) throw Error(ErrorKind::parse_failure, "negative vertex count");
  for (long i = 0; i < nv; ++i) {
    const double x1 = rd.real("x1"), x2 = rd.real("x2");
    mesh.vertices.push_back({x1, x2});
    mesh.is_boundary_vertex.push_back(rd.integer("bflag") != 0);
  }
  auto index = [&](std::string_view what) {
    const long v = rd.integer(what);
    if (v < 0 || v >= nv) throw Error(ErrorKind::parse_failure, "vertex index out of range");
    return static_cast<int>(v);
  };
  rd.expect("T");
  const long nt = rd.integer("triangle count");
  for (long i = 0; i < nt; ++i) {
    const int a = index("i"), b = index("j"), c = index("k");
    mesh.triangles.push_back({a, b, c});
  }
  rd.expect("E");
  const long ne = rd.integer("edge count");
  for (long i = 0; i < ne; ++i) {
    BoundaryEdge e;
    e.v[0] = index("i");
    e.v[1] = index("j");
    e.normal.x1 = rd.real("nx");
    e.normal.x2 = rd.real("ny");
    mesh.boundary_edges.push_back(e);
  }
  for (const auto& t : mesh.triangles)
    if (!(signed_area(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]) > 0.0))
      throw Error(ErrorKind::degenerate_triangle, "mesh file contains a non-positive triangle");
  mesh.dual_area = dual_areas(mesh);
  return mesh;
}

void save_mesh(const std::filesystem::path& path, const TriMesh& mesh) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io_failure, "cannot write " + path.string());
  write_mesh(out, mesh);
}

TriMesh load_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io_failure, "cannot read " + path.string());
  return read_mesh(in);
}

}  // namespace gfnet
