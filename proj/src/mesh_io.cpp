// SPDX-License-Identifier: Apache-2.0
#include "wfm/mesh_io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "wfm/error.hpp"

namespace wfm {

void write_mesh(std::ostream& out, const Mesh& mesh) {
  out << "wfmesh 1\n" << mesh.num_vertices() << ' ' << mesh.num_tets() << '\n';
  char buf[128];
  for (const auto& p : mesh.vertices()) {
    std::snprintf(buf, sizeof buf, "%.16e %.16e %.16e\n", p.x(), p.y(), p.z());
    out << buf;
  }
  for (const auto& t : mesh.tets()) out << t[0] << ' ' << t[1] << ' ' << t[2] << ' ' << t[3] << '\n';
}

void write_mesh(const std::filesystem::path& path, const Mesh& mesh) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  write_mesh(out, mesh);
  if (!out) throw Error(ErrorKind::Io, "failed writing " + path.string());
}

Mesh read_mesh(std::istream& in, std::optional<Box> domain) {
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "wfmesh" || version != 1) {
    throw Error(ErrorKind::Io, "missing 'wfmesh 1' header");
  }
  long nv = 0, nt = 0;
  if (!(in >> nv >> nt) || nv < 0 || nt < 0) throw Error(ErrorKind::Io, "bad mesh size line");
  std::vector<Point3> vertices(static_cast<std::size_t>(nv));
  for (auto& p : vertices) {
    if (!(in >> p.x() >> p.y() >> p.z())) throw Error(ErrorKind::Io, "truncated vertex list");
  }
  std::vector<Tetra> tets(static_cast<std::size_t>(nt));
  for (auto& t : tets) {
    if (!(in >> t[0] >> t[1] >> t[2] >> t[3])) throw Error(ErrorKind::Io, "truncated tet list");
  }
  return Mesh(std::move(vertices), std::move(tets), domain);
}

Mesh read_mesh(const std::filesystem::path& path, std::optional<Box> domain) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return read_mesh(in, domain);
}

}  // namespace wfm
