// Text mesh interchange, versioned header `mfv-mesh v1`.
//
//   mfv-mesh v1
//   vertices <count>
//   <index> <x> <y>
//   cells <count>
//   <index> <nv> <v0> ... <v(nv-1)> [point <x> <y>]
//   [labels <count> followed by free-form lines, ignored]
//
// Floats are written with 17 significant digits so a write/read round
// trip is bit-exact.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "mfv/errors.hpp"
#include "mfv/mesh.hpp"

namespace mfv {

namespace {

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
  throw MeshError("mesh parse error at line " + std::to_string(line) + ": " + what);
}

}  // namespace

void write_mesh(const Mesh& mesh, std::ostream& out) {
  // Exact-coordinate vertex dedup; generator meshes share vertices exactly.
  std::map<std::pair<double, double>, int> index;
  std::vector<Point2> verts;
  auto vid = [&](const Point2& p) {
    auto [it, inserted] = index.try_emplace({p.x, p.y}, static_cast<int>(verts.size()));
    if (inserted) verts.push_back(p);
    return it->second;
  };
  std::vector<std::vector<int>> loops(mesh.cell_count());
  for (std::size_t k = 0; k < mesh.cell_count(); ++k)
    for (const Point2& p : mesh.cell(static_cast<int>(k)).polygon.vertices())
      loops[k].push_back(vid(p));

  out << "mfv-mesh v1\n";
  out << "vertices " << verts.size() << "\n";
  for (std::size_t i = 0; i < verts.size(); ++i)
    out << i << " " << fmt17(verts[i].x) << " " << fmt17(verts[i].y) << "\n";
  out << "cells " << mesh.cell_count() << "\n";
  for (std::size_t k = 0; k < mesh.cell_count(); ++k) {
    const Cell& c = mesh.cell(static_cast<int>(k));
    out << k << " " << loops[k].size();
    for (int v : loops[k]) out << " " << v;
    out << " point " << fmt17(c.point.x) << " " << fmt17(c.point.y) << "\n";
  }
}

void write_mesh(const Mesh& mesh, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw MeshError("cannot open mesh file for writing: " + path);
  write_mesh(mesh, f);
  if (!f) throw MeshError("write failed: " + path);
}

Mesh read_mesh(std::istream& in) {
  std::size_t lineno = 0;
  std::string line;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return true;
    }
    return false;
  };

  if (!next_line() || line != "mfv-mesh v1")
    parse_fail(lineno == 0 ? 1 : lineno, "expected header 'mfv-mesh v1'");

  if (!next_line()) parse_fail(lineno, "expected 'vertices <count>'");
  std::size_t nv = 0;
  {
    std::istringstream ss(line);
    std::string kw;
    if (!(ss >> kw >> nv) || kw != "vertices") parse_fail(lineno, "expected 'vertices <count>'");
  }
  std::vector<Point2> verts(nv);
  std::vector<char> seen(nv, 0);
  for (std::size_t i = 0; i < nv; ++i) {
    if (!next_line()) parse_fail(lineno, "unexpected end of file in vertex list");
    std::istringstream ss(line);
    std::size_t idx;
    double x, y;
    if (!(ss >> idx >> x >> y)) parse_fail(lineno, "expected '<index> <x> <y>'");
    if (idx >= nv) parse_fail(lineno, "vertex index out of range");
    if (!std::isfinite(x) || !std::isfinite(y)) parse_fail(lineno, "non-finite coordinate");
    verts[idx] = {x, y};
    seen[idx] = 1;
  }
  for (std::size_t i = 0; i < nv; ++i)
    if (!seen[i]) throw MeshError("vertex " + std::to_string(i) + " missing from file");

  if (!next_line()) parse_fail(lineno, "expected 'cells <count>'");
  std::size_t nc = 0;
  {
    std::istringstream ss(line);
    std::string kw;
    if (!(ss >> kw >> nc) || kw != "cells") parse_fail(lineno, "expected 'cells <count>'");
  }
  std::vector<CellSpec> specs(nc);
  std::vector<char> cseen(nc, 0);
  for (std::size_t i = 0; i < nc; ++i) {
    if (!next_line()) parse_fail(lineno, "unexpected end of file in cell list");
    std::istringstream ss(line);
    std::size_t idx, count;
    if (!(ss >> idx >> count)) parse_fail(lineno, "expected '<index> <nv> ...'");
    if (idx >= nc) parse_fail(lineno, "cell index out of range");
    if (count < 3) parse_fail(lineno, "cell needs at least 3 vertices");
    CellSpec spec;
    for (std::size_t v = 0; v < count; ++v) {
      std::size_t vi;
      if (!(ss >> vi)) parse_fail(lineno, "missing vertex index in cell loop");
      if (vi >= nv) parse_fail(lineno, "vertex index out of range in cell loop");
      spec.loop.push_back(verts[vi]);
    }
    std::string kw;
    if (ss >> kw) {
      if (kw != "point") parse_fail(lineno, "unexpected token '" + kw + "'");
      double x, y;
      if (!(ss >> x >> y)) parse_fail(lineno, "expected 'point <x> <y>'");
      spec.point = Point2{x, y};
    }
    specs[idx] = std::move(spec);
    cseen[idx] = 1;
  }
  for (std::size_t i = 0; i < nc; ++i)
    if (!cseen[i]) throw MeshError("cell " + std::to_string(i) + " missing from file");

  // Optional labels section, carried for forward compatibility only.
  if (next_line()) {
    std::istringstream ss(line);
    std::string kw;
    std::size_t count = 0;
    if (!(ss >> kw >> count) || kw != "labels") parse_fail(lineno, "expected 'labels <count>'");
    for (std::size_t i = 0; i < count; ++i)
      if (!next_line()) parse_fail(lineno, "unexpected end of file in labels");
  }

  return Mesh::build(specs);
}

Mesh read_mesh(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw MeshError("cannot open mesh file: " + path);
  return read_mesh(f);
}

}  // namespace mfv
