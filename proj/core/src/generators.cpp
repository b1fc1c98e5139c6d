#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "mfv/errors.hpp"
#include "mfv/mesh.hpp"

namespace mfv {

namespace {

void require_positive(int n) {
  if (n < 1) throw MeshError("grid resolution must be >= 1, got " + std::to_string(n));
}

std::optional<Point2> cell_point_for(const std::vector<Point2>& tri, CellPointPolicy policy,
                                     std::size_t index) {
  if (policy == CellPointPolicy::Centroid) return std::nullopt;
  Point2 cc = triangle_circumcenter(tri[0], tri[1], tri[2]);
  ConvexPolygon poly(tri);
  if (!point_strictly_inside(cc, poly, 1e-12 * polygon_diameter(poly)))
    throw MeshError("cell " + std::to_string(index) +
                    ": circumcenter is not strictly inside the triangle");
  return cc;
}

}  // namespace

Mesh gen_uniform_squares(int n) {
  require_positive(n);
  const double h = 1.0 / n;
  std::vector<CellSpec> specs;
  specs.reserve(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      specs.push_back({{{i * h, j * h},
                        {(i + 1) * h, j * h},
                        {(i + 1) * h, (j + 1) * h},
                        {i * h, (j + 1) * h}},
                       std::nullopt});
    }
  return Mesh::build(specs);
}

Mesh gen_uniform_triangles(int n, TrianglePattern pattern, CellPointPolicy points) {
  require_positive(n);
  const double h = 1.0 / n;
  std::vector<CellSpec> specs;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      Point2 v00{i * h, j * h};
      Point2 v10{(i + 1) * h, j * h};
      Point2 v11{(i + 1) * h, (j + 1) * h};
      Point2 v01{i * h, (j + 1) * h};
      std::vector<std::vector<Point2>> tris;
      if (pattern == TrianglePattern::Diagonal) {
        tris = {{v00, v10, v11}, {v00, v11, v01}};
      } else {
        Point2 c{(i + 0.5) * h, (j + 0.5) * h};
        tris = {{v00, v10, c}, {v10, v11, c}, {v11, v01, c}, {v01, v00, c}};
      }
      for (auto& t : tris) {
        auto pt = cell_point_for(t, points, specs.size());
        specs.push_back({std::move(t), pt});
      }
    }
  return Mesh::build(specs);
}

Mesh gen_refined_nonconforming(int base_n, const std::vector<RefineBox>& boxes) {
  require_positive(base_n);
  std::vector<int> factor(static_cast<std::size_t>(base_n) * base_n, 1);
  for (const RefineBox& b : boxes) {
    if (b.factor < 2) throw MeshError("refinement factor must be >= 2");
    if (b.i0 < 0 || b.j0 < 0 || b.i1 >= base_n || b.j1 >= base_n || b.i0 > b.i1 || b.j0 > b.j1)
      throw MeshError("refinement box outside the base grid");
    for (int j = b.j0; j <= b.j1; ++j)
      for (int i = b.i0; i <= b.i1; ++i) {
        int& f = factor[static_cast<std::size_t>(j) * base_n + i];
        if (f != 1 && f != b.factor)
          throw MeshError("overlapping refinement regions with conflicting factors at cell (" +
                          std::to_string(i) + ", " + std::to_string(j) + ")");
        f = b.factor;
      }
  }

  const double h = 1.0 / base_n;
  std::vector<CellSpec> specs;
  for (int j = 0; j < base_n; ++j)
    for (int i = 0; i < base_n; ++i) {
      int f = factor[static_cast<std::size_t>(j) * base_n + i];
      const double hf = h / f;
      for (int sj = 0; sj < f; ++sj)
        for (int si = 0; si < f; ++si) {
          double x0 = i * h + si * hf;
          double y0 = j * h + sj * hf;
          specs.push_back(
              {{{x0, y0}, {x0 + hf, y0}, {x0 + hf, y0 + hf}, {x0, y0 + hf}}, std::nullopt});
        }
    }
  return Mesh::build(specs);
}

Mesh gen_distorted_quads(int n, const Distortion& d) {
  require_positive(n);
  const double h = 1.0 / n;
  std::vector<Point2> verts(static_cast<std::size_t>(n + 1) * (n + 1));
  std::mt19937_64 rng(d.seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);

  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) {
      Point2 p{i * h, j * h};
      if (d.map_amplitude != 0.0) {
        // Vanishes on the boundary, so boundary vertices stay put.
        double s = std::sin(2.0 * std::numbers::pi * p.x) * std::sin(2.0 * std::numbers::pi * p.y);
        p.x += d.map_amplitude * h * s;
        p.y += d.map_amplitude * h * s;
      }
      bool interior = i > 0 && i < n && j > 0 && j < n;
      if (d.jitter_amplitude != 0.0) {
        double dx = d.jitter_amplitude * h * uni(rng);
        double dy = d.jitter_amplitude * h * uni(rng);
        if (interior) {
          p.x += dx;
          p.y += dy;
        }
        // Boundary vertices are left alone; draws are consumed anyway to
        // keep the stream independent of which vertices are interior.
      }
      verts[static_cast<std::size_t>(j) * (n + 1) + i] = p;
    }

  std::vector<CellSpec> specs;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      auto v = [&](int ii, int jj) { return verts[static_cast<std::size_t>(jj) * (n + 1) + ii]; };
      try {
        specs.push_back({{v(i, j), v(i + 1, j), v(i + 1, j + 1), v(i, j + 1)}, std::nullopt});
        ConvexPolygon check(specs.back().loop);
      } catch (const GeometryError& e) {
        throw MeshError("distortion produced an invalid quad at cell (" + std::to_string(i) +
                        ", " + std::to_string(j) + "): " + e.what());
      }
    }
  return Mesh::build(specs);
}

}  // namespace mfv
