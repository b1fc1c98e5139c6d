#include "mfv/mesh.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "mfv/errors.hpp"
#include "mfv/log.hpp"

namespace mfv {

namespace {

struct Interval {
  double t0, t1;
};

// Merge intervals whose gaps are below tol.
std::vector<Interval> merge_intervals(std::vector<Interval> iv, double tol) {
  std::sort(iv.begin(), iv.end(), [](const Interval& a, const Interval& b) { return a.t0 < b.t0; });
  std::vector<Interval> out;
  for (const Interval& s : iv) {
    if (!out.empty() && s.t0 <= out.back().t1 + tol)
      out.back().t1 = std::max(out.back().t1, s.t1);
    else
      out.push_back(s);
  }
  return out;
}

double point_line_distance(const Point2& x, const Point2& origin, const Vec2& unit_dir) {
  return std::abs((x - origin).cross(unit_dir));
}

struct PairKeyHash {
  std::size_t operator()(const std::pair<int, int>& p) const {
    return std::hash<long long>()((static_cast<long long>(p.first) << 32) ^ p.second);
  }
};

}  // namespace

bool Mesh::all_simplicial() const {
  for (const Cell& c : cells_)
    if (c.edge_ids.size() != 3) return false;
  return true;
}

Mesh Mesh::build(const std::vector<CellSpec>& specs) {
  Mesh mesh;
  if (specs.empty()) throw MeshError("mesh has no cells");

  // Cells with validated polygons and cell points.
  std::vector<std::string> bad;
  for (std::size_t k = 0; k < specs.size(); ++k) {
    ConvexPolygon poly(specs[k].loop);
    Cell c{std::move(poly), Point2{}, {}, 0.0, 0.0, Point2{}};
    c.measure = polygon_measure(c.polygon);
    c.diameter = polygon_diameter(c.polygon);
    c.centroid = polygon_centroid(c.polygon);
    c.point = specs[k].point.value_or(c.centroid);
    if (!point_strictly_inside(c.point, c.polygon, 1e-12 * c.diameter))
      bad.push_back("cell " + std::to_string(k) + ": point x_K not strictly inside");
    mesh.cells_.push_back(std::move(c));
  }
  if (!bad.empty()) {
    std::string msg = "invalid cell points:";
    for (const auto& s : bad) msg += " [" + s + "]";
    throw MeshError(msg);
  }

  // Global tolerance from the domain bounding box.
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300, hmax = 0.0;
  for (const Cell& c : mesh.cells_) {
    for (const Point2& v : c.polygon.vertices()) {
      xmin = std::min(xmin, v.x);
      xmax = std::max(xmax, v.x);
      ymin = std::min(ymin, v.y);
      ymax = std::max(ymax, v.y);
    }
    hmax = std::max(hmax, c.diameter);
  }
  const double dom_diam = std::hypot(xmax - xmin, ymax - ymin);
  const double tol = 1e-9 * dom_diam;

  // Candidate pairs from a uniform bucket grid keyed by cell bounding boxes.
  const double bucket = std::max(hmax, 1e-12 * dom_diam);
  std::unordered_map<long long, std::vector<int>> grid;
  auto bucket_key = [&](double x, double y) {
    long long ix = static_cast<long long>(std::floor((x - xmin) / bucket));
    long long iy = static_cast<long long>(std::floor((y - ymin) / bucket));
    return (ix << 32) ^ (iy & 0xffffffffLL);
  };
  std::vector<std::array<double, 4>> bbox(mesh.cells_.size());
  for (std::size_t k = 0; k < mesh.cells_.size(); ++k) {
    double bx0 = 1e300, bx1 = -1e300, by0 = 1e300, by1 = -1e300;
    for (const Point2& v : mesh.cells_[k].polygon.vertices()) {
      bx0 = std::min(bx0, v.x);
      bx1 = std::max(bx1, v.x);
      by0 = std::min(by0, v.y);
      by1 = std::max(by1, v.y);
    }
    bbox[k] = {bx0, bx1, by0, by1};
    for (double gx = bx0; gx <= bx1 + bucket; gx += bucket)
      for (double gy = by0; gy <= by1 + bucket; gy += bucket)
        grid[bucket_key(std::min(gx, bx1), std::min(gy, by1))].push_back(static_cast<int>(k));
  }
  std::vector<std::pair<int, int>> pairs;
  for (auto& [key, ids] : grid) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    for (std::size_t a = 0; a < ids.size(); ++a)
      for (std::size_t b = a + 1; b < ids.size(); ++b) pairs.emplace_back(ids[a], ids[b]);
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

  // Interior-edge discovery: collinear boundary overlap per cell pair.
  struct PairOverlap {
    Point2 origin;
    Vec2 dir;  // unit, along the lower cell's side (CCW for that cell)
    std::vector<Interval> ivals;
  };
  std::unordered_map<std::pair<int, int>, PairOverlap, PairKeyHash> overlaps;

  for (const auto& [i, j] : pairs) {
    const auto& bi = bbox[i];
    const auto& bj = bbox[j];
    if (bi[1] < bj[0] - tol || bj[1] < bi[0] - tol || bi[3] < bj[2] - tol || bj[3] < bi[2] - tol)
      continue;
    const Cell& ci = mesh.cells_[i];
    const Cell& cj = mesh.cells_[j];

    double ov = convex_overlap_area(ci.polygon, cj.polygon);
    if (ov > 1e-10 * std::min(ci.measure, cj.measure))
      throw MeshError("cells " + std::to_string(i) + " and " + std::to_string(j) +
                      " have overlapping interiors (overlap area " + std::to_string(ov) + ")");

    PairOverlap po;
    bool have_line = false;
    for (std::size_t si = 0; si < ci.polygon.size(); ++si) {
      Segment s1 = ci.polygon.side(si);
      double len1 = s1.length();
      Vec2 d1 = (s1.b - s1.a) / len1;
      for (std::size_t sj = 0; sj < cj.polygon.size(); ++sj) {
        Segment s2 = cj.polygon.side(sj);
        if (point_line_distance(s2.a, s1.a, d1) > tol ||
            point_line_distance(s2.b, s1.a, d1) > tol)
          continue;
        // Collinear; overlap interval in s1's parameterization.
        double ta = (s2.a - s1.a).dot(d1);
        double tb = (s2.b - s1.a).dot(d1);
        double lo = std::max(std::min(ta, tb), 0.0);
        double hi = std::min(std::max(ta, tb), len1);
        if (hi - lo <= tol) continue;
        if (!have_line) {
          po.origin = s1.a;
          po.dir = d1;
          have_line = true;
        }
        // Re-express in the common line's parameterization.
        double u0 = (s1.a + d1 * lo - po.origin).dot(po.dir);
        double u1 = (s1.a + d1 * hi - po.origin).dot(po.dir);
        po.ivals.push_back({std::min(u0, u1), std::max(u0, u1)});
      }
    }
    if (have_line) overlaps.emplace(std::make_pair(i, j), std::move(po));
  }

  // Deterministic interior-edge ordering: (min cell, max cell, position).
  std::vector<std::pair<int, int>> pair_order;
  pair_order.reserve(overlaps.size());
  for (const auto& [key, po] : overlaps) pair_order.push_back(key);
  std::sort(pair_order.begin(), pair_order.end());

  for (const auto& key : pair_order) {
    PairOverlap& po = overlaps[key];
    for (const Interval& iv : merge_intervals(std::move(po.ivals), tol)) {
      if (iv.t1 - iv.t0 <= tol) continue;
      Edge e;
      e.segment = Segment(po.origin + po.dir * iv.t0, po.origin + po.dir * iv.t1);
      e.barycenter = segment_midpoint(e.segment);
      e.length = e.segment.length();
      e.cell_a = key.first;
      e.cell_b = key.second;
      e.kind = EdgeKind::Interior;
      e.normal_a = Vec2(po.dir.y, -po.dir.x);
      mesh.edges_.push_back(e);
    }
  }
  mesh.n_interior_ = mesh.edges_.size();

  // Per-cell, per-side coverage by interior edges; leftovers become
  // boundary edges (split at vertices by working per side).
  std::vector<std::vector<int>> cell_interior(mesh.cells_.size());
  for (std::size_t e = 0; e < mesh.edges_.size(); ++e) {
    cell_interior[mesh.edges_[e].cell_a].push_back(static_cast<int>(e));
    cell_interior[mesh.edges_[e].cell_b].push_back(static_cast<int>(e));
  }

  // (cell, side, t0, edge_id) incidence records, for ordering edge_ids.
  struct Incidence {
    int cell;
    std::size_t side;
    double t0;
    int edge;
  };
  std::vector<Incidence> incid;

  for (std::size_t k = 0; k < mesh.cells_.size(); ++k) {
    const Cell& c = mesh.cells_[k];
    for (std::size_t si = 0; si < c.polygon.size(); ++si) {
      Segment s = c.polygon.side(si);
      double len = s.length();
      Vec2 d = (s.b - s.a) / len;
      std::vector<Interval> covered;
      for (int e : cell_interior[k]) {
        const Segment& es = mesh.edges_[e].segment;
        if (point_line_distance(es.a, s.a, d) > tol || point_line_distance(es.b, s.a, d) > tol)
          continue;
        double ta = (es.a - s.a).dot(d);
        double tb = (es.b - s.a).dot(d);
        double lo = std::max(std::min(ta, tb), 0.0);
        double hi = std::min(std::max(ta, tb), len);
        if (hi - lo <= tol) continue;
        covered.push_back({lo, hi});
        incid.push_back({static_cast<int>(k), si, lo, e});
      }
      covered = merge_intervals(std::move(covered), tol);
      // Complement of the covered set in [0, len].
      double cursor = 0.0;
      auto emit_boundary = [&](double a, double b) {
        if (b - a <= 10 * tol) return;
        Edge e;
        e.segment = Segment(s.a + d * a, s.a + d * b);
        e.barycenter = segment_midpoint(e.segment);
        e.length = e.segment.length();
        e.cell_a = static_cast<int>(k);
        e.cell_b = -1;
        e.kind = EdgeKind::Boundary;
        e.normal_a = Vec2(d.y, -d.x);
        incid.push_back({static_cast<int>(k), si, a, static_cast<int>(mesh.edges_.size())});
        mesh.edges_.push_back(e);
      };
      for (const Interval& iv : covered) {
        emit_boundary(cursor, iv.t0);
        cursor = std::max(cursor, iv.t1);
      }
      emit_boundary(cursor, len);
    }
  }

  // edge_ids ordered along each boundary loop; an interior edge that spans
  // two collinear sides appears once.
  std::sort(incid.begin(), incid.end(), [](const Incidence& a, const Incidence& b) {
    if (a.cell != b.cell) return a.cell < b.cell;
    if (a.side != b.side) return a.side < b.side;
    return a.t0 < b.t0;
  });
  for (const Incidence& in : incid) {
    auto& ids = mesh.cells_[in.cell].edge_ids;
    if (std::find(ids.begin(), ids.end(), in.edge) == ids.end()) ids.push_back(in.edge);
  }

  // Closure check: the cell's edges must tile its polygon boundary.
  for (std::size_t k = 0; k < mesh.cells_.size(); ++k) {
    const Cell& c = mesh.cells_[k];
    double perim = 0.0;
    for (std::size_t si = 0; si < c.polygon.size(); ++si) perim += c.polygon.side(si).length();
    double covered = 0.0;
    for (int e : c.edge_ids) covered += mesh.edges_[e].length;
    if (std::abs(covered - perim) > 1e-8 * perim)
      throw MeshError("cell " + std::to_string(k) +
                      ": edges do not tile the boundary (covered " + std::to_string(covered) +
                      " of perimeter " + std::to_string(perim) + ")");
  }

  // Boundary loops: negative-area loops are interior holes (tiling gaps).
  {
    const double q = std::max(tol, 1e-300);
    auto qkey = [&](const Point2& p) {
      long long ix = static_cast<long long>(std::llround((p.x - xmin) / q));
      long long iy = static_cast<long long>(std::llround((p.y - ymin) / q));
      return (ix << 32) ^ (iy & 0xffffffffLL);
    };
    std::unordered_map<long long, int> by_start;
    std::vector<int> boundary_ids;
    for (std::size_t e = 0; e < mesh.edges_.size(); ++e)
      if (mesh.edges_[e].kind == EdgeKind::Boundary) {
        boundary_ids.push_back(static_cast<int>(e));
        by_start[qkey(mesh.edges_[e].segment.a)] = static_cast<int>(e);
      }
    auto find_next = [&](const Point2& p) -> int {
      long long ix = static_cast<long long>(std::llround((p.x - xmin) / q));
      long long iy = static_cast<long long>(std::llround((p.y - ymin) / q));
      for (long long dx = -1; dx <= 1; ++dx)
        for (long long dy = -1; dy <= 1; ++dy) {
          auto it = by_start.find(((ix + dx) << 32) ^ ((iy + dy) & 0xffffffffLL));
          if (it != by_start.end() && it->second >= 0 &&
              (mesh.edges_[it->second].segment.a - p).norm() <= 2 * q)
            return it->second;
        }
      return -1;
    };

    std::vector<char> used(mesh.edges_.size(), 0);
    double total_loop_area = 0.0;
    for (int e0 : boundary_ids) {
      if (used[e0]) continue;
      double area2 = 0.0;
      int e = e0;
      std::size_t steps = 0;
      while (true) {
        used[e] = 1;
        by_start[qkey(mesh.edges_[e].segment.a)] = -1;
        const Segment& s = mesh.edges_[e].segment;
        area2 += s.a.cross(s.b);
        int next = find_next(s.b);
        if (next < 0) {
          if ((s.b - mesh.edges_[e0].segment.a).norm() <= 2 * q) break;
          throw MeshError("boundary is not a closed loop near (" + std::to_string(s.b.x) +
                          ", " + std::to_string(s.b.y) + "): tiling gap or overlap");
        }
        e = next;
        if (++steps > mesh.edges_.size())
          throw MeshError("boundary loop traversal did not terminate");
      }
      double loop_area = 0.5 * area2;
      if (loop_area < -tol * dom_diam)
        throw MeshError("tiling gap: interior hole of area " + std::to_string(-loop_area));
      total_loop_area += loop_area;
    }
    mesh.domain_area_ = total_loop_area;
  }

  double cell_area_sum = 0.0;
  for (const Cell& c : mesh.cells_) cell_area_sum += c.measure;
  if (std::abs(cell_area_sum - mesh.domain_area_) > 1e-10 * mesh.domain_area_)
    throw MeshError("tiling error: cell areas sum to " + std::to_string(cell_area_sum) +
                    " but the boundary encloses " + std::to_string(mesh.domain_area_));

  // Metrics (d = 2).
  double regul = 0.0;
  for (const Cell& c : mesh.cells_) {
    mesh.size_ = std::max(mesh.size_, c.diameter);
    double rho = polygon_inradius(c.polygon);
    double shape = (c.diameter * c.diameter) / (rho * rho);
    regul = std::max({regul, shape, static_cast<double>(c.edge_ids.size())});
  }
  mesh.regularity_ = regul;

  log::info("built mesh: " + std::to_string(mesh.cell_count()) + " cells, " +
            std::to_string(mesh.interior_edge_count()) + " interior edges, size " +
            std::to_string(mesh.size_) + ", regul " + std::to_string(mesh.regularity_));
  return mesh;
}

}  // namespace mfv
