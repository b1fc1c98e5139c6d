#include "mfv/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace mfv {

namespace {

constexpr double kRelTol = 1e-12;

double loop_signed_area(const std::vector<Point2>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point2& a = v[i];
    const Point2& b = v[(i + 1) % v.size()];
    s += a.cross(b);
  }
  return 0.5 * s;
}

double loop_diameter(const std::vector<Point2>& v) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      d2 = std::max(d2, (v[i] - v[j]).norm2());
  return std::sqrt(d2);
}

// Supporting half-planes n . x <= d of a CCW polygon, one per side with
// nonzero length (n is the outward unit normal).
struct HalfPlane {
  Vec2 n;
  double d;
};

std::vector<HalfPlane> half_planes(const ConvexPolygon& p) {
  std::vector<HalfPlane> hp;
  const auto& v = p.vertices();
  for (std::size_t i = 0; i < v.size(); ++i) {
    Vec2 t = v[(i + 1) % v.size()] - v[i];
    double len = t.norm();
    if (len == 0.0) continue;
    Vec2 n(t.y / len, -t.x / len);
    hp.push_back({n, n.dot(v[i])});
  }
  return hp;
}

}  // namespace

ConvexPolygon::ConvexPolygon(std::vector<Point2> vertices) : verts_(std::move(vertices)) {
  if (verts_.size() < 3) throw GeometryError("polygon needs at least 3 vertices");
  for (const Point2& v : verts_)
    if (!std::isfinite(v.x) || !std::isfinite(v.y))
      throw GeometryError("polygon vertex has non-finite coordinates");

  const double diam = loop_diameter(verts_);
  const double tol = kRelTol * std::max(diam, 1e-300);
  const std::size_t n = verts_.size();
  for (std::size_t i = 0; i < n; ++i)
    if ((verts_[(i + 1) % n] - verts_[i]).norm() <= tol)
      throw GeometryError("polygon has coincident consecutive vertices");

  const double area = loop_signed_area(verts_);
  if (area <= kRelTol * diam * diam)
    throw GeometryError("polygon is degenerate or not counterclockwise (area " +
                        std::to_string(area) + ")");

  // Convexity up to collinearity tolerance: no strictly negative turn.
  for (std::size_t i = 0; i < n; ++i) {
    Vec2 e1 = verts_[(i + 1) % n] - verts_[i];
    Vec2 e2 = verts_[(i + 2) % n] - verts_[(i + 1) % n];
    if (e1.cross(e2) < -kRelTol * diam * diam)
      throw GeometryError("polygon is not convex at vertex " + std::to_string((i + 1) % n));
  }
}

double polygon_measure(const ConvexPolygon& p) {
  double area = loop_signed_area(p.vertices());
  if (area <= 0.0) throw GeometryError("degenerate polygon: non-positive area");
  return area;
}

Point2 polygon_centroid(const ConvexPolygon& p) {
  const auto& v = p.vertices();
  double a = 0.0;
  Vec2 c(0.0, 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point2& p0 = v[i];
    const Point2& p1 = v[(i + 1) % v.size()];
    double w = p0.cross(p1);
    a += w;
    c += (p0 + p1) * w;
  }
  if (a <= 0.0) throw GeometryError("degenerate polygon: non-positive area");
  return c / (3.0 * a);
}

double polygon_diameter(const ConvexPolygon& p) { return loop_diameter(p.vertices()); }

InscribedDisk polygon_chebyshev(const ConvexPolygon& p) {
  const auto hp = half_planes(p);
  const double diam = polygon_diameter(p);
  const double feas_tol = 1e-10 * diam;

  // The optimum of the 3-variable LP sits at a vertex where three
  // constraints are active. The constraint count is tiny, so enumerate.
  InscribedDisk best;
  best.radius = -1.0;
  const std::size_t m = hp.size();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      for (std::size_t k = j + 1; k < m; ++k) {
        // Solve [n; 1] (c, r) = d for the triple.
        std::array<std::array<double, 3>, 3> A = {{{hp[i].n.x, hp[i].n.y, 1.0},
                                                   {hp[j].n.x, hp[j].n.y, 1.0},
                                                   {hp[k].n.x, hp[k].n.y, 1.0}}};
        std::array<double, 3> b = {hp[i].d, hp[j].d, hp[k].d};
        // Cramer.
        auto det3 = [](const std::array<std::array<double, 3>, 3>& M) {
          return M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) -
                 M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
                 M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]);
        };
        double det = det3(A);
        if (std::abs(det) < 1e-14) continue;
        std::array<std::array<double, 3>, 3> Ax = A, Ay = A, Ar = A;
        for (int r = 0; r < 3; ++r) {
          Ax[r][0] = b[r];
          Ay[r][1] = b[r];
          Ar[r][2] = b[r];
        }
        double cx = det3(Ax) / det;
        double cy = det3(Ay) / det;
        double rr = det3(Ar) / det;
        if (rr <= best.radius) continue;
        bool feasible = true;
        for (const HalfPlane& h : hp)
          if (h.n.x * cx + h.n.y * cy + rr > h.d + feas_tol) {
            feasible = false;
            break;
          }
        if (feasible) best = {{cx, cy}, rr};
      }

  if (best.radius <= 0.0)
    throw GeometryError("inscribed-disk LP infeasible: degenerate polygon");
  return best;
}

double polygon_inradius(const ConvexPolygon& p) { return polygon_chebyshev(p).radius; }

Point2 segment_midpoint(const Segment& s) { return (s.a + s.b) * 0.5; }

double distance_to_boundary(const Point2& x, const ConvexPolygon& p) {
  double best = std::numeric_limits<double>::infinity();
  const auto& v = p.vertices();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point2& a = v[i];
    const Point2& b = v[(i + 1) % v.size()];
    Vec2 ab = b - a;
    double t = std::clamp((x - a).dot(ab) / ab.norm2(), 0.0, 1.0);
    best = std::min(best, (x - (a + ab * t)).norm());
  }
  return best;
}

bool point_strictly_inside(const Point2& x, const ConvexPolygon& p, double eps) {
  for (const auto& h : half_planes(p))
    if (h.n.dot(x) > h.d - eps) return false;
  return true;
}

Vec2 outward_normal(const Segment& s, const ConvexPolygon& cell) {
  const double diam = polygon_diameter(cell);
  const double tol = 1e-9 * diam;
  if (distance_to_boundary(s.a, cell) > tol || distance_to_boundary(s.b, cell) > tol ||
      distance_to_boundary(segment_midpoint(s), cell) > tol)
    throw GeometryError("segment does not lie on the cell boundary");

  Vec2 t = s.b - s.a;
  double len = t.norm();
  if (len == 0.0) throw GeometryError("zero-length segment");
  Vec2 n(t.y / len, -t.x / len);
  if (n.dot(segment_midpoint(s) - polygon_centroid(cell)) < 0.0) n = n * -1.0;
  return n;
}

double convex_overlap_area(const ConvexPolygon& p, const ConvexPolygon& q) {
  // Clip p against each supporting half-plane of q.
  std::vector<Point2> poly = p.vertices();
  for (const auto& h : half_planes(q)) {
    std::vector<Point2> out;
    out.reserve(poly.size() + 2);
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point2& a = poly[i];
      const Point2& b = poly[(i + 1) % n];
      double da = h.d - h.n.dot(a);
      double db = h.d - h.n.dot(b);
      if (da >= 0.0) out.push_back(a);
      if ((da > 0.0 && db < 0.0) || (da < 0.0 && db > 0.0)) {
        double t = da / (da - db);
        out.push_back(a + (b - a) * t);
      }
    }
    poly = std::move(out);
    if (poly.size() < 3) return 0.0;
  }
  return std::abs(loop_signed_area(poly));
}

Point2 triangle_circumcenter(const Point2& a, const Point2& b, const Point2& c) {
  Vec2 ab = b - a;
  Vec2 ac = c - a;
  double d = 2.0 * ab.cross(ac);
  double scale = std::max({ab.norm2(), ac.norm2(), (c - b).norm2()});
  if (std::abs(d) < 1e-14 * scale) throw GeometryError("circumcenter of collinear points");
  double ab2 = ab.norm2();
  double ac2 = ac.norm2();
  return {a.x + (ac.y * ab2 - ab.y * ac2) / d, a.y + (ab.x * ac2 - ac.x * ab2) / d};
}

}  // namespace mfv
