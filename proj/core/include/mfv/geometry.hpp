// 2D polygon and segment primitives used by mesh construction and
// scheme assembly. Everything here is a pure value-level function.
//
// Conventions: polygons are counterclockwise vertex loops; collinear
// consecutive vertices are allowed (they encode hanging nodes).
// Geometric predicates use an absolute tolerance scaled by the local
// diameter.

#ifndef MFV_GEOMETRY_HPP
#define MFV_GEOMETRY_HPP

#include <cmath>
#include <vector>

#include "mfv/errors.hpp"

namespace mfv {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }
  Vec2& operator+=(const Vec2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }

  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double cross(const Vec2& o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
  double norm2() const { return x * x + y * y; }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

using Point2 = Vec2;

struct Segment {
  Point2 a;
  Point2 b;

  Segment() = default;
  Segment(Point2 a_, Point2 b_) : a(a_), b(b_) {}

  double length() const { return (b - a).norm(); }
};

// Counterclockwise convex vertex loop with positive area. Consecutive
// collinear vertices are permitted; reflex corners are not.
class ConvexPolygon {
public:
  explicit ConvexPolygon(std::vector<Point2> vertices);

  const std::vector<Point2>& vertices() const { return verts_; }
  std::size_t size() const { return verts_.size(); }
  const Point2& operator[](std::size_t i) const { return verts_[i]; }

  // Consecutive vertex pair (i, i+1 mod n) as a segment.
  Segment side(std::size_t i) const {
    return Segment(verts_[i], verts_[(i + 1) % verts_.size()]);
  }

private:
  std::vector<Point2> verts_;
};

// Shoelace area; strictly positive for a valid polygon.
double polygon_measure(const ConvexPolygon& p);

// Area-weighted centroid; strictly inside by convexity.
Point2 polygon_centroid(const ConvexPolygon& p);

// Maximum pairwise vertex distance (the diameter, by convexity).
double polygon_diameter(const ConvexPolygon& p);

// Chebyshev center: center and radius of the largest inscribed disk,
// obtained from the small LP  max r  s.t.  n_i . c + r <= d_i  over the
// polygon's supporting half-planes.
struct InscribedDisk {
  Point2 center;
  double radius = 0.0;
};
InscribedDisk polygon_chebyshev(const ConvexPolygon& p);

// Radius of the largest inscribed disk.
double polygon_inradius(const ConvexPolygon& p);

Point2 segment_midpoint(const Segment& s);

// Unit normal to s, orthogonal to it and pointing away from the cell
// interior. s must lie on the boundary of the cell.
Vec2 outward_normal(const Segment& s, const ConvexPolygon& cell);

// True if x lies inside p with margin > eps (distance to every supporting
// half-plane boundary exceeds eps).
bool point_strictly_inside(const Point2& x, const ConvexPolygon& p, double eps);

// Distance from x to the boundary loop of p.
double distance_to_boundary(const Point2& x, const ConvexPolygon& p);

// Area of the intersection of two convex polygons (Sutherland-Hodgman clip).
double convex_overlap_area(const ConvexPolygon& p, const ConvexPolygon& q);

// Circumcenter of a triangle given by its three (non-collinear) corner
// points. Throws if the corners are collinear.
Point2 triangle_circumcenter(const Point2& a, const Point2& b, const Point2& c);

}  // namespace mfv

#endif
