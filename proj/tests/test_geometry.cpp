#include <doctest.h>

#include <cmath>
#include <random>

#include "mfv/geometry.hpp"
#include "test_util.hpp"

using namespace mfv;

TEST_SUITE_BEGIN("geometry");

namespace {
ConvexPolygon unit_square() {
  return ConvexPolygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
}
ConvexPolygon right_triangle() {
  return ConvexPolygon({{0, 0}, {1, 0}, {0, 1}});
}
}  // namespace

TEST_CASE("unit square metrics") {
  ConvexPolygon p = unit_square();
  CHECK(polygon_measure(p) == doctest::Approx(1.0).epsilon(1e-14));
  Point2 c = polygon_centroid(p);
  CHECK(c.x == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(c.y == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(polygon_diameter(p) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(polygon_inradius(p) == doctest::Approx(0.5).epsilon(1e-10));
  InscribedDisk disk = polygon_chebyshev(p);
  CHECK(disk.center.x == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(disk.center.y == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("right triangle metrics") {
  ConvexPolygon p = right_triangle();
  CHECK(polygon_measure(p) == doctest::Approx(0.5).epsilon(1e-14));
  Point2 c = polygon_centroid(p);
  CHECK(c.x == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(c.y == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  // Incircle radius of a right triangle with legs a, b and hypotenuse c
  // is (a + b - c) / 2.
  CHECK(polygon_inradius(p) == doctest::Approx((2.0 - std::sqrt(2.0)) / 2.0).epsilon(1e-10));
}

TEST_CASE("shoelace invariance under starting-vertex rotation") {
  std::vector<Point2> loop = {{0.1, 0.0}, {1.3, 0.2}, {1.1, 1.4}, {0.0, 0.9}};
  ConvexPolygon a(loop);
  std::rotate(loop.begin(), loop.begin() + 2, loop.end());
  ConvexPolygon b(loop);
  CHECK(polygon_measure(a) == doctest::Approx(polygon_measure(b)).epsilon(1e-15));
  Point2 ca = polygon_centroid(a), cb = polygon_centroid(b);
  CHECK(ca.x == doctest::Approx(cb.x).epsilon(1e-15));
  CHECK(ca.y == doctest::Approx(cb.y).epsilon(1e-15));
}

TEST_CASE("collinear consecutive vertices are accepted (hanging node)") {
  ConvexPolygon p({{0, 0}, {0.5, 0.0}, {1, 0}, {1, 1}, {0, 1}});
  CHECK(polygon_measure(p) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(p.size() == 5);
}

TEST_CASE("invalid polygons are rejected") {
  // Too few vertices.
  CHECK_THROWS_AS(ConvexPolygon({{0, 0}, {1, 0}}), GeometryError);
  // Clockwise orientation (negative area).
  CHECK_THROWS_AS(ConvexPolygon({{0, 0}, {0, 1}, {1, 1}, {1, 0}}), GeometryError);
  // Reflex corner.
  CHECK_THROWS_AS(ConvexPolygon({{0, 0}, {1, 0}, {0.5, 0.25}, {1, 1}, {0, 1}}), GeometryError);
  // Degenerate (zero area).
  CHECK_THROWS_AS(ConvexPolygon({{0, 0}, {1, 1}, {2, 2}}), GeometryError);
}

TEST_CASE("outward normals of the unit square") {
  ConvexPolygon p = unit_square();
  Vec2 bottom = outward_normal(p.side(0), p);
  CHECK(bottom.x == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(bottom.y == doctest::Approx(-1.0).epsilon(1e-15));
  Vec2 right = outward_normal(p.side(1), p);
  CHECK(right.x == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(right.y == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(bottom.norm() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("segment midpoint") {
  Point2 m = segment_midpoint(Segment({0.2, 0.4}, {0.8, 1.2}));
  CHECK(m.x == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(m.y == doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("point membership and boundary distance") {
  ConvexPolygon p = unit_square();
  CHECK(point_strictly_inside({0.5, 0.5}, p, 0.25));
  CHECK_FALSE(point_strictly_inside({0.5, 0.5}, p, 0.75));
  CHECK_FALSE(point_strictly_inside({1.5, 0.5}, p, 1e-12));
  CHECK(distance_to_boundary({0.5, 0.5}, p) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(distance_to_boundary({0.1, 0.5}, p) == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("convex overlap area") {
  ConvexPolygon a = unit_square();
  ConvexPolygon b({{0.5, 0.5}, {1.5, 0.5}, {1.5, 1.5}, {0.5, 1.5}});
  CHECK(convex_overlap_area(a, b) == doctest::Approx(0.25).epsilon(1e-12));
  ConvexPolygon c({{2, 2}, {3, 2}, {3, 3}, {2, 3}});
  CHECK(convex_overlap_area(a, c) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(convex_overlap_area(a, a) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("triangle circumcenter") {
  Point2 c = triangle_circumcenter({0, 0}, {1, 0}, {0, 1});
  CHECK(c.x == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(c.y == doctest::Approx(0.5).epsilon(1e-14));
  CHECK_THROWS_AS(triangle_circumcenter({0, 0}, {1, 1}, {2, 2}), GeometryError);
}

TEST_CASE("reconstruction identity on random convex polygons") {
  // m(K) e = sum m(sigma) (e.n) (x_sigma - x_K) for every constant vector e.
  std::mt19937_64 rng(20260824);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    ConvexPolygon p = mfv_test::random_convex_polygon(rng);
    Vec2 e = mfv_test::random_vector(rng);
    worst = std::max(worst, mfv_test::reconstruction_identity_error(p, e));
  }
  CHECK(worst <= 1e-12);
}

TEST_SUITE_END();
