// Shared helpers for the test binaries: seeded random convex polygons
// and small numeric utilities.

#ifndef MFV_TEST_UTIL_HPP
#define MFV_TEST_UTIL_HPP

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "mfv/geometry.hpp"

namespace mfv_test {

// Random convex polygon: 3..10 points sampled on a random circle (points
// on a circle in angular order are always in convex position), with a
// minimum angular gap so no side degenerates.
inline mfv::ConvexPolygon random_convex_polygon(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nd(3, 10);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int n = nd(rng);
  std::vector<double> angles;
  const double two_pi = 2.0 * std::acos(-1.0);
  while (true) {
    angles.clear();
    for (int i = 0; i < n; ++i) angles.push_back(two_pi * unit(rng));
    std::sort(angles.begin(), angles.end());
    double min_gap = angles.front() + two_pi - angles.back();
    for (int i = 1; i < n; ++i) min_gap = std::min(min_gap, angles[i] - angles[i - 1]);
    if (min_gap > 0.05) break;
  }
  double cx = 4.0 * unit(rng) - 2.0;
  double cy = 4.0 * unit(rng) - 2.0;
  double r = 0.2 + 2.0 * unit(rng);
  std::vector<mfv::Point2> verts;
  for (double a : angles) verts.emplace_back(cx + r * std::cos(a), cy + r * std::sin(a));
  return mfv::ConvexPolygon(std::move(verts));
}

inline mfv::Vec2 random_vector(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  return {unit(rng), unit(rng)};
}

// Relative error of the reconstruction identity
//   m(K) e = sum_sides m(sigma) (e . n_sigma) (x_sigma - x_K)
// for an arbitrary interior point x_K (the identity holds for any x_K;
// the centroid is used here).
inline double reconstruction_identity_error(const mfv::ConvexPolygon& p, const mfv::Vec2& e) {
  using namespace mfv;
  Point2 xk = polygon_centroid(p);
  double m = polygon_measure(p);
  Vec2 sum{0.0, 0.0};
  for (std::size_t i = 0; i < p.size(); ++i) {
    Segment s = p.side(i);
    if (s.length() == 0.0) continue;
    Vec2 n = outward_normal(s, p);
    Point2 xs = segment_midpoint(s);
    sum += s.length() * e.dot(n) * (xs - xk);
  }
  Vec2 lhs = m * e;
  double scale = std::max(1e-300, m * e.norm());
  return (lhs - sum).norm() / scale;
}

}  // namespace mfv_test

#endif
