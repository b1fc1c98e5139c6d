#include <doctest.h>

#include <cmath>
#include <random>

#include "mfv/mesh.hpp"
#include "mfv/problem.hpp"

using namespace mfv;

TEST_SUITE_BEGIN("problem");

namespace {

ConvexPolygon unit_square() {
  return ConvexPolygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
}

// Residual of -div(Lambda grad u) - f at x, with the divergence taken by
// central differences of the exact flux. Independent oracle for the
// built-in sources.
double source_residual(const ProblemCase& pc, const Point2& x, double h) {
  auto flux = [&](const Point2& p) -> Vec2 {
    return pc.tensor.eval(p).apply(pc.exact->gradient(p));
  };
  double div = (flux({x.x + h, x.y}).x - flux({x.x - h, x.y}).x) / (2 * h) +
               (flux({x.x, x.y + h}).y - flux({x.x, x.y - h}).y) / (2 * h);
  return std::abs(-div - pc.source(x));
}

}  // namespace

TEST_CASE("polygon quadrature exactness by degree") {
  ConvexPolygon p = unit_square();
  // Degree-1 rule integrates affine functions exactly.
  CHECK(polygon_integral(p, [](const Point2& x) { return 3.0 + x.x - 2.0 * x.y; }, 1) ==
        doctest::Approx(3.0 + 0.5 - 1.0).epsilon(1e-14));
  // Degree-2 rule integrates quadratics exactly: int x^2 = 1/3.
  CHECK(polygon_integral(p, [](const Point2& x) { return x.x * x.x; }, 2) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  CHECK(polygon_integral(p, [](const Point2& x) { return x.x * x.y; }, 2) ==
        doctest::Approx(0.25).epsilon(1e-13));
  // Degree-4 rule integrates quartics exactly: int x^4 = 1/5, int x^2 y^2 = 1/9.
  CHECK(polygon_integral(p, [](const Point2& x) { return std::pow(x.x, 4); }, 4) ==
        doctest::Approx(0.2).epsilon(1e-13));
  CHECK(polygon_integral(p, [](const Point2& x) { return x.x * x.x * x.y * x.y; }, 4) ==
        doctest::Approx(1.0 / 9.0).epsilon(1e-13));
}

TEST_CASE("isotropic case definition") {
  ProblemCase pc = case_isotropic();
  REQUIRE(pc.exact.has_value());
  CHECK(pc.exact->value({0.5, 0.5}) == doctest::Approx(1.0 / 16.0).epsilon(1e-14));
  CHECK(pc.exact->value({0.0, 0.3}) == doctest::Approx(0.0).epsilon(1e-14));
  Mat2 lam = pc.tensor.eval({0.3, 0.7});
  CHECK(lam.xx == 1.0);
  CHECK(lam.xy == 0.0);
  CHECK(lam.yy == 1.0);
  // Gradient consistency by finite differences.
  Point2 x{0.3, 0.6};
  double h = 1e-6;
  Vec2 g = pc.exact->gradient(x);
  CHECK(g.x == doctest::Approx((pc.exact->value({x.x + h, x.y}) - pc.exact->value({x.x - h, x.y})) /
                               (2 * h))
                   .epsilon(1e-8));
  // Source equals -div(grad u) to FD accuracy.
  CHECK(source_residual(pc, {0.37, 0.52}, 1e-5) <= 1e-5);
}

TEST_CASE("rotating-anisotropy case definition") {
  ProblemCase pc = case_lepotier();
  REQUIRE(pc.exact.has_value());
  // u = sin(pi x) sin(pi y): peak 1 at the center, zero on the boundary.
  CHECK(pc.exact->value({0.5, 0.5}) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(pc.exact->value({0.0, 0.25}) == doctest::Approx(0.0).epsilon(1e-12));
  // Tensor eigenvalues are |x - xbar|^2 (tangential) and eps |x - xbar|^2
  // (radial): check via trace and determinant at a few points.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.05, 0.95);
  for (int i = 0; i < 10; ++i) {
    Point2 x{unit(rng), unit(rng)};
    Mat2 lam = pc.tensor.eval(x);
    CHECK(lam.positive_definite());
    double t = lam.trace(), d = lam.det();
    double l1 = (t + std::sqrt(t * t - 4 * d)) / 2.0;
    double l2 = (t - std::sqrt(t * t - 4 * d)) / 2.0;
    CHECK(l1 / l2 == doctest::Approx(1.0 / 1e-4).epsilon(1e-8));
  }
  // Source consistent with the tensor and the exact solution.
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    Point2 x{unit(rng), unit(rng)};
    worst = std::max(worst, source_residual(pc, x, 1e-5));
  }
  CHECK(worst <= 1e-4);
}

TEST_CASE("patch-affine case has zero source and matching boundary data") {
  ProblemCase pc = case_patch_affine();
  REQUIRE(pc.exact.has_value());
  CHECK(pc.source({0.3, 0.8}) == 0.0);
  CHECK(pc.dirichlet({0.0, 0.4}) == doctest::Approx(pc.exact->value({0.0, 0.4})).epsilon(1e-15));
  // Affine: gradient is constant.
  Vec2 g1 = pc.exact->gradient({0.1, 0.1});
  Vec2 g2 = pc.exact->gradient({0.9, 0.4});
  CHECK(g1.x == g2.x);
  CHECK(g1.y == g2.y);
}

TEST_CASE("cell data reduction") {
  Mesh mesh = gen_uniform_squares(2);
  ProblemCase pc = case_patch_affine();
  std::vector<CellData> data = compute_cell_data(mesh, pc, 2);
  REQUIRE(data.size() == 4);
  // Constant tensor: the cell average is the tensor itself, and the
  // stored inverse matches.
  Mat2 lam = pc.tensor.eval({0.5, 0.5});
  for (const CellData& cd : data) {
    CHECK(cd.lambda.xx == doctest::Approx(lam.xx).epsilon(1e-13));
    CHECK(cd.lambda.xy == doctest::Approx(lam.xy).epsilon(1e-13));
    Mat2 prod{cd.lambda.xx * cd.lambda_inv.xx + cd.lambda.xy * cd.lambda_inv.xy, 0.0, 0.0};
    CHECK(prod.xx == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cd.f_integral == doctest::Approx(0.0).epsilon(1e-15));
  }
  // Isotropic source integral over the whole domain: int f = int 2[x(1-x)+y(1-y)] = 2/3.
  std::vector<CellData> iso = compute_cell_data(mesh, case_isotropic(), 2);
  double total = 0.0;
  for (const CellData& cd : iso) total += cd.f_integral;
  CHECK(total == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("case lookup by name") {
  CHECK(case_by_name("isotropic").name == case_isotropic().name);
  CHECK(case_by_name("lepotier").name == case_lepotier().name);
  CHECK(case_by_name("patch-affine").name == case_patch_affine().name);
  CHECK_THROWS_AS(case_by_name("no-such-case"), ProblemError);
  CHECK(case_names().size() >= 3);
}

TEST_CASE("Mat2 basics") {
  Mat2 m{2.0, 0.5, 1.0};
  CHECK(m.det() == doctest::Approx(1.75).epsilon(1e-15));
  CHECK(m.positive_definite());
  Mat2 inv = m.inverse();
  Vec2 v = inv.apply(m.apply({0.3, -0.7}));
  CHECK(v.x == doctest::Approx(0.3).epsilon(1e-13));
  CHECK(v.y == doctest::Approx(-0.7).epsilon(1e-13));
  CHECK_THROWS_AS((Mat2{1.0, 2.0, 1.0}.inverse()), ProblemError);
}

TEST_SUITE_END();
