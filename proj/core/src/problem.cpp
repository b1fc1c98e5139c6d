#include "mfv/problem.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "mfv/errors.hpp"

namespace mfv {

double Mat2::max_abs() const {
  return std::max({std::abs(xx), std::abs(xy), std::abs(yy)});
}

namespace {

struct QuadPoint {
  double b0, b1, b2;  // barycentric
  double w;
};

// Gauss rules on the reference triangle, exact to the stated degree.
const std::vector<QuadPoint>& triangle_rule(int quad_order) {
  static const std::vector<QuadPoint> deg1 = {{1.0 / 3, 1.0 / 3, 1.0 / 3, 1.0}};
  static const std::vector<QuadPoint> deg2 = {
      {2.0 / 3, 1.0 / 6, 1.0 / 6, 1.0 / 3},
      {1.0 / 6, 2.0 / 3, 1.0 / 6, 1.0 / 3},
      {1.0 / 6, 1.0 / 6, 2.0 / 3, 1.0 / 3}};
  static const std::vector<QuadPoint> deg4 = [] {
    const double a1 = 0.445948490915965, w1 = 0.223381589678011;
    const double a2 = 0.091576213509771, w2 = 0.109951743655322;
    std::vector<QuadPoint> r;
    r.push_back({1 - 2 * a1, a1, a1, w1});
    r.push_back({a1, 1 - 2 * a1, a1, w1});
    r.push_back({a1, a1, 1 - 2 * a1, w1});
    r.push_back({1 - 2 * a2, a2, a2, w2});
    r.push_back({a2, 1 - 2 * a2, a2, w2});
    r.push_back({a2, a2, 1 - 2 * a2, w2});
    return r;
  }();
  switch (quad_order) {
    case 1: return deg1;
    case 2: return deg2;
    case 4: return deg4;
    default: throw ProblemError("quadrature order must be 1, 2 or 4");
  }
}

}  // namespace

double polygon_integral(const ConvexPolygon& p, const std::function<double(const Point2&)>& f,
                        int quad_order) {
  const auto& rule = triangle_rule(quad_order);
  const Point2 c = polygon_centroid(p);
  double total = 0.0;
  const std::size_t n = p.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a = p[i];
    const Point2& b = p[(i + 1) % n];
    double area = 0.5 * (a - c).cross(b - c);
    if (area <= 0.0) continue;  // collinear fan triangle
    for (const QuadPoint& q : rule) {
      Point2 x = c * q.b0 + a * q.b1 + b * q.b2;
      total += q.w * area * f(x);
    }
  }
  return total;
}

Mat2 cell_average_tensor(const Cell& cell, const TensorField& tensor, int quad_order) {
  Mat2 avg;
  avg.xx = polygon_integral(cell.polygon, [&](const Point2& x) { return tensor.eval(x).xx; },
                            quad_order);
  avg.xy = polygon_integral(cell.polygon, [&](const Point2& x) { return tensor.eval(x).xy; },
                            quad_order);
  avg.yy = polygon_integral(cell.polygon, [&](const Point2& x) { return tensor.eval(x).yy; },
                            quad_order);
  avg.xx /= cell.measure;
  avg.xy /= cell.measure;
  avg.yy /= cell.measure;
  if (!avg.positive_definite())
    throw ProblemError("cell-averaged tensor is not positive definite");
  return avg;
}

double cell_source_integral(const Cell& cell, const std::function<double(const Point2&)>& source,
                            int quad_order) {
  return polygon_integral(cell.polygon, source, quad_order);
}

std::vector<CellData> compute_cell_data(const Mesh& mesh, const ProblemCase& pc, int quad_order) {
  std::vector<CellData> data(mesh.cell_count());
  for (std::size_t k = 0; k < mesh.cell_count(); ++k) {
    const Cell& cell = mesh.cell(static_cast<int>(k));
    CellData& d = data[k];
    d.lambda = cell_average_tensor(cell, pc.tensor, quad_order);
    d.lambda_inv = d.lambda.inverse();
    d.f_integral = cell_source_integral(cell, pc.source, quad_order);
  }
  return data;
}

ProblemCase case_isotropic() {
  ProblemCase pc;
  pc.name = "isotropic";
  pc.tensor = {[](const Point2&) { return Mat2::identity(); }, 1.0};
  pc.source = [](const Point2& x) {
    return 2.0 * (x.x * (1.0 - x.x) + x.y * (1.0 - x.y));
  };
  pc.exact = ExactSolution{
      [](const Point2& x) { return x.x * (1.0 - x.x) * x.y * (1.0 - x.y); },
      [](const Point2& x) {
        return Vec2{(1.0 - 2.0 * x.x) * x.y * (1.0 - x.y), x.x * (1.0 - x.x) * (1.0 - 2.0 * x.y)};
      }};
  pc.dirichlet = [](const Point2&) { return 0.0; };
  return pc;
}

ProblemCase case_lepotier() {
  using std::numbers::pi;
  constexpr double eps = 1e-4;
  const Point2 xb{-0.1, -0.1};

  ProblemCase pc;
  pc.name = "lepotier";
  pc.tensor = {[=](const Point2& x) {
                 double dx = x.x - xb.x;
                 double dy = x.y - xb.y;
                 Mat2 m;
                 m.xx = dy * dy + eps * dx * dx;
                 m.xy = -(1.0 - eps) * dx * dy;
                 m.yy = dx * dx + eps * dy * dy;
                 return m;
               },
               // inf over the unit square of the small eigenvalue eps |x - xb|^2
               eps * 0.02};
  pc.source = [=](const Point2& x) {
    double dx = x.x - xb.x;
    double dy = x.y - xb.y;
    double s1 = std::sin(pi * x.x), c1 = std::cos(pi * x.x);
    double s2 = std::sin(pi * x.y), c2 = std::cos(pi * x.y);
    double r2 = dx * dx + dy * dy;
    return pi * pi * (1.0 + eps) * s1 * s2 * r2 +
           pi * (1.0 - 3.0 * eps) * c1 * s2 * dx +
           pi * (1.0 - 3.0 * eps) * s1 * c2 * dy +
           2.0 * pi * pi * (1.0 - eps) * c1 * c2 * dx * dy;
  };
  pc.exact = ExactSolution{
      [](const Point2& x) { return std::sin(pi * x.x) * std::sin(pi * x.y); },
      [](const Point2& x) {
        return Vec2{pi * std::cos(pi * x.x) * std::sin(pi * x.y),
                    pi * std::sin(pi * x.x) * std::cos(pi * x.y)};
      }};
  pc.dirichlet = [](const Point2&) { return 0.0; };
  return pc;
}

ProblemCase case_patch_affine() {
  const Mat2 lambda{2.0, 0.5, 1.0};
  const double a = 0.3;
  const Vec2 b{0.7, -0.4};

  ProblemCase pc;
  pc.name = "patch-affine";
  pc.tensor = {[=](const Point2&) { return lambda; },
               // smaller eigenvalue of the constant tensor
               0.5 * (lambda.trace() - std::sqrt(lambda.trace() * lambda.trace() -
                                                 4.0 * lambda.det()))};
  pc.source = [](const Point2&) { return 0.0; };
  pc.exact = ExactSolution{[=](const Point2& x) { return a + b.dot(x); },
                           [=](const Point2&) { return b; }};
  pc.dirichlet = [=](const Point2& x) { return a + b.dot(x); };
  return pc;
}

ProblemCase case_by_name(const std::string& name) {
  if (name == "isotropic") return case_isotropic();
  if (name == "lepotier") return case_lepotier();
  if (name == "patch-affine") return case_patch_affine();
  throw ProblemError("unknown case '" + name + "' (available: isotropic, lepotier, patch-affine)");
}

std::vector<std::string> case_names() { return {"isotropic", "lepotier", "patch-affine"}; }

}  // namespace mfv
