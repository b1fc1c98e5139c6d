// Continuous-problem definitions: diffusion tensor fields, sources,
// exact solutions, Dirichlet data, and their per-cell discrete
// reductions (cell-averaged tensor, cell source integral).

#ifndef MFV_PROBLEM_HPP
#define MFV_PROBLEM_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mfv/geometry.hpp"
#include "mfv/mesh.hpp"

namespace mfv {

// Symmetric 2x2 matrix.
struct Mat2 {
  double xx = 0.0, xy = 0.0, yy = 0.0;

  static Mat2 identity() { return {1.0, 0.0, 1.0}; }

  Vec2 apply(const Vec2& v) const { return {xx * v.x + xy * v.y, xy * v.x + yy * v.y}; }
  double det() const { return xx * yy - xy * xy; }
  double trace() const { return xx + yy; }
  bool positive_definite() const { return xx > 0.0 && det() > 0.0; }

  Mat2 inverse() const {
    double d = det();
    if (d <= 0.0) throw ProblemError("tensor is not positive definite");
    return {yy / d, -xy / d, xx / d};
  }

  // Largest absolute entry, as a cheap norm for tolerances.
  double max_abs() const;
};

struct TensorField {
  std::function<Mat2(const Point2&)> eval;
  double coercivity_floor = 0.0;  // alpha_0
};

struct ExactSolution {
  std::function<double(const Point2&)> value;
  std::function<Vec2(const Point2&)> gradient;
};

struct ProblemCase {
  std::string name;
  TensorField tensor;
  std::function<double(const Point2&)> source;
  std::optional<ExactSolution> exact;
  std::function<double(const Point2&)> dirichlet;  // g on the boundary
};

struct CellData {
  Mat2 lambda;       // Lambda_K, the cell average of the tensor
  Mat2 lambda_inv;
  double f_integral = 0.0;  // integral of f over the cell
};

// Integral of f over the polygon: centroid-fan triangulation with a
// Gauss rule of the requested degree (1, 2 or 4) on each triangle.
double polygon_integral(const ConvexPolygon& p, const std::function<double(const Point2&)>& f,
                        int quad_order);

// Cell average of the tensor with the same quadrature; the result must
// be symmetric positive definite.
Mat2 cell_average_tensor(const Cell& cell, const TensorField& tensor, int quad_order);

double cell_source_integral(const Cell& cell, const std::function<double(const Point2&)>& source,
                            int quad_order);

// All per-cell data for a mesh.
std::vector<CellData> compute_cell_data(const Mesh& mesh, const ProblemCase& pc, int quad_order);

// Built-in cases.
//   isotropic:     Lambda = I, u = x1(1-x1)x2(1-x2) on the unit square.
//   lepotier:      rotating high-anisotropy tensor, u = sin(pi x1) sin(pi x2).
//   patch-affine:  constant anisotropic Lambda, affine u, f = 0, g = u.
ProblemCase case_isotropic();
ProblemCase case_lepotier();
ProblemCase case_patch_affine();

// Lookup by CLI name; throws ProblemError for unknown names.
ProblemCase case_by_name(const std::string& name);
std::vector<std::string> case_names();

}  // namespace mfv

#endif
