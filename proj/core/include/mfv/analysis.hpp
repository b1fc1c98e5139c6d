// Error measurement against exact solutions, convergence tables and
// their CSV form.

#ifndef MFV_ANALYSIS_HPP
#define MFV_ANALYSIS_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "mfv/mesh.hpp"
#include "mfv/problem.hpp"
#include "mfv/scheme.hpp"

namespace mfv {

struct ErrorReport {
  std::size_t cells = 0;
  double h = 0.0;           // mesh size
  double regularity = 0.0;  // regul(D)
  double e2_u = 0.0;        // discrete L2 error in u (absolute)
  double e2_grad = 0.0;     // discrete L2 error in the gradient (absolute)
  double u_min = 0.0;
  double u_max = 0.0;
  std::vector<double> cell_errors;  // e_K = |u_K - u(x_K)| / sup |u|
};

// Pointwise-at-x_K discrete L2 errors:
//   e2_u    = sqrt(sum m(K) (u_K - u(x_K))^2)
//   e2_grad = sqrt(sum m(K) |v_K - grad(x_K)|^2)
// cell_errors are normalized by the sup of |u| sampled at the cell points
// and edge barycenters (left unnormalized when that sup is zero).
ErrorReport measure_errors(const Mesh& mesh, const Solution& sol, const ExactSolution& exact);

struct ConvergenceRow {
  std::string mesh_label;
  ErrorReport report;
};

struct ConvergenceTable {
  std::string case_name;
  std::vector<ConvergenceRow> rows;   // sorted by decreasing h
  bool with_orders = false;           // adds order_u,order_grad columns to the CSV
};

// Least-squares slope of log(err) against log(h) over all rows. Throws
// AnalysisError with fewer than two rows or non-distinct h.
double convergence_order(const std::vector<double>& h, const std::vector<double>& err);

// Pairwise orders between consecutive rows: log(e_i/e_{i+1}) / log(h_i/h_{i+1}).
std::vector<double> pairwise_orders(const std::vector<double>& h, const std::vector<double>& err);

// CSV with the fixed header
//   case,mesh,cells,h,regul,e2_u,e2_grad,u_min,u_max
// and floats at 17 significant digits (bitwise deterministic). With
// with_orders set, two extra columns carry the pairwise order against the
// previous row (blank on the first row or when undefined).
void write_csv(const ConvergenceTable& table, std::ostream& out);

}  // namespace mfv

#endif
