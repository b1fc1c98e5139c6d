#include "mfv/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "mfv/errors.hpp"

namespace mfv {

namespace {

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ErrorReport measure_errors(const Mesh& mesh, const Solution& sol, const ExactSolution& exact) {
  if (sol.u.size() != mesh.cell_count() || sol.v.size() != mesh.cell_count())
    throw AnalysisError("solution does not match the mesh");

  ErrorReport r;
  r.cells = mesh.cell_count();
  r.h = mesh.size();
  r.regularity = mesh.regularity();
  r.cell_errors.resize(mesh.cell_count());

  // sup |u| for the normalized per-cell error field, sampled where the
  // discrete solution lives.
  double sup_u = 0.0;
  for (std::size_t k = 0; k < mesh.cell_count(); ++k)
    sup_u = std::max(sup_u, std::abs(exact.value(mesh.cell(static_cast<int>(k)).point)));
  for (std::size_t e = 0; e < mesh.edge_count(); ++e)
    sup_u = std::max(sup_u, std::abs(exact.value(mesh.edge(static_cast<int>(e)).barycenter)));
  const double norm = sup_u > 0.0 ? sup_u : 1.0;

  double num_u = 0.0, num_g = 0.0;
  r.u_min = sol.u.empty() ? 0.0 : sol.u[0];
  r.u_max = r.u_min;
  for (std::size_t k = 0; k < mesh.cell_count(); ++k) {
    const Cell& K = mesh.cell(static_cast<int>(k));
    double ue = exact.value(K.point);
    Vec2 ge = exact.gradient(K.point);
    double du = sol.u[k] - ue;
    Vec2 dg = sol.v[k] - ge;
    r.cell_errors[k] = std::abs(du) / norm;
    num_u += K.measure * du * du;
    num_g += K.measure * dg.norm2();
    r.u_min = std::min(r.u_min, sol.u[k]);
    r.u_max = std::max(r.u_max, sol.u[k]);
  }
  r.e2_u = std::sqrt(num_u);
  r.e2_grad = std::sqrt(num_g);
  return r;
}

double convergence_order(const std::vector<double>& h, const std::vector<double>& err) {
  if (h.size() != err.size()) throw AnalysisError("h and error lists differ in length");
  if (h.size() < 2) throw AnalysisError("convergence order needs at least two rows");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!(h[i] > 0.0) || !(err[i] > 0.0))
      throw AnalysisError("convergence order needs positive h and errors");
    double x = std::log(h[i]);
    double y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-14 * n * sxx)
    throw AnalysisError("convergence order needs at least two distinct mesh sizes");
  return (n * sxy - sx * sy) / denom;
}

std::vector<double> pairwise_orders(const std::vector<double>& h, const std::vector<double>& err) {
  if (h.size() != err.size()) throw AnalysisError("h and error lists differ in length");
  std::vector<double> orders;
  for (std::size_t i = 0; i + 1 < h.size(); ++i) {
    if (!(h[i] > 0.0) || !(h[i + 1] > 0.0) || !(err[i] > 0.0) || !(err[i + 1] > 0.0))
      throw AnalysisError("pairwise orders need positive h and errors");
    double dh = std::log(h[i] / h[i + 1]);
    if (std::abs(dh) < 1e-14) throw AnalysisError("pairwise orders need distinct mesh sizes");
    orders.push_back(std::log(err[i] / err[i + 1]) / dh);
  }
  return orders;
}

void write_csv(const ConvergenceTable& table, std::ostream& out) {
  out << "case,mesh,cells,h,regul,e2_u,e2_grad,u_min,u_max";
  if (table.with_orders) out << ",order_u,order_grad";
  out << "\n";
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const ConvergenceRow& row = table.rows[i];
    const ErrorReport& r = row.report;
    out << table.case_name << "," << row.mesh_label << "," << r.cells << "," << fmt17(r.h) << ","
        << fmt17(r.regularity) << "," << fmt17(r.e2_u) << "," << fmt17(r.e2_grad) << ","
        << fmt17(r.u_min) << "," << fmt17(r.u_max);
    if (table.with_orders) {
      out << ",";
      if (i > 0) {
        const ErrorReport& p = table.rows[i - 1].report;
        double dh = std::log(p.h / r.h);
        bool defined = p.h > 0 && r.h > 0 && std::abs(dh) > 1e-14;
        if (defined && p.e2_u > 0 && r.e2_u > 0) out << fmt17(std::log(p.e2_u / r.e2_u) / dh);
        out << ",";
        if (defined && p.e2_grad > 0 && r.e2_grad > 0)
          out << fmt17(std::log(p.e2_grad / r.e2_grad) / dh);
      } else {
        out << ",";
      }
    }
    out << "\n";
  }
}

}  // namespace mfv
