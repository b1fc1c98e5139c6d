#include "mfv/scheme.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "mfv/errors.hpp"
#include "mfv/log.hpp"

namespace mfv {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

PenalizationPolicy PenalizationPolicy::fixed_over_measure(double nu0) {
  if (!(nu0 > 0.0)) throw ConfigError("fixed-over-measure penalization needs nu0 > 0");
  PenalizationPolicy p;
  p.mode = Mode::FixedOverMeasure;
  p.nu0 = nu0;
  return p;
}

PenalizationPolicy PenalizationPolicy::power_of_diameter(double nu0, double beta) {
  if (!(nu0 > 0.0)) throw ConfigError("power-of-diameter penalization needs nu0 > 0");
  PenalizationPolicy p;
  p.mode = Mode::PowerOfDiameter;
  p.nu0 = nu0;
  p.beta = beta;
  if (!(beta > -2.0 && beta < 0.0))
    log::warn("penalization exponent beta = " + std::to_string(beta) +
              " is outside (-2, 0); the scheme may lose accuracy or conditioning");
  return p;
}

PenalizationPolicy PenalizationPolicy::zero() {
  PenalizationPolicy p;
  p.mode = Mode::Zero;
  p.nu0 = 0.0;
  return p;
}

double PenalizationPolicy::nu_for(const Cell& cell) const {
  switch (mode) {
    case Mode::FixedOverMeasure: return nu0 / cell.measure;
    case Mode::PowerOfDiameter: return nu0 * std::pow(cell.diameter, beta);
    case Mode::Zero: return 0.0;
  }
  return 0.0;
}

void PenalizationPolicy::validate_for(const Mesh& mesh) const {
  if (mode == Mode::Zero && !mesh.all_simplicial())
    throw ConfigError("zero penalization requires an all-simplicial mesh");
}

DenseSym build_local_matrix(const Mesh& mesh, int cell, const CellData& data, double nu) {
  const Cell& K = mesh.cell(cell);
  const std::size_t m = K.edge_ids.size();
  DenseSym B(m);
  for (std::size_t s = 0; s < m; ++s) {
    Vec2 ys = mesh.edge(K.edge_ids[s]).barycenter - K.point;
    for (std::size_t t = 0; t <= s; ++t) {
      Vec2 yt = mesh.edge(K.edge_ids[t]).barycenter - K.point;
      double v = data.lambda_inv.apply(yt).dot(ys) / K.measure;
      if (s == t) v += nu * K.measure;
      B.set_sym(s, t, v);
    }
  }
  return B;
}

namespace {

// nu > 0: condensation through B_K^{-1}.
void condense_penalized(const Mesh& mesh, int cell, const CellData& data, double nu,
                        LocalSystem& L) {
  const std::size_t m = L.edges.size();
  DenseSym B = build_local_matrix(mesh, cell, data, nu);
  DenseLdlt fact(B);
  if (!(fact.min_pivot() > 0.0))
    throw SchemeError("cell " + std::to_string(cell) + ": local matrix is not positive definite");

  // Columns of B^{-1}. The column-by-column solves leave a factorization
  // roundoff asymmetry of order kappa(B) * eps; averaging the mirror
  // entries restores the exact-arithmetic symmetry so the assembled
  // hybrid matrix is symmetric by construction.
  std::vector<double> Binv(m * m);
  std::vector<double> e(m, 0.0);
  for (std::size_t t = 0; t < m; ++t) {
    e[t] = 1.0;
    std::vector<double> col = fact.solve(e);
    e[t] = 0.0;
    for (std::size_t s = 0; s < m; ++s) Binv[s * m + t] = col[s];
  }
  for (std::size_t s = 0; s < m; ++s)
    for (std::size_t t = 0; t < s; ++t) {
      double avg = 0.5 * (Binv[s * m + t] + Binv[t * m + s]);
      Binv[s * m + t] = avg;
      Binv[t * m + s] = avg;
    }

  L.b_coeffs.assign(m, 0.0);
  L.b_K = 0.0;
  for (std::size_t t = 0; t < m; ++t) {
    for (std::size_t s = 0; s < m; ++s) L.b_coeffs[t] += Binv[s * m + t];
    L.b_K += L.b_coeffs[t];
  }
  if (!(L.b_K > 0.0))
    throw SchemeError("cell " + std::to_string(cell) + ": b_K = " + std::to_string(L.b_K) +
                      " is not positive");

  L.C.assign(m * m, 0.0);
  L.g_f.assign(m, 0.0);
  L.p.assign(m, 0.0);
  L.q = 1.0 / L.b_K;
  for (std::size_t s = 0; s < m; ++s) {
    L.p[s] = L.b_coeffs[s] / L.b_K;
    L.g_f[s] = -L.b_coeffs[s] / L.b_K;
    for (std::size_t t = 0; t < m; ++t)
      L.C[s * m + t] = Binv[s * m + t] - L.b_coeffs[s] * L.b_coeffs[t] / L.b_K;
  }
}

// nu = 0 on a simplex: B_K is singular, so condense through the full
// local system in (F_0, F_1, F_2, v_x, v_y, u_K):
//   trace:    v . y_s + u_K            = u_s
//   gradient: m(K) Lambda v - sum y_s F_s = 0
//   balance:  -sum F_s                 = f_K
void condense_simplex(const Mesh& mesh, int cell, const CellData& data, LocalSystem& L) {
  const Cell& K = mesh.cell(cell);
  const std::size_t m = L.edges.size();
  if (m != 3)
    throw SchemeError("cell " + std::to_string(cell) +
                      ": zero penalization needs a simplicial cell (the unpenalized local matrix "
                      "is singular on cells with more than 3 edges)");

  const std::size_t n = 6;
  std::vector<double> A(n * n, 0.0);
  std::vector<Vec2> y(3);
  for (std::size_t s = 0; s < 3; ++s) y[s] = mesh.edge(L.edges[s]).barycenter - K.point;

  for (std::size_t s = 0; s < 3; ++s) {
    A[s * n + 3] = y[s].x;
    A[s * n + 4] = y[s].y;
    A[s * n + 5] = 1.0;
  }
  const Mat2& lam = data.lambda;
  for (std::size_t s = 0; s < 3; ++s) {
    A[3 * n + s] = -y[s].x;
    A[4 * n + s] = -y[s].y;
  }
  A[3 * n + 3] = K.measure * lam.xx;
  A[3 * n + 4] = K.measure * lam.xy;
  A[4 * n + 3] = K.measure * lam.xy;
  A[4 * n + 4] = K.measure * lam.yy;
  for (std::size_t s = 0; s < 3; ++s) A[5 * n + s] = -1.0;

  DenseLu lu(std::move(A), n);

  L.C.assign(m * m, 0.0);
  L.g_f.assign(m, 0.0);
  L.p.assign(m, 0.0);
  std::vector<double> rhs(n, 0.0);
  for (std::size_t t = 0; t < 3; ++t) {
    rhs[t] = 1.0;
    std::vector<double> x = lu.solve(rhs);
    rhs[t] = 0.0;
    for (std::size_t s = 0; s < 3; ++s) L.C[s * m + t] = x[s];
    L.p[t] = x[5];
  }
  rhs[5] = 1.0;
  std::vector<double> x = lu.solve(rhs);
  L.g_f = {x[0], x[1], x[2]};
  L.q = x[5];

  L.b_K = L.q != 0.0 ? 1.0 / L.q : 0.0;
  L.b_coeffs.assign(m, 0.0);
  for (std::size_t s = 0; s < m; ++s) L.b_coeffs[s] = L.p[s] * L.b_K;
}

}  // namespace

LocalSystem local_system(const Mesh& mesh, int cell, const CellData& data, double nu) {
  if (nu < 0.0)
    throw SchemeError("cell " + std::to_string(cell) + ": negative penalization");
  LocalSystem L;
  L.cell = cell;
  L.edges = mesh.cell(cell).edge_ids;
  if (nu == 0.0)
    condense_simplex(mesh, cell, data, L);
  else
    condense_penalized(mesh, cell, data, nu, L);
  return L;
}

HybridSystem assemble_hybrid(const Mesh& mesh, const std::vector<CellData>& data,
                             const std::vector<LocalSystem>& locals,
                             const std::function<double(const Point2&)>& dirichlet) {
  if (data.size() != mesh.cell_count() || locals.size() != mesh.cell_count())
    throw SchemeError("assemble_hybrid: per-cell data does not match the mesh");

  const std::size_t n = mesh.interior_edge_count();
  HybridSystem sys;
  sys.interior_edges.resize(n);
  for (std::size_t e = 0; e < n; ++e) sys.interior_edges[e] = static_cast<int>(e);
  sys.rhs.assign(n, 0.0);

  std::vector<std::size_t> rows, cols;
  std::vector<double> vals;
  double asym = 0.0, c_scale = 0.0;

  for (std::size_t k = 0; k < mesh.cell_count(); ++k) {
    const LocalSystem& L = locals[k];
    const std::size_t m = L.edges.size();
    for (std::size_t s = 0; s < m; ++s)
      for (std::size_t t = 0; t < m; ++t) {
        c_scale = std::max(c_scale, std::abs(L.C[s * m + t]));
        if (t > s) asym = std::max(asym, std::abs(L.C[s * m + t] - L.C[t * m + s]));
      }

    for (std::size_t s = 0; s < m; ++s) {
      const Edge& es = mesh.edge(L.edges[s]);
      if (es.kind != EdgeKind::Interior) continue;
      const std::size_t row = static_cast<std::size_t>(L.edges[s]);
      // Conservativity row: sum over both cells of F_{K,sigma} = 0.
      sys.rhs[row] -= L.g_f[s] * data[k].f_integral;
      for (std::size_t t = 0; t < m; ++t) {
        const Edge& et = mesh.edge(L.edges[t]);
        double c = L.C[s * m + t];
        if (et.kind == EdgeKind::Interior) {
          const std::size_t col = static_cast<std::size_t>(L.edges[t]);
          if (col <= row) {
            rows.push_back(row);
            cols.push_back(col);
            vals.push_back(c);
          }
        } else {
          sys.rhs[row] -= c * dirichlet(et.barycenter);
        }
      }
    }
  }

  sys.max_asymmetry = c_scale > 0.0 ? asym / c_scale : 0.0;
  if (n > 0) sys.matrix.emplace(n, std::move(rows), std::move(cols), std::move(vals));
  return sys;
}

Solution back_substitute(const Mesh& mesh, const std::vector<CellData>& data,
                         const std::vector<LocalSystem>& locals,
                         const std::vector<double>& traces) {
  if (traces.size() != mesh.edge_count())
    throw SchemeError("back_substitute: trace vector does not match the mesh");

  Solution sol;
  sol.traces = traces;
  sol.u.assign(mesh.cell_count(), 0.0);
  sol.v.assign(mesh.cell_count(), Vec2{0.0, 0.0});
  sol.flux.resize(mesh.cell_count());

  for (std::size_t k = 0; k < mesh.cell_count(); ++k) {
    const Cell& K = mesh.cell(static_cast<int>(k));
    const LocalSystem& L = locals[k];
    const std::size_t m = L.edges.size();

    double uk = L.q * data[k].f_integral;
    for (std::size_t s = 0; s < m; ++s) uk += L.p[s] * traces[L.edges[s]];
    sol.u[k] = uk;

    std::vector<double>& F = sol.flux[k];
    F.assign(m, 0.0);
    for (std::size_t s = 0; s < m; ++s) {
      double f = L.g_f[s] * data[k].f_integral;
      for (std::size_t t = 0; t < m; ++t) f += L.C[s * m + t] * traces[L.edges[t]];
      F[s] = f;
    }

    // m(K) Lambda_K v_K = sum_s F_s (x_sigma - x_K)
    Vec2 rhs{0.0, 0.0};
    for (std::size_t s = 0; s < m; ++s) {
      Vec2 y = mesh.edge(L.edges[s]).barycenter - K.point;
      rhs = rhs + y * F[s];
    }
    sol.v[k] = data[k].lambda_inv.apply(rhs) * (1.0 / K.measure);
  }
  return sol;
}

Solution solve_mfv(const Mesh& mesh, const ProblemCase& pc, const PenalizationPolicy& policy,
                   const SolverOptions& options, int quad_order) {
  policy.validate_for(mesh);

  auto t0 = std::chrono::steady_clock::now();
  std::vector<CellData> data = compute_cell_data(mesh, pc, quad_order);
  std::vector<LocalSystem> locals;
  locals.reserve(mesh.cell_count());
  for (std::size_t k = 0; k < mesh.cell_count(); ++k)
    locals.push_back(local_system(mesh, static_cast<int>(k), data[k],
                                  policy.nu_for(mesh.cell(static_cast<int>(k)))));
  HybridSystem hybrid = assemble_hybrid(mesh, data, locals, pc.dirichlet);
  double assemble_seconds = seconds_since(t0);

  const std::size_t n = mesh.interior_edge_count();
  SolveStats stats;
  stats.unknowns = n;
  stats.assemble_seconds = assemble_seconds;

  std::vector<double> traces(mesh.edge_count(), 0.0);
  for (std::size_t e = n; e < mesh.edge_count(); ++e)
    traces[e] = pc.dirichlet(mesh.edge(static_cast<int>(e)).barycenter);

  t0 = std::chrono::steady_clock::now();
  if (n == 0) {
    stats.method = "none";
  } else {
    const SparseSym& A = *hybrid.matrix;
    bool use_direct = options.method == SolverOptions::Method::Cholesky ||
                      (options.method == SolverOptions::Method::Auto && n <= options.direct_limit);
    std::vector<double> x;
    if (use_direct) {
      stats.method = "cholesky";
      SparseCholesky chol(A);
      x = chol.solve(hybrid.rhs);
      // One step of iterative refinement: the penalized modes give the
      // condensed matrix a condition number of order 1/nu, and flux
      // accuracy tracks the residual of this solve.
      std::vector<double> ax = A.multiply(x);
      std::vector<double> r(n);
      for (std::size_t i = 0; i < n; ++i) r[i] = hybrid.rhs[i] - ax[i];
      std::vector<double> dx = chol.solve(r);
      for (std::size_t i = 0; i < n; ++i) x[i] += dx[i];
    } else {
      stats.method = "pcg";
      PcgResult r = pcg_solve(A, hybrid.rhs, options.tol, options.max_iter);
      x = std::move(r.x);
      stats.iterations = r.iterations;
    }
    stats.residual = relative_residual(A, x, hybrid.rhs);
    log::info("hybrid solve: " + stats.method + ", " + std::to_string(n) +
              " unknowns, relative residual " + std::to_string(stats.residual));
    for (std::size_t e = 0; e < n; ++e) traces[e] = x[e];
  }
  double solve_seconds = seconds_since(t0);

  Solution sol = back_substitute(mesh, data, locals, traces);
  stats.solve_seconds = solve_seconds;
  sol.stats = stats;
  return sol;
}

void write_solution(const Mesh& mesh, const Solution& sol, std::ostream& out) {
  out << "mfv-sol v1\n";
  out << "cells " << mesh.cell_count() << "\n";
  for (std::size_t k = 0; k < mesh.cell_count(); ++k)
    out << "cell " << k << " " << fmt17(sol.u[k]) << " " << fmt17(sol.v[k].x) << " "
        << fmt17(sol.v[k].y) << "\n";
  out << "edges " << mesh.edge_count() << "\n";
  for (std::size_t e = 0; e < mesh.edge_count(); ++e)
    out << "edge " << e << " " << fmt17(sol.traces[e]) << "\n";
  for (std::size_t k = 0; k < mesh.cell_count(); ++k) {
    const Cell& K = mesh.cell(static_cast<int>(k));
    for (std::size_t s = 0; s < K.edge_ids.size(); ++s)
      out << "flux " << k << " " << K.edge_ids[s] << " " << fmt17(sol.flux[k][s]) << "\n";
  }
}

}  // namespace mfv
