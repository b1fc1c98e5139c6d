// Dense assembly of the raw mixed scheme (traces eliminated, fluxes,
// gradients and cell values all kept as unknowns). Deliberately written
// straight from the defining equations, independently of the hybrid
// condensation path, so the two can be cross-checked on small meshes.
//
// Unknowns: u_K (one per cell), then v_K (two per cell), then F_{K,sigma}
// (one per cell-edge incidence). Equations:
//   per interior edge:  v_K.(x_s - x_K) + v_L.(x_L - x_s)
//                       + nu_K m(K) F_{K,s} - nu_L m(L) F_{L,s}
//                       + u_K - u_L = 0
//   per boundary edge:  v_K.(x_s - x_K) + nu_K m(K) F_{K,s} + u_K = g(x_s)
//   per interior edge:  F_{K,s} + F_{L,s} = 0
//   per cell (2 rows):  m(K) Lambda_K v_K - sum_s F_{K,s} (x_s - x_K) = 0
//   per cell:           -sum_s F_{K,s} = integral of f over K

#include <string>

#include "mfv/errors.hpp"
#include "mfv/scheme.hpp"

namespace mfv {

namespace {

// Local index of an edge inside its cell.
std::size_t local_index(const Cell& cell, int edge) {
  for (std::size_t s = 0; s < cell.edge_ids.size(); ++s)
    if (cell.edge_ids[s] == edge) return s;
  throw SchemeError("edge " + std::to_string(edge) + " is not incident to the cell");
}

}  // namespace

SaddleSystem assemble_saddle_oracle(const Mesh& mesh, const std::vector<CellData>& data,
                                    const PenalizationPolicy& policy,
                                    const std::function<double(const Point2&)>& dirichlet,
                                    std::size_t max_unknowns) {
  const std::size_t M = mesh.cell_count();
  if (data.size() != M) throw SchemeError("saddle oracle: per-cell data does not match the mesh");

  SaddleSystem sys;
  sys.flux_offset.resize(M);
  std::size_t nF = 0;
  for (std::size_t k = 0; k < M; ++k) {
    sys.flux_offset[k] = 3 * M + nF;
    nF += mesh.cell(static_cast<int>(k)).edge_ids.size();
  }
  sys.n = 3 * M + nF;
  if (sys.n > max_unknowns)
    throw SchemeError("saddle oracle limited to " + std::to_string(max_unknowns) +
                      " unknowns, got " + std::to_string(sys.n));

  const std::size_t n = sys.n;
  sys.matrix.assign(n * n, 0.0);
  sys.rhs.assign(n, 0.0);
  auto at = [&](std::size_t r, std::size_t c) -> double& { return sys.matrix[r * n + c]; };
  auto iu = [&](int k) { return static_cast<std::size_t>(k); };
  auto iv = [&](int k, int comp) { return M + 2 * static_cast<std::size_t>(k) + comp; };
  auto iF = [&](int k, std::size_t s) { return sys.flux_offset[k] + s; };

  std::vector<double> nu(M);
  for (std::size_t k = 0; k < M; ++k) nu[k] = policy.nu_for(mesh.cell(static_cast<int>(k)));

  std::size_t row = 0;

  // Trace relations, one per edge.
  for (std::size_t e = 0; e < mesh.edge_count(); ++e, ++row) {
    const Edge& ed = mesh.edge(static_cast<int>(e));
    const Cell& K = mesh.cell(ed.cell_a);
    std::size_t sK = local_index(K, static_cast<int>(e));
    Vec2 yK = ed.barycenter - K.point;
    at(row, iv(ed.cell_a, 0)) += yK.x;
    at(row, iv(ed.cell_a, 1)) += yK.y;
    at(row, iF(ed.cell_a, sK)) += nu[ed.cell_a] * K.measure;
    at(row, iu(ed.cell_a)) += 1.0;
    if (ed.kind == EdgeKind::Interior) {
      const Cell& L = mesh.cell(ed.cell_b);
      std::size_t sL = local_index(L, static_cast<int>(e));
      Vec2 yL = L.point - ed.barycenter;  // x_L - x_sigma
      at(row, iv(ed.cell_b, 0)) += yL.x;
      at(row, iv(ed.cell_b, 1)) += yL.y;
      at(row, iF(ed.cell_b, sL)) -= nu[ed.cell_b] * L.measure;
      at(row, iu(ed.cell_b)) -= 1.0;
    } else {
      sys.rhs[row] = dirichlet(ed.barycenter);
    }
  }

  // Conservativity, one per interior edge.
  for (std::size_t e = 0; e < mesh.interior_edge_count(); ++e, ++row) {
    const Edge& ed = mesh.edge(static_cast<int>(e));
    at(row, iF(ed.cell_a, local_index(mesh.cell(ed.cell_a), static_cast<int>(e)))) += 1.0;
    at(row, iF(ed.cell_b, local_index(mesh.cell(ed.cell_b), static_cast<int>(e)))) += 1.0;
  }

  // Gradient-flux link, two rows per cell; balance, one row per cell.
  for (std::size_t k = 0; k < M; ++k) {
    const Cell& K = mesh.cell(static_cast<int>(k));
    const Mat2& lam = data[k].lambda;
    std::size_t gx = row++, gy = row++, bal = row++;
    at(gx, iv(static_cast<int>(k), 0)) += K.measure * lam.xx;
    at(gx, iv(static_cast<int>(k), 1)) += K.measure * lam.xy;
    at(gy, iv(static_cast<int>(k), 0)) += K.measure * lam.xy;
    at(gy, iv(static_cast<int>(k), 1)) += K.measure * lam.yy;
    for (std::size_t s = 0; s < K.edge_ids.size(); ++s) {
      Vec2 y = mesh.edge(K.edge_ids[s]).barycenter - K.point;
      at(gx, iF(static_cast<int>(k), s)) -= y.x;
      at(gy, iF(static_cast<int>(k), s)) -= y.y;
      at(bal, iF(static_cast<int>(k), s)) -= 1.0;
    }
    sys.rhs[bal] = data[k].f_integral;
  }

  if (row != n) throw SchemeError("saddle oracle: equation/unknown count mismatch");
  return sys;
}

Solution solve_saddle_oracle(const Mesh& mesh, const std::vector<CellData>& data,
                             const SaddleSystem& sys) {
  const std::size_t M = mesh.cell_count();
  DenseLu lu(sys.matrix, sys.n);
  std::vector<double> x = lu.solve(sys.rhs);

  // One step of iterative refinement: the penalization makes this system
  // badly conditioned (~1/nu), and the refinement step recovers the
  // digits lost to it.
  {
    std::vector<double> r(sys.n, 0.0);
    for (std::size_t i = 0; i < sys.n; ++i) {
      double ax = 0.0;
      for (std::size_t j = 0; j < sys.n; ++j) ax += sys.matrix[i * sys.n + j] * x[j];
      r[i] = sys.rhs[i] - ax;
    }
    std::vector<double> dx = lu.solve(r);
    for (std::size_t i = 0; i < sys.n; ++i) x[i] += dx[i];
  }

  Solution sol;
  sol.u.assign(M, 0.0);
  sol.v.assign(M, Vec2{0.0, 0.0});
  sol.flux.resize(M);
  for (std::size_t k = 0; k < M; ++k) {
    sol.u[k] = x[k];
    sol.v[k] = {x[M + 2 * k], x[M + 2 * k + 1]};
    const Cell& K = mesh.cell(static_cast<int>(k));
    sol.flux[k].resize(K.edge_ids.size());
    for (std::size_t s = 0; s < K.edge_ids.size(); ++s) sol.flux[k][s] = x[sys.flux_offset[k] + s];
  }

  // Recover traces from the single-cell trace relation, using cell_a.
  sol.traces.assign(mesh.edge_count(), 0.0);
  for (std::size_t e = 0; e < mesh.edge_count(); ++e) {
    const Edge& ed = mesh.edge(static_cast<int>(e));
    const Cell& K = mesh.cell(ed.cell_a);
    std::size_t sK = 0;
    while (K.edge_ids[sK] != static_cast<int>(e)) ++sK;
    Vec2 y = ed.barycenter - K.point;
    double nu_term = 0.0;  // recompute with the flux actually solved for
    (void)data;
    // The trace is u_K + v_K.y + nu m F; nu m F is already embedded in the
    // solved system, so reconstruct it from the residual-free relation by
    // reading the assembled coefficient back out of the matrix row.
    nu_term = sys.matrix[e * sys.n + (sys.flux_offset[ed.cell_a] + sK)] * sol.flux[ed.cell_a][sK];
    sol.traces[e] = sol.u[ed.cell_a] + sol.v[ed.cell_a].dot(y) + nu_term;
  }

  sol.stats.unknowns = sys.n;
  sol.stats.method = "dense-lu";
  return sol;
}

}  // namespace mfv
