// The mixed finite volume discretization: penalization policy, per-cell
// local systems and their static condensation, the hybrid SPD system
// over interior-edge traces, back-substitution, and the full
// saddle-point formulation kept as an independent oracle.

#ifndef MFV_SCHEME_HPP
#define MFV_SCHEME_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mfv/mesh.hpp"
#include "mfv/problem.hpp"
#include "mfv/solver.hpp"

namespace mfv {

struct PenalizationPolicy {
  enum class Mode { FixedOverMeasure, PowerOfDiameter, Zero };

  Mode mode = Mode::FixedOverMeasure;
  double nu0 = 1e-9;
  double beta = 0.0;

  static PenalizationPolicy fixed_over_measure(double nu0 = 1e-9);
  static PenalizationPolicy power_of_diameter(double nu0, double beta);
  static PenalizationPolicy zero();

  double nu_for(const Cell& cell) const;

  // Zero penalization is only legal on all-simplicial meshes.
  void validate_for(const Mesh& mesh) const;
};

// Per-cell condensed system. With m = Card(E_K) local edges:
//   F_K        = C u_traces + g_f * f_K
//   u_K        = p . u_traces + q * f_K
// On the nu > 0 path these come from B_K^{-1}: C = B^{-1} - b b^T / b_K,
// g_f = -b / b_K, p = b / b_K, q = 1 / b_K. On the nu = 0 simplicial path
// they come from the augmented local solve (B_K itself is singular).
struct LocalSystem {
  int cell = -1;
  std::vector<int> edges;           // edge ids, cell-local order
  std::vector<double> C;            // m x m, row-major, symmetric
  std::vector<double> g_f;          // m
  std::vector<double> p;            // m
  double q = 0.0;
  std::vector<double> b_coeffs;     // b_{K,sigma} = p / q
  double b_K = 0.0;                 // 1 / q
};

// The (penalized) local matrix B_K, exposed for testing:
// B[s][s'] = (1/m(K)) Lambda_K^{-1}(x_s' - x_K) . (x_s - x_K) + nu m(K) delta.
DenseSym build_local_matrix(const Mesh& mesh, int cell, const CellData& data, double nu);

// Condensation of one cell. Throws SchemeError when nu = 0 on a
// non-simplicial cell or when factorization fails.
LocalSystem local_system(const Mesh& mesh, int cell, const CellData& data, double nu);

struct HybridSystem {
  std::vector<int> interior_edges;      // row -> edge id
  std::optional<SparseSym> matrix;      // absent when there are no unknowns
  std::vector<double> rhs;
  // Worst |C[s][s'] - C[s'][s]| over all cells, relative to the largest
  // condensed-matrix entry (the matrix is symmetric in exact arithmetic).
  double max_asymmetry = 0.0;
};

HybridSystem assemble_hybrid(const Mesh& mesh, const std::vector<CellData>& data,
                             const std::vector<LocalSystem>& locals,
                             const std::function<double(const Point2&)>& dirichlet);

struct SolveStats {
  std::size_t unknowns = 0;
  std::string method;          // "cholesky", "pcg" or "none"
  std::size_t iterations = 0;  // pcg only
  double residual = 0.0;       // relative residual of the hybrid solve
  double assemble_seconds = 0.0;
  double solve_seconds = 0.0;
};

struct Solution {
  std::vector<double> u;                   // per cell
  std::vector<Vec2> v;                     // per cell
  std::vector<std::vector<double>> flux;   // per cell, aligned with edge_ids
  std::vector<double> traces;              // per edge
  SolveStats stats;
};

// u_K, F and v from known traces (interior solved, boundary prescribed).
Solution back_substitute(const Mesh& mesh, const std::vector<CellData>& data,
                         const std::vector<LocalSystem>& locals,
                         const std::vector<double>& traces);

struct SolverOptions {
  enum class Method { Auto, Cholesky, Pcg };
  Method method = Method::Auto;
  double tol = 1e-12;
  std::size_t max_iter = 0;
  // Auto switches from the direct solver to PCG above this many unknowns.
  std::size_t direct_limit = 200000;
};

// End-to-end pipeline: cell data, local systems, hybrid assembly, sparse
// solve, back-substitution.
Solution solve_mfv(const Mesh& mesh, const ProblemCase& pc, const PenalizationPolicy& policy,
                   const SolverOptions& options = {}, int quad_order = 2);

// Dense assembly of the raw scheme before elimination, used as an
// independent oracle on small meshes. Unknown ordering: u per cell, then
// v components per cell, then F per (cell, local edge).
struct SaddleSystem {
  std::size_t n = 0;
  std::vector<double> matrix;           // dense row-major
  std::vector<double> rhs;
  std::vector<std::size_t> flux_offset; // per cell, into the F block
};

SaddleSystem assemble_saddle_oracle(const Mesh& mesh, const std::vector<CellData>& data,
                                    const PenalizationPolicy& policy,
                                    const std::function<double(const Point2&)>& dirichlet,
                                    std::size_t max_unknowns = 500);

// Dense solve of the oracle, returned in the same Solution layout.
Solution solve_saddle_oracle(const Mesh& mesh, const std::vector<CellData>& data,
                             const SaddleSystem& sys);

// Text dump, versioned `mfv-sol v1`.
void write_solution(const Mesh& mesh, const Solution& sol, std::ostream& out);

}  // namespace mfv

#endif
