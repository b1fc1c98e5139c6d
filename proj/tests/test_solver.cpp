#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "mfv/solver.hpp"

using namespace mfv;

TEST_SUITE_BEGIN("solver");

namespace {

// Tridiagonal (-1, 2, -1) of order n as lower-triangle triplets.
SparseSym tridiag(std::size_t n) {
  std::vector<std::size_t> rows, cols;
  std::vector<double> vals;
  for (std::size_t i = 0; i < n; ++i) {
    rows.push_back(i);
    cols.push_back(i);
    vals.push_back(2.0);
    if (i > 0) {
      rows.push_back(i);
      cols.push_back(i - 1);
      vals.push_back(-1.0);
    }
  }
  return SparseSym(n, std::move(rows), std::move(cols), std::move(vals));
}

}  // namespace

TEST_CASE("dense LDLT solves SPD systems") {
  DenseSym a(2);
  a.set_sym(0, 0, 4.0);
  a.set_sym(0, 1, 1.0);
  a.set_sym(1, 1, 3.0);
  DenseLdlt f(a);
  std::vector<double> x = f.solve({1.0, 2.0});
  // Solution of [[4,1],[1,3]] x = (1,2): x = (1/11, 7/11).
  CHECK(x[0] == doctest::Approx(1.0 / 11.0).epsilon(1e-14));
  CHECK(x[1] == doctest::Approx(7.0 / 11.0).epsilon(1e-14));
  CHECK(f.min_pivot() > 0.0);
}

TEST_CASE("dense LDLT rejects indefinite matrices") {
  DenseSym a(2);
  a.set_sym(0, 0, 1.0);
  a.set_sym(0, 1, 2.0);
  a.set_sym(1, 1, 1.0);
  CHECK_THROWS_AS(DenseLdlt{a}, SolverError);
}

TEST_CASE("dense LU with pivoting") {
  // First pivot is zero; partial pivoting must handle it.
  std::vector<double> a = {0.0, 1.0, 2.0,  //
                           1.0, 0.0, 1.0,  //
                           2.0, 1.0, 0.0};
  DenseLu lu(a, 3);
  std::vector<double> x = lu.solve({3.0, 2.0, 3.0});
  // Verify by multiplying back.
  for (std::size_t i = 0; i < 3; ++i) {
    double r = 0.0;
    for (std::size_t j = 0; j < 3; ++j) r += a[i * 3 + j] * x[j];
    CHECK(r == doctest::Approx(i == 1 ? 2.0 : 3.0).epsilon(1e-13));
  }
  std::vector<double> sing = {1.0, 2.0, 2.0, 4.0};
  CHECK_THROWS_AS(DenseLu(sing, 2), SolverError);
}

TEST_CASE("sparse triplets: duplicates summed, lower triangle enforced") {
  SparseSym a(2, {0, 1, 1, 1}, {0, 0, 1, 1}, {2.0, -1.0, 1.0, 1.0});
  CHECK(a.nonzeros() == 3);  // (1,1) appears twice, summed to 2
  std::vector<double> d = a.diagonal();
  CHECK(d[0] == 2.0);
  CHECK(d[1] == 2.0);
  std::vector<double> y = a.multiply({1.0, 1.0});
  CHECK(y[0] == doctest::Approx(1.0).epsilon(1e-15));  // symmetric expansion
  CHECK(y[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("profile Cholesky on the discrete Laplacian") {
  SparseSym a = tridiag(5);
  SparseCholesky chol(a);
  std::vector<double> x = chol.solve({1.0, 1.0, 1.0, 1.0, 1.0});
  std::vector<double> expect = {2.5, 4.0, 4.5, 4.0, 2.5};
  for (std::size_t i = 0; i < 5; ++i) CHECK(x[i] == doctest::Approx(expect[i]).epsilon(1e-13));
  CHECK(relative_residual(a, x, {1, 1, 1, 1, 1}) <= 1e-13);
}

TEST_CASE("PCG matches the direct solve") {
  SparseSym a = tridiag(40);
  std::vector<double> b(40, 1.0);
  SparseCholesky chol(a);
  std::vector<double> xd = chol.solve(b);
  PcgResult it = pcg_solve(a, b, 1e-13);
  REQUIRE(it.x.size() == 40);
  double diff = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < 40; ++i) {
    diff = std::max(diff, std::abs(it.x[i] - xd[i]));
    scale = std::max(scale, std::abs(xd[i]));
  }
  CHECK(diff / scale <= 1e-8);
  CHECK(it.relative_residual <= 1e-12);
}

TEST_CASE("PCG finite termination on a diagonal matrix") {
  // diag(1..n) with Jacobi preconditioning converges in one step.
  const std::size_t n = 30;
  std::vector<std::size_t> rows(n), cols(n);
  std::vector<double> vals(n);
  for (std::size_t i = 0; i < n; ++i) {
    rows[i] = cols[i] = i;
    vals[i] = static_cast<double>(i + 1);
  }
  SparseSym a(n, std::move(rows), std::move(cols), std::move(vals));
  PcgResult r = pcg_solve(a, std::vector<double>(n, 1.0), 1e-12);
  CHECK(r.iterations <= n + 5);
  for (std::size_t i = 0; i < n; ++i)
    CHECK(r.x[i] == doctest::Approx(1.0 / static_cast<double>(i + 1)).epsilon(1e-10));
}

TEST_CASE("PCG iteration cap raises a numerical error") {
  SparseSym a = tridiag(50);
  CHECK_THROWS_AS(pcg_solve(a, std::vector<double>(50, 1.0), 1e-14, 2), SolverError);
}

TEST_CASE("reverse Cuthill-McKee yields a valid permutation") {
  SparseSym a = tridiag(10);
  std::vector<std::size_t> perm = reverse_cuthill_mckee(a);
  REQUIRE(perm.size() == 10);
  std::vector<bool> seen(10, false);
  for (std::size_t p : perm) {
    REQUIRE(p < 10);
    CHECK_FALSE(seen[p]);
    seen[p] = true;
  }
  // Deterministic.
  CHECK(perm == reverse_cuthill_mckee(a));
}

TEST_SUITE_END();
