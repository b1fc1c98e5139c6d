// Linear-algebra kernels: small dense symmetric factorizations, a dense
// LU for the saddle-point oracle, and a sparse SPD solve (reverse
// Cuthill-McKee ordering + profile Cholesky) with a Jacobi-PCG fallback.
//
// Every solve path ends with an explicit residual computation; the
// residual is part of the returned diagnostics, never assumed.

#ifndef MFV_SOLVER_HPP
#define MFV_SOLVER_HPP

#include <cstddef>
#include <vector>

#include "mfv/errors.hpp"

namespace mfv {

// Dense symmetric matrix, full row-major storage.
class DenseSym {
public:
  DenseSym() = default;
  explicit DenseSym(std::size_t n) : n_(n), a_(n * n, 0.0) {}

  std::size_t order() const { return n_; }
  double& at(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  double at(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  // Sets both (i,j) and (j,i).
  void set_sym(std::size_t i, std::size_t j, double v) {
    a_[i * n_ + j] = v;
    a_[j * n_ + i] = v;
  }

private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

// LDL^T factorization of a symmetric positive definite matrix.
class DenseLdlt {
public:
  explicit DenseLdlt(const DenseSym& a);

  std::size_t order() const { return n_; }
  std::vector<double> solve(const std::vector<double>& rhs) const;

  // Smallest pivot magnitude, for rank diagnostics.
  double min_pivot() const;

private:
  std::size_t n_ = 0;
  std::vector<double> l_;  // unit lower triangle, row-major
  std::vector<double> d_;
};

// LU with partial pivoting for general dense square systems.
class DenseLu {
public:
  DenseLu(std::vector<double> a, std::size_t n);  // row-major

  std::size_t order() const { return n_; }
  std::vector<double> solve(const std::vector<double>& rhs) const;
  double min_pivot() const;

private:
  std::size_t n_ = 0;
  std::vector<double> lu_;
  std::vector<std::size_t> piv_;
};

// Sparse symmetric matrix; only the lower triangle (j <= i) is stored,
// compressed by rows.
class SparseSym {
public:
  // Triplets may repeat; duplicates are summed. Entries must satisfy
  // col <= row.
  SparseSym(std::size_t n, std::vector<std::size_t> rows, std::vector<std::size_t> cols,
            std::vector<double> vals);

  std::size_t order() const { return n_; }
  std::size_t nonzeros() const { return col_.size(); }

  // y = A x with implicit symmetric expansion.
  std::vector<double> multiply(const std::vector<double>& x) const;

  std::vector<double> diagonal() const;

  const std::vector<std::size_t>& row_ptr() const { return ptr_; }
  const std::vector<std::size_t>& col_idx() const { return col_; }
  const std::vector<double>& values() const { return val_; }

private:
  std::size_t n_ = 0;
  std::vector<std::size_t> ptr_;
  std::vector<std::size_t> col_;
  std::vector<double> val_;
};

// Reverse Cuthill-McKee permutation of the adjacency of a SparseSym.
// perm[new_index] = old_index.
std::vector<std::size_t> reverse_cuthill_mckee(const SparseSym& a);

// Profile (skyline) Cholesky after RCM reordering.
class SparseCholesky {
public:
  explicit SparseCholesky(const SparseSym& a);

  std::vector<double> solve(const std::vector<double>& rhs) const;
  std::size_t profile_size() const { return vals_.size(); }

private:
  std::size_t n_ = 0;
  std::vector<std::size_t> perm_;     // new -> old
  std::vector<std::size_t> inv_;      // old -> new
  std::vector<std::size_t> first_;    // first column of each profile row
  std::vector<std::size_t> start_;    // offset of each row in vals_
  std::vector<double> vals_;          // L rows, diagonal included
};

struct PcgResult {
  std::vector<double> x;
  std::size_t iterations = 0;
  double relative_residual = 0.0;
};

// Conjugate gradients with Jacobi preconditioning. Throws SolverError if
// max_iter is exceeded (the error message carries the residual).
PcgResult pcg_solve(const SparseSym& a, const std::vector<double>& rhs, double tol = 1e-12,
                    std::size_t max_iter = 0);

// || A x - b || / max(1, ||b||).
double relative_residual(const SparseSym& a, const std::vector<double>& x,
                         const std::vector<double>& b);

}  // namespace mfv

#endif
