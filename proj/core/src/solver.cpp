#include "mfv/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace mfv {

// ---------------------------------------------------------------- DenseLdlt

DenseLdlt::DenseLdlt(const DenseSym& a) : n_(a.order()), l_(n_ * n_, 0.0), d_(n_, 0.0) {
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n_; ++i) max_diag = std::max(max_diag, std::abs(a.at(i, i)));
  const double pivot_tol = 1e-14 * std::max(max_diag, 1e-300);

  for (std::size_t j = 0; j < n_; ++j) {
    double dj = a.at(j, j);
    for (std::size_t k = 0; k < j; ++k) dj -= l_[j * n_ + k] * l_[j * n_ + k] * d_[k];
    if (dj <= pivot_tol)
      throw SolverError("matrix not positive definite (pivot " + std::to_string(dj) +
                        " at index " + std::to_string(j) + ")");
    d_[j] = dj;
    l_[j * n_ + j] = 1.0;
    for (std::size_t i = j + 1; i < n_; ++i) {
      double s = a.at(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l_[i * n_ + k] * l_[j * n_ + k] * d_[k];
      l_[i * n_ + j] = s / dj;
    }
  }
}

std::vector<double> DenseLdlt::solve(const std::vector<double>& rhs) const {
  std::vector<double> x = rhs;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t k = 0; k < i; ++k) x[i] -= l_[i * n_ + k] * x[k];
  for (std::size_t i = 0; i < n_; ++i) x[i] /= d_[i];
  for (std::size_t ii = n_; ii-- > 0;)
    for (std::size_t k = ii + 1; k < n_; ++k) x[ii] -= l_[k * n_ + ii] * x[k];
  return x;
}

double DenseLdlt::min_pivot() const {
  double m = std::numeric_limits<double>::infinity();
  for (double d : d_) m = std::min(m, std::abs(d));
  return n_ == 0 ? 0.0 : m;
}

// ------------------------------------------------------------------ DenseLu

DenseLu::DenseLu(std::vector<double> a, std::size_t n) : n_(n), lu_(std::move(a)), piv_(n) {
  std::iota(piv_.begin(), piv_.end(), std::size_t{0});
  for (std::size_t k = 0; k < n_; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n_; ++i)
      if (std::abs(lu_[i * n_ + k]) > std::abs(lu_[p * n_ + k])) p = i;
    if (p != k) {
      for (std::size_t j = 0; j < n_; ++j) std::swap(lu_[p * n_ + j], lu_[k * n_ + j]);
      std::swap(piv_[p], piv_[k]);
    }
    double pivot = lu_[k * n_ + k];
    if (pivot == 0.0)
      throw SolverError("singular matrix in LU factorization at column " + std::to_string(k));
    for (std::size_t i = k + 1; i < n_; ++i) {
      double m = lu_[i * n_ + k] / pivot;
      lu_[i * n_ + k] = m;
      for (std::size_t j = k + 1; j < n_; ++j) lu_[i * n_ + j] -= m * lu_[k * n_ + j];
    }
  }
}

std::vector<double> DenseLu::solve(const std::vector<double>& rhs) const {
  std::vector<double> x(n_);
  for (std::size_t i = 0; i < n_; ++i) x[i] = rhs[piv_[i]];
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t k = 0; k < i; ++k) x[i] -= lu_[i * n_ + k] * x[k];
  for (std::size_t ii = n_; ii-- > 0;) {
    for (std::size_t k = ii + 1; k < n_; ++k) x[ii] -= lu_[ii * n_ + k] * x[k];
    x[ii] /= lu_[ii * n_ + ii];
  }
  return x;
}

double DenseLu::min_pivot() const {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n_; ++i) m = std::min(m, std::abs(lu_[i * n_ + i]));
  return n_ == 0 ? 0.0 : m;
}

// ----------------------------------------------------------------- SparseSym

SparseSym::SparseSym(std::size_t n, std::vector<std::size_t> rows,
                     std::vector<std::size_t> cols, std::vector<double> vals)
    : n_(n) {
  if (rows.size() != cols.size() || rows.size() != vals.size())
    throw SolverError("triplet arrays have mismatched lengths");
  for (std::size_t k = 0; k < rows.size(); ++k)
    if (cols[k] > rows[k] || rows[k] >= n_)
      throw SolverError("triplet outside the lower triangle");

  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return rows[a] != rows[b] ? rows[a] < rows[b] : cols[a] < cols[b];
  });

  ptr_.assign(n_ + 1, 0);
  std::size_t last_row = std::numeric_limits<std::size_t>::max();
  for (std::size_t k : order) {
    if (!col_.empty() && rows[k] == last_row && col_.back() == cols[k]) {
      val_.back() += vals[k];
      continue;
    }
    last_row = rows[k];
    col_.push_back(cols[k]);
    val_.push_back(vals[k]);
    ++ptr_[rows[k] + 1];
  }
  for (std::size_t i = 0; i < n_; ++i) ptr_[i + 1] += ptr_[i];
}

std::vector<double> SparseSym::multiply(const std::vector<double>& x) const {
  std::vector<double> y(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t k = ptr_[i]; k < ptr_[i + 1]; ++k) {
      std::size_t j = col_[k];
      y[i] += val_[k] * x[j];
      if (j != i) y[j] += val_[k] * x[i];
    }
  return y;
}

std::vector<double> SparseSym::diagonal() const {
  std::vector<double> d(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t k = ptr_[i]; k < ptr_[i + 1]; ++k)
      if (col_[k] == i) d[i] = val_[k];
  return d;
}

// --------------------------------------------------------------------- RCM

std::vector<std::size_t> reverse_cuthill_mckee(const SparseSym& a) {
  const std::size_t n = a.order();
  // Full (symmetric) adjacency, self-loops dropped.
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k) {
      std::size_t j = a.col_idx()[k];
      if (j == i) continue;
      adj[i].push_back(j);
      adj[j].push_back(i);
    }
  for (auto& nb : adj) std::sort(nb.begin(), nb.end());

  std::vector<std::size_t> order;
  order.reserve(n);
  std::vector<char> visited(n, 0);

  auto bfs_last = [&](std::size_t start) {
    std::vector<char> seen(n, 0);
    std::vector<std::size_t> q = {start};
    seen[start] = 1;
    std::size_t last = start;
    for (std::size_t h = 0; h < q.size(); ++h) {
      last = q[h];
      for (std::size_t nb : adj[q[h]])
        if (!seen[nb]) {
          seen[nb] = 1;
          q.push_back(nb);
        }
    }
    return last;
  };

  for (std::size_t seed = 0; seed < n; ++seed) {
    if (visited[seed]) continue;
    // Pseudo-peripheral start for this component.
    std::size_t start = bfs_last(bfs_last(seed));

    std::vector<std::size_t> q = {start};
    visited[start] = 1;
    for (std::size_t h = 0; h < q.size(); ++h) {
      std::size_t u = q[h];
      order.push_back(u);
      std::vector<std::size_t> next;
      for (std::size_t nb : adj[u])
        if (!visited[nb]) {
          visited[nb] = 1;
          next.push_back(nb);
        }
      std::sort(next.begin(), next.end(),
                [&](std::size_t x, std::size_t y) { return adj[x].size() < adj[y].size(); });
      for (std::size_t nb : next) q.push_back(nb);
    }
  }

  std::reverse(order.begin(), order.end());
  return order;
}

// --------------------------------------------------------- SparseCholesky

SparseCholesky::SparseCholesky(const SparseSym& a) : n_(a.order()) {
  perm_ = reverse_cuthill_mckee(a);
  inv_.assign(n_, 0);
  for (std::size_t i = 0; i < n_; ++i) inv_[perm_[i]] = i;

  // Profile of the permuted matrix.
  first_.assign(n_, 0);
  for (std::size_t i = 0; i < n_; ++i) first_[i] = i;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k) {
      std::size_t pi = inv_[i];
      std::size_t pj = inv_[a.col_idx()[k]];
      std::size_t r = std::max(pi, pj);
      std::size_t c = std::min(pi, pj);
      first_[r] = std::min(first_[r], c);
    }

  start_.assign(n_ + 1, 0);
  for (std::size_t i = 0; i < n_; ++i) start_[i + 1] = start_[i] + (i - first_[i] + 1);
  vals_.assign(start_[n_], 0.0);

  // Scatter permuted entries into the profile.
  auto slot = [&](std::size_t r, std::size_t c) -> double& {
    return vals_[start_[r] + (c - first_[r])];
  };
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k) {
      std::size_t pi = inv_[i];
      std::size_t pj = inv_[a.col_idx()[k]];
      if (pi < pj) std::swap(pi, pj);
      slot(pi, pj) += a.values()[k];
    }

  // In-place profile Cholesky, row by row.
  for (std::size_t i = 0; i < n_; ++i) {
    double* ri = &vals_[start_[i]];
    const std::size_t fi = first_[i];
    for (std::size_t j = fi; j < i; ++j) {
      const double* rj = &vals_[start_[j]];
      const std::size_t fj = first_[j];
      const std::size_t lo = std::max(fi, fj);
      double s = ri[j - fi];
      const double* pi_ = ri + (lo - fi);
      const double* pj_ = rj + (lo - fj);
      for (std::size_t k = lo; k < j; ++k) s -= *pi_++ * *pj_++;
      ri[j - fi] = s / rj[j - fj];
    }
    double d = ri[i - fi];
    for (std::size_t k = fi; k < i; ++k) d -= ri[k - fi] * ri[k - fi];
    if (d <= 0.0)
      throw SolverError("sparse Cholesky: matrix not positive definite at row " +
                        std::to_string(i));
    ri[i - fi] = std::sqrt(d);
  }
}

std::vector<double> SparseCholesky::solve(const std::vector<double>& rhs) const {
  std::vector<double> y(n_);
  for (std::size_t i = 0; i < n_; ++i) y[i] = rhs[perm_[i]];
  for (std::size_t i = 0; i < n_; ++i) {
    const double* ri = &vals_[start_[i]];
    const std::size_t fi = first_[i];
    double s = y[i];
    for (std::size_t k = fi; k < i; ++k) s -= ri[k - fi] * y[k];
    y[i] = s / ri[i - fi];
  }
  for (std::size_t ii = n_; ii-- > 0;) {
    const double* ri = &vals_[start_[ii]];
    const std::size_t fi = first_[ii];
    y[ii] /= ri[ii - fi];
    const double yi = y[ii];
    for (std::size_t k = fi; k < ii; ++k) y[k] -= ri[k - fi] * yi;
  }
  std::vector<double> x(n_);
  for (std::size_t i = 0; i < n_; ++i) x[perm_[i]] = y[i];
  return x;
}

// --------------------------------------------------------------------- PCG

PcgResult pcg_solve(const SparseSym& a, const std::vector<double>& rhs, double tol,
                    std::size_t max_iter) {
  const std::size_t n = a.order();
  if (max_iter == 0) max_iter = 10 * n + 100;

  std::vector<double> diag = a.diagonal();
  for (double& d : diag) {
    if (d <= 0.0) throw SolverError("Jacobi preconditioner: non-positive diagonal");
    d = 1.0 / d;
  }

  auto dot = [](const std::vector<double>& u, const std::vector<double>& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
    return s;
  };

  const double bnorm = std::sqrt(dot(rhs, rhs));
  PcgResult res;
  res.x.assign(n, 0.0);
  if (bnorm == 0.0) return res;

  std::vector<double> r = rhs;
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = diag[i] * r[i];
  std::vector<double> p = z;
  double rz = dot(r, z);

  for (std::size_t it = 0; it < max_iter; ++it) {
    std::vector<double> ap = a.multiply(p);
    double alpha = rz / dot(p, ap);
    for (std::size_t i = 0; i < n; ++i) {
      res.x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    double rnorm = std::sqrt(dot(r, r));
    res.relative_residual = rnorm / bnorm;
    res.iterations = it + 1;
    if (res.relative_residual <= tol) return res;
    for (std::size_t i = 0; i < n; ++i) z[i] = diag[i] * r[i];
    double rz_new = dot(r, z);
    double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  throw SolverError("PCG did not converge in " + std::to_string(max_iter) +
                    " iterations (relative residual " +
                    std::to_string(res.relative_residual) + ")");
}

double relative_residual(const SparseSym& a, const std::vector<double>& x,
                         const std::vector<double>& b) {
  std::vector<double> ax = a.multiply(x);
  double rn = 0.0, bn = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    double r = ax[i] - b[i];
    rn += r * r;
    bn += b[i] * b[i];
  }
  return std::sqrt(rn) / std::max(1.0, std::sqrt(bn));
}

}  // namespace mfv
