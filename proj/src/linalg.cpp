#include "sublim/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace sublim {

namespace {

void require_same_length(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": length mismatch (" + std::to_string(a) +
                         " vs " + std::to_string(b) + ")");
  }
}

void require_finite(std::span<const double> u, const char* what) {
  for (double x : u) {
    if (!std::isfinite(x)) throw NumericalError(std::string(what) + ": non-finite coordinate");
  }
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

}  // namespace

RankDeficiencyError::RankDeficiencyError(std::size_t index, double relative_residual)
    : Error("orthonormalize: vector " + std::to_string(index) +
            " is linearly dependent on the preceding vectors (relative residual " +
            std::to_string(relative_residual) + ")"),
      index_(index),
      residual_(relative_residual) {}

// ---------------------------------------------------------------------------
// Matrix

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("matrix product: inner dimensions differ");
  Matrix p(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t l = 0; l < a.cols(); ++l) {
      const double ail = a(i, l);
      for (std::size_t j = 0; j < b.cols(); ++j) p(i, j) += ail * b(l, j);
    }
  return p;
}

// ---------------------------------------------------------------------------
// Subspace

Subspace Subspace::from_orthonormal(std::vector<Vector> basis, double tol) {
  if (basis.empty()) throw DimensionError("subspace needs at least one basis vector");
  const std::size_t d = basis.front().size();
  if (d == 0) throw DimensionError("ambient dimension must be at least 1");
  if (basis.size() > d) throw DimensionError("more basis vectors than the ambient dimension");
  for (const auto& b : basis) {
    require_same_length(b.size(), d, "subspace basis");
    require_finite(b, "subspace basis");
  }
  const double defect = orthonormality_defect(basis);
  if (!(defect <= tol)) {
    throw NumericalError("basis is not orthonormal (max |B^T B - I| = " + std::to_string(defect) +
                         ")");
  }
  return Subspace(d, std::move(basis));
}

Matrix Subspace::basis_matrix() const {
  Matrix a(ambient_dim_, basis_.size());
  for (std::size_t j = 0; j < basis_.size(); ++j)
    for (std::size_t r = 0; r < ambient_dim_; ++r) a(r, j) = basis_[j][r];
  return a;
}

Subspace Subspace::with_mixed_basis(const Matrix& q) const {
  const std::size_t k = dim();
  if (q.rows() != k || q.cols() != k) throw DimensionError("mixing matrix must be k x k");
  std::vector<Vector> mixed(k, Vector(ambient_dim_, 0.0));
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < k; ++i) axpy(q(i, j), basis_[i], mixed[j]);
  return from_orthonormal(std::move(mixed));
}

// ---------------------------------------------------------------------------
// Vector kernels

double inner(std::span<const double> u, std::span<const double> v) {
  require_same_length(u.size(), v.size(), "inner");
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

double norm(std::span<const double> u) { return std::sqrt(inner(u, u)); }

Subspace orthonormalize(std::span<const Vector> vectors, const Tolerances& tol) {
  if (vectors.empty()) throw DimensionError("orthonormalize: no vectors");
  const std::size_t d = vectors.front().size();
  if (d == 0) throw DimensionError("orthonormalize: zero-length vectors");
  if (vectors.size() > d) {
    throw RankDeficiencyError(d, 0.0);  // the (d+1)-th vector cannot be independent
  }
  std::vector<Vector> basis;
  basis.reserve(vectors.size());
  for (std::size_t idx = 0; idx < vectors.size(); ++idx) {
    const Vector& x = vectors[idx];
    require_same_length(x.size(), d, "orthonormalize");
    require_finite(x, "orthonormalize");
    const double original = norm(x);
    Vector w = x;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : basis) axpy(-inner(w, q), q, w);
    }
    const double residual = norm(w);
    const double relative = original > 0.0 ? residual / original : 0.0;
    if (original == 0.0 || relative < tol.rank) throw RankDeficiencyError(idx, relative);
    for (double& c : w) c /= residual;
    basis.push_back(std::move(w));
  }
  return Subspace(d, std::move(basis));
}

double orthonormality_defect(const std::vector<Vector>& basis) {
  double worst = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i; j < basis.size(); ++j) {
      const double target = i == j ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(inner(basis[i], basis[j]) - target));
    }
  return worst;
}

Vector project(std::span<const double> u, const Subspace& v) {
  require_same_length(u.size(), v.ambient_dim(), "project");
  Vector p(u.size(), 0.0);
  for (const auto& b : v.basis()) axpy(inner(u, b), b, p);
  return p;
}

double dist_point_subspace(std::span<const double> u, const Subspace& v) {
  const Vector p = project(u, v);
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += (u[i] - p[i]) * (u[i] - p[i]);
  return std::sqrt(s);
}

double projection_norm_sq(std::span<const double> u, const Subspace& v) {
  require_same_length(u.size(), v.ambient_dim(), "projection_norm_sq");
  double s = 0.0;
  for (const auto& b : v.basis()) {
    const double c = inner(u, b);
    s += c * c;
  }
  return s;
}

// ---------------------------------------------------------------------------
// Gap

namespace {

void require_gap_compatible(const Subspace& u, const Subspace& v) {
  if (u.ambient_dim() != v.ambient_dim())
    throw DimensionError("gap: subspaces live in different ambient dimensions");
  if (u.dim() != v.dim())
    throw DimensionError("gap: only defined here for subspaces of equal dimension");
}

double clamp_unit(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

double gap(const Subspace& u, const Subspace& v) {
  require_gap_compatible(u, v);
  const std::size_t k = u.dim();
  // Columns of R: u_i - P_V(u_i).
  std::vector<Vector> residual;
  residual.reserve(k);
  for (const auto& ui : u.basis()) {
    Vector r = ui;
    axpy(-1.0, project(ui, v), r);
    residual.push_back(std::move(r));
  }
  const Matrix rtr = gram_matrix(residual);
  const auto eig = jacobi_eigenvalues(rtr);
  return std::sqrt(clamp_unit(eig.values.back()));
}

double gap_cross_gram(const Subspace& u, const Subspace& v) {
  require_gap_compatible(u, v);
  const Matrix g = u.basis_matrix().transposed() * v.basis_matrix();
  const Matrix m = g * g.transposed();
  const auto eig = jacobi_eigenvalues(m);
  return std::sqrt(clamp_unit(1.0 - eig.values.front()));
}

bool same_subspace(const Subspace& u, const Subspace& v, const Tolerances& tol) {
  return gap(u, v) <= tol.equal;
}

// ---------------------------------------------------------------------------
// Gram determinants

Matrix gram_matrix(std::span<const Vector> vectors) {
  const std::size_t n = vectors.size();
  Matrix g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) g(i, j) = g(j, i) = inner(vectors[i], vectors[j]);
  return g;
}

double determinant(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("determinant of a non-square matrix");
  Matrix a = m;
  const std::size_t n = a.rows();
  double det = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    if (a(pivot, col) == 0.0) return 0.0;
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a(pivot, c), a(col, c));
      det = -det;
    }
    det *= a(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a(r, col) / a(col, col);
      for (std::size_t c = col; c < n; ++c) a(r, c) -= f * a(col, c);
    }
  }
  return det;
}

double gramian(std::span<const Vector> vectors) {
  if (vectors.empty()) throw DimensionError("gramian: no vectors");
  for (const auto& x : vectors) require_same_length(x.size(), vectors.front().size(), "gramian");
  return determinant(gram_matrix(vectors));
}

double n_norm(std::span<const Vector> vectors) { return std::sqrt(std::max(gramian(vectors), 0.0)); }

// ---------------------------------------------------------------------------
// Jacobi

SymmetricEigen jacobi_eigenvalues(Matrix a, double off_tol, int max_sweeps) {
  if (a.rows() != a.cols()) throw DimensionError("jacobi: matrix is not square");
  const std::size_t n = a.rows();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) total += a(i, j) * a(i, j);
  const double threshold = off_tol * std::sqrt(total);

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  SymmetricEigen out;
  while (off_norm() > threshold) {
    if (out.sweeps == max_sweeps) throw NumericalError("jacobi: no convergence within sweep limit");
    ++out.sweeps;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::hypot(theta, 1.0));
        const double c = 1.0 / std::hypot(t, 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);
        a(p, p) -= t * apq;
        a(q, q) += t * apq;
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = a(r, p);
          const double arq = a(r, q);
          a(r, p) = a(p, r) = arp - s * (arq + tau * arp);
          a(r, q) = a(q, r) = arq + s * (arp - tau * arq);
        }
      }
    }
  }
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.values[i] = a(i, i);
  std::sort(out.values.begin(), out.values.end());
  return out;
}

std::vector<Vector> complement_basis(const Subspace& v) {
  const std::size_t d = v.ambient_dim();
  std::vector<Vector> all = v.basis();
  std::vector<Vector> extra;
  for (std::size_t e = 0; e < d && all.size() < d; ++e) {
    Vector w(d, 0.0);
    w[e] = 1.0;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : all) axpy(-inner(w, q), q, w);
    const double r = norm(w);
    if (r < 1e-6) continue;
    for (double& c : w) c /= r;
    all.push_back(w);
    extra.push_back(std::move(w));
  }
  return extra;
}

}  // namespace sublim
