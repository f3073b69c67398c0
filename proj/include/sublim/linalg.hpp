#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sublim {

using Vector = std::vector<double>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Thrown by orthonormalize when an input vector is (numerically) in the span
/// of the ones before it.
class RankDeficiencyError : public Error {
 public:
  RankDeficiencyError(std::size_t index, double relative_residual);
  std::size_t index() const noexcept { return index_; }
  double relative_residual() const noexcept { return residual_; }

 private:
  std::size_t index_;
  double residual_;
};

struct Tolerances {
  double ortho = 1e-10;  // max |B^T B - I| entry accepted as orthonormal
  double rank = 1e-8;    // relative residual below which a vector is dependent
  double equal = 1e-8;   // gap at or below which two subspaces are "the same"
};

/// Dense row-major matrix, only as large as the k x k problems here need.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Matrix transposed() const;
  friend Matrix operator*(const Matrix& a, const Matrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// A k-dimensional subspace of R^d held by an orthonormal basis.
///
/// Instances only come out of orthonormalize() or from_orthonormal(), so the
/// basis is always orthonormal to within Tolerances::ortho.
class Subspace {
 public:
  /// Adopts `basis` as-is after checking it is orthonormal; never rewrites it.
  static Subspace from_orthonormal(std::vector<Vector> basis, double tol = Tolerances{}.ortho);

  std::size_t ambient_dim() const noexcept { return ambient_dim_; }
  std::size_t dim() const noexcept { return basis_.size(); }
  const std::vector<Vector>& basis() const noexcept { return basis_; }
  const Vector& basis_vector(std::size_t i) const { return basis_.at(i); }

  /// d x k matrix whose columns are the basis vectors.
  Matrix basis_matrix() const;
  /// Same subspace, basis replaced by (basis matrix) * q for an orthogonal k x k q.
  Subspace with_mixed_basis(const Matrix& q) const;

 private:
  Subspace(std::size_t ambient_dim, std::vector<Vector> basis)
      : ambient_dim_(ambient_dim), basis_(std::move(basis)) {}
  friend Subspace orthonormalize(std::span<const Vector>, const Tolerances&);

  std::size_t ambient_dim_;
  std::vector<Vector> basis_;
};

double inner(std::span<const double> u, std::span<const double> v);
double norm(std::span<const double> u);

/// Modified Gram-Schmidt with a second full orthogonalization pass.
Subspace orthonormalize(std::span<const Vector> vectors, const Tolerances& tol = {});

/// Max entry of |B^T B - I|.
double orthonormality_defect(const std::vector<Vector>& basis);

/// P_V(u) = sum_j <u, v_j> v_j
Vector project(std::span<const double> u, const Subspace& v);
double dist_point_subspace(std::span<const double> u, const Subspace& v);
/// sum_j <u, v_j>^2, i.e. |P_V(u)|^2 without forming P_V(u).
double projection_norm_sq(std::span<const double> u, const Subspace& v);

/// sup over unit u in U of |u - P_V(u)|, for dim U == dim V.
///
/// Evaluated as sqrt(lambda_max(R^T R)) with R = A - B (A^T B)^T, where A, B are
/// the basis matrices. R^T R equals I - G G^T (G = A^T B) exactly, so this is
/// sqrt(1 - lambda_min(G G^T)); the residual form keeps full relative accuracy
/// when the subspaces nearly coincide.
double gap(const Subspace& u, const Subspace& v);
/// The same quantity formed literally as sqrt(1 - lambda_min(G G^T)). Loses
/// about half the digits for nearly equal subspaces.
double gap_cross_gram(const Subspace& u, const Subspace& v);
/// gap(u, v) <= tol.equal
bool same_subspace(const Subspace& u, const Subspace& v, const Tolerances& tol = {});

Matrix gram_matrix(std::span<const Vector> vectors);
/// LU determinant with partial pivoting.
double determinant(const Matrix& m);
/// det of the Gram matrix. Defined for any count >= 1; more than d vectors
/// are always dependent and give 0 up to round-off.
double gramian(std::span<const Vector> vectors);
/// Standard n-norm: sqrt(max(gramian, 0)).
double n_norm(std::span<const Vector> vectors);

struct SymmetricEigen {
  std::vector<double> values;  // ascending
  int sweeps = 0;
};

/// Cyclic Jacobi. Stops once the off-diagonal Frobenius norm is at most
/// off_tol times the Frobenius norm of the input.
SymmetricEigen jacobi_eigenvalues(Matrix a, double off_tol = 1e-13, int max_sweeps = 50);

/// Orthonormal basis of the orthogonal complement of v, built by sweeping
/// the standard basis vectors e_1..e_d through Gram-Schmidt against v.
std::vector<Vector> complement_basis(const Subspace& v);

}  // namespace sublim
