#pragma once

#include <cstddef>
#include <vector>

namespace l2cut {

// Dense square matrix, row major.
struct Matrix {
  std::size_t n = 0;
  std::vector<double> a;

  Matrix() = default;
  explicit Matrix(std::size_t n_) : n(n_), a(n_ * n_, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }
  double* row(std::size_t i) { return a.data() + i * n; }
  const double* row(std::size_t i) const { return a.data() + i * n; }

  static Matrix identity(std::size_t n);
};

Matrix matmul(const Matrix& x, const Matrix& y);
double max_abs(const Matrix& m);
double inf_norm(const Matrix& m);  // max row sum of |entries|

// LU factorization with partial pivoting, in place. Throws ValidationError
// on a (numerically) singular matrix.
struct LuFactors {
  Matrix lu;
  std::vector<std::size_t> piv;
};
LuFactors lu_factor(Matrix m);
void lu_solve_inplace(const LuFactors& f, double* b);        // one rhs
Matrix lu_solve(const LuFactors& f, const Matrix& rhs);      // rhs columns

// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
// vectors is stored with eigenvectors as ROWS (vectors.row(i) pairs with
// values[i]); unordered on return. Residual is driven to rounding level
// (off-diagonal Frobenius mass below 1e-14 of the matrix scale); throws
// ConvergenceError after 60 sweeps.
struct SymmetricEigen {
  std::vector<double> values;
  Matrix vectors;
};
SymmetricEigen jacobi_eigen(Matrix s);

// Matrix exponential by scaling and squaring with the degree-13 Pade
// approximant; relative accuracy near rounding level for the sizes used
// here (state spaces up to 512).
Matrix expm(const Matrix& m);

// Kronecker product (x is the slow index block).
Matrix kron(const Matrix& x, const Matrix& y);

}  // namespace l2cut
