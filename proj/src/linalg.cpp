#include "l2cut/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "l2cut/errors.hpp"
#include "l2cut/kernels.hpp"

namespace l2cut {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix matmul(const Matrix& x, const Matrix& y) {
  Matrix out(x.n);
  kernels::matmul(x.a.data(), y.a.data(), out.a.data(), x.n);
  return out;
}

double max_abs(const Matrix& m) {
  double v = 0.0;
  for (double e : m.a) v = std::max(v, std::fabs(e));
  return v;
}

double inf_norm(const Matrix& m) {
  double v = 0.0;
  for (std::size_t i = 0; i < m.n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < m.n; ++j) row += std::fabs(m(i, j));
    v = std::max(v, row);
  }
  return v;
}

LuFactors lu_factor(Matrix m) {
  const std::size_t n = m.n;
  LuFactors f{std::move(m), std::vector<std::size_t>(n)};
  Matrix& a = f.lu;
  const double scale = std::max(max_abs(a), 1e-300);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::fabs(a(i, k)) > std::fabs(a(p, k))) p = i;
    if (std::fabs(a(p, k)) <= 1e-14 * scale)
      throw ValidationError("singular matrix in LU factorization (pivot " +
                            std::to_string(k) + ")");
    f.piv[k] = p;
    if (p != k)
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
    const double inv = 1.0 / a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double l = a(i, k) * inv;
      a(i, k) = l;
      if (l != 0.0) kernels::axpy(-l, a.row(k) + k + 1, a.row(i) + k + 1,
                                  n - k - 1);
    }
  }
  return f;
}

void lu_solve_inplace(const LuFactors& f, double* b) {
  const Matrix& a = f.lu;
  const std::size_t n = a.n;
  for (std::size_t k = 0; k < n; ++k) std::swap(b[k], b[f.piv[k]]);
  for (std::size_t i = 1; i < n; ++i) {
    double s = b[i];
    for (std::size_t j = 0; j < i; ++j) s -= a(i, j) * b[j];
    b[i] = s;
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * b[j];
    b[i] = s / a(i, i);
  }
}

Matrix lu_solve(const LuFactors& f, const Matrix& rhs) {
  const std::size_t n = rhs.n;
  Matrix out = rhs;
  std::vector<double> col(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) col[i] = rhs(i, j);
    lu_solve_inplace(f, col.data());
    for (std::size_t i = 0; i < n; ++i) out(i, j) = col[i];
  }
  return out;
}

SymmetricEigen jacobi_eigen(Matrix s) {
  const std::size_t n = s.n;
  SymmetricEigen out;
  out.vectors = Matrix::identity(n);
  if (n == 0) return out;

  auto off_norm = [&]() {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) sum += s(i, j) * s(i, j);
    return std::sqrt(2.0 * sum);
  };
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) scale += s(i, j) * s(i, j);
  scale = std::sqrt(scale);
  const double tol = std::max(1e-14 * scale, 1e-300);

  bool converged = false;
  for (int sweep = 0; sweep < 60 && !converged; ++sweep) {
    if (off_norm() <= tol) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = s(p, q);
        if (std::fabs(apq) <= 1e-18 * std::max(scale, 1e-300)) continue;
        const double theta = (s(q, q) - s(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;

        // rows p and q of the (full, symmetric) matrix
        kernels::rotate_rows(s.row(p), s.row(q), n, c, sn);
        // mirror onto columns to keep symmetry
        for (std::size_t i = 0; i < n; ++i) {
          const double ip = s(i, p);
          const double iq = s(i, q);
          s(i, p) = c * ip - sn * iq;
          s(i, q) = sn * ip + c * iq;
        }
        s(p, q) = 0.0;
        s(q, p) = 0.0;
        // eigenvectors accumulate as rows, so the update stays contiguous
        kernels::rotate_rows(out.vectors.row(p), out.vectors.row(q), n, c,
                             sn);
      }
    }
  }
  if (!converged && off_norm() > tol)
    throw ConvergenceError("Jacobi eigensolver exceeded its sweep cap");

  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.values[i] = s(i, i);
  return out;
}

Matrix expm(const Matrix& m) {
  // Degree-13 Pade with scaling and squaring.
  static const double b[14] = {64764752532480000.0,
                               32382376266240000.0,
                               7771770303897600.0,
                               1187353796428800.0,
                               129060195264000.0,
                               10559470521600.0,
                               670442572800.0,
                               33522128640.0,
                               1323241920.0,
                               40840800.0,
                               960960.0,
                               16380.0,
                               182.0,
                               1.0};
  const std::size_t n = m.n;
  const double theta13 = 5.371920351148152;
  const double norm = inf_norm(m);
  int squarings = 0;
  Matrix a = m;
  if (norm > theta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / theta13)));
    const double f = std::ldexp(1.0, -squarings);
    for (double& e : a.a) e *= f;
  }

  const Matrix a2 = matmul(a, a);
  const Matrix a4 = matmul(a2, a2);
  const Matrix a6 = matmul(a2, a4);
  const Matrix id = Matrix::identity(n);

  auto lincomb = [&](double c6, const Matrix& m6, double c4, const Matrix& m4,
                     double c2, const Matrix& m2, double c0) {
    Matrix r(n);
    for (std::size_t i = 0; i < n * n; ++i)
      r.a[i] = c6 * m6.a[i] + c4 * m4.a[i] + c2 * m2.a[i] + c0 * id.a[i];
    return r;
  };

  Matrix u_inner = lincomb(b[13], a6, b[11], a4, b[9], a2, 0.0);
  Matrix u = matmul(a6, u_inner);
  for (std::size_t i = 0; i < n * n; ++i)
    u.a[i] += b[7] * a6.a[i] + b[5] * a4.a[i] + b[3] * a2.a[i] +
              b[1] * id.a[i];
  u = matmul(a, u);

  Matrix v_inner = lincomb(b[12], a6, b[10], a4, b[8], a2, 0.0);
  Matrix v = matmul(a6, v_inner);
  for (std::size_t i = 0; i < n * n; ++i)
    v.a[i] += b[6] * a6.a[i] + b[4] * a4.a[i] + b[2] * a2.a[i] +
              b[0] * id.a[i];

  Matrix p(n), q(n);
  for (std::size_t i = 0; i < n * n; ++i) {
    p.a[i] = v.a[i] + u.a[i];
    q.a[i] = v.a[i] - u.a[i];
  }
  Matrix r = lu_solve(lu_factor(std::move(q)), p);
  for (int i = 0; i < squarings; ++i) r = matmul(r, r);
  return r;
}

Matrix kron(const Matrix& x, const Matrix& y) {
  Matrix out(x.n * y.n);
  for (std::size_t i = 0; i < x.n; ++i)
    for (std::size_t j = 0; j < x.n; ++j) {
      const double f = x(i, j);
      if (f == 0.0) continue;
      for (std::size_t k = 0; k < y.n; ++k)
        for (std::size_t l = 0; l < y.n; ++l)
          out(i * y.n + k, j * y.n + l) = f * y(k, l);
    }
  return out;
}

}  // namespace l2cut
