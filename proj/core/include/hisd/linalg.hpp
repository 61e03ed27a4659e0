#pragma once

// Dense vector/matrix helpers sized for low-dimensional dynamics (N is
// typically 2 to 10). Row-major storage, no external dependencies.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hisd {

using Vec = std::vector<double>;

/// Thrown when an operand's dimension does not match what an operation or
/// model expects.
class DimensionMismatch : public std::invalid_argument {
 public:
  DimensionMismatch(const std::string& what_arg, std::size_t expected,
                    std::size_t got)
      : std::invalid_argument(what_arg + ": expected dimension " +
                              std::to_string(expected) + ", got " +
                              std::to_string(got)) {}
};

inline bool all_finite(const Vec& v) {
  return std::all_of(v.begin(), v.end(),
                     [](double x) { return std::isfinite(x); });
}

/// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline double dot(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw DimensionMismatch("dot", a.size(), b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

/// y += a * x.
inline void axpy(Vec& y, double a, const Vec& x) {
  if (y.size() != x.size()) throw DimensionMismatch("axpy", y.size(), x.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

inline Vec scaled(const Vec& x, double a) {
  Vec r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = a * x[i];
  return r;
}

inline Vec subtracted(const Vec& a, const Vec& b) {
  if (a.size() != b.size())
    throw DimensionMismatch("subtracted", a.size(), b.size());
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline double distance(const Vec& a, const Vec& b) {
  return norm(subtracted(a, b));
}

inline Vec matvec(const Matrix& m, const Vec& x) {
  if (m.cols() != x.size()) throw DimensionMismatch("matvec", m.cols(), x.size());
  Vec r(m.rows(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j) * x[j];
    r[i] = s;
  }
  return r;
}

/// m^T x without forming the transpose. For a symmetric matrix the summation
/// order matches matvec exactly, so the two results are bitwise equal.
inline Vec matvec_transposed(const Matrix& m, const Vec& x) {
  if (m.rows() != x.size())
    throw DimensionMismatch("matvec_transposed", m.rows(), x.size());
  Vec r(m.cols(), 0.0);
  for (std::size_t i = 0; i < m.cols(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) s += m(j, i) * x[j];
    r[i] = s;
  }
  return r;
}

inline Matrix negated(const Matrix& m) {
  Matrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = -m(i, j);
  return r;
}

inline bool is_symmetric_as_stored(const Matrix& m) {
  if (m.rows() != m.cols()) return false;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j)
      if (m(i, j) != m(j, i)) return false;
  return true;
}

inline double frobenius_norm(const Matrix& m) {
  double s = 0.0;
  for (double v : m.data()) s += v * v;
  return std::sqrt(s);
}

/// Eigenvalues of the symmetric 2x2 matrix [[a, b], [b, c]], ascending.
inline std::array<double, 2> sym2_eigenvalues(double a, double b, double c) {
  const double mean = 0.5 * (a + c);
  const double radius = std::hypot(0.5 * (a - c), b);
  return {mean - radius, mean + radius};
}

/// Eigenvalues of a symmetric matrix, ascending. Closed form for 2x2,
/// cyclic Jacobi sweeps otherwise.
inline Vec symmetric_eigenvalues(Matrix m) {
  if (m.rows() != m.cols())
    throw DimensionMismatch("symmetric_eigenvalues", m.rows(), m.cols());
  if (!is_symmetric_as_stored(m))
    throw std::invalid_argument(
        "symmetric_eigenvalues: matrix is not symmetric as stored");
  const std::size_t n = m.rows();
  if (n == 1) return {m(0, 0)};
  if (n == 2) {
    auto e = sym2_eigenvalues(m(0, 0), m(0, 1), m(1, 1));
    return {e[0], e[1]};
  }

  const double scale = frobenius_norm(m);
  const double stop = (scale > 0.0) ? 1e-15 * scale : 0.0;
  constexpr int kMaxSweeps = 64;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += m(p, q) * m(p, q);
    if (std::sqrt(2.0 * off) <= stop) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (m(p, q) == 0.0) continue;
        const double theta = (m(q, q) - m(p, p)) / (2.0 * m(p, q));
        const double t =
            (theta >= 0.0 ? 1.0 : -1.0) /
            (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t i = 0; i < n; ++i) {
          const double mip = m(i, p);
          const double miq = m(i, q);
          m(i, p) = c * mip - s * miq;
          m(i, q) = s * mip + c * miq;
        }
        for (std::size_t j = 0; j < n; ++j) {
          const double mpj = m(p, j);
          const double mqj = m(q, j);
          m(p, j) = c * mpj - s * mqj;
          m(q, j) = s * mpj + c * mqj;
        }
      }
    }
  }
  Vec eigs(n);
  for (std::size_t i = 0; i < n; ++i) eigs[i] = m(i, i);
  std::sort(eigs.begin(), eigs.end());
  return eigs;
}

/// Operator 2-norm bound: exact spectral norm for a symmetric 2x2 matrix,
/// Frobenius norm (an upper bound on the 2-norm) otherwise.
inline double spectral_norm_bound(const Matrix& m) {
  if (m.rows() == 2 && m.cols() == 2 && is_symmetric_as_stored(m)) {
    auto e = sym2_eigenvalues(m(0, 0), m(0, 1), m(1, 1));
    return std::max(std::abs(e[0]), std::abs(e[1]));
  }
  return frobenius_norm(m);
}

}  // namespace hisd
