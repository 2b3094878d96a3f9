#pragma once

// Dense complex linear algebra used by every other part of the library:
// matrices, unit vectors, a cyclic Jacobi eigensolver for Hermitian
// matrices, and nullspace extraction built on top of it.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "numrange/errors.hpp"

namespace numrange {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

inline constexpr double kPi = 3.14159265358979323846;

// Row-major dense matrix. Most of the library works with square matrices;
// rectangular ones appear as stacked operators fed to nullspace().
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}
  explicit ComplexMatrix(std::size_t n) : ComplexMatrix(n, n) {}
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
      throw DimensionMismatch("matrix entry count " + std::to_string(data_.size()) +
                              " does not match " + std::to_string(rows_) + "x" +
                              std::to_string(cols_));
    }
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix diagonal(std::span<const Complex> d) {
    ComplexMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  static ComplexMatrix diagonal(std::initializer_list<Complex> d) {
    return diagonal(std::span<const Complex>(d.begin(), d.size()));
  }

  static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    ComplexMatrix m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != c) throw DimensionMismatch("ragged row list");
      std::size_t j = 0;
      for (const auto& v : row) m(i, j++) = v;
      ++i;
    }
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  // Dimension of a square matrix.
  std::size_t dim() const noexcept { return rows_; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const Complex> entries() const noexcept { return data_; }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](const Complex& z) {
      return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
  }

  ComplexVector column(std::size_t j) const {
    ComplexVector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

// ---------------------------------------------------------------------------
// Vector arithmetic. inner(x, y) is linear in x and conjugate-linear in y,
// so quadratic_form(T, x) = inner(T x, x).

inline Complex inner(std::span<const Complex> x, std::span<const Complex> y) {
  if (x.size() != y.size()) throw DimensionMismatch("inner product of mismatched vectors");
  Complex s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * std::conj(y[i]);
  return s;
}

inline double norm(std::span<const Complex> x) {
  double s = 0.0;
  for (const auto& z : x) s += std::norm(z);
  return std::sqrt(s);
}

inline ComplexVector operator+(const ComplexVector& a, const ComplexVector& b) {
  if (a.size() != b.size()) throw DimensionMismatch("vector sum");
  ComplexVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline ComplexVector operator-(const ComplexVector& a, const ComplexVector& b) {
  if (a.size() != b.size()) throw DimensionMismatch("vector difference");
  ComplexVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline ComplexVector operator*(Complex s, const ComplexVector& a) {
  ComplexVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
  return r;
}

// Unit-norm vector. The only ways to build one normalize their input, so
// | ||coords|| - 1 | stays at rounding level.
class UnitVector {
 public:
  static UnitVector normalized(ComplexVector v) {
    const double nv = norm(v);
    if (!(nv > 0.0) || !std::isfinite(nv)) throw NumericalFailure("cannot normalize a zero or non-finite vector");
    for (auto& z : v) z /= nv;
    return UnitVector(std::move(v));
  }

  static UnitVector basis(std::size_t n, std::size_t k) {
    if (k >= n) throw DimensionMismatch("basis index out of range");
    ComplexVector v(n);
    v[k] = 1.0;
    return UnitVector(std::move(v));
  }

  std::size_t dimension() const noexcept { return coords_.size(); }
  const ComplexVector& coords() const noexcept { return coords_; }
  const Complex& operator[](std::size_t i) const { return coords_[i]; }

  friend bool operator==(const UnitVector&, const UnitVector&) = default;

 private:
  explicit UnitVector(ComplexVector v) : coords_(std::move(v)) {}
  ComplexVector coords_;
};

// ---------------------------------------------------------------------------
// Matrix arithmetic.

inline ComplexMatrix adjoint(const ComplexMatrix& a) {
  ComplexMatrix r(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(j, i) = std::conj(a(i, j));
  return r;
}

inline ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("matrix sum");
  ComplexMatrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) + b(i, j);
  return r;
}

inline ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("matrix difference");
  ComplexMatrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) - b(i, j);
  return r;
}

inline ComplexMatrix operator*(Complex s, const ComplexMatrix& a) {
  ComplexMatrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = s * a(i, j);
  return r;
}

inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("matrix product");
  ComplexMatrix r(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) r(i, j) += aik * b(k, j);
    }
  return r;
}

inline ComplexVector operator*(const ComplexMatrix& a, std::span<const Complex> x) {
  if (a.cols() != x.size()) throw DimensionMismatch("matrix-vector product");
  ComplexVector r(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Complex s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    r[i] = s;
  }
  return r;
}

inline ComplexVector operator*(const ComplexMatrix& a, const ComplexVector& x) {
  return a * std::span<const Complex>(x);
}

inline ComplexVector operator*(const ComplexMatrix& a, const UnitVector& x) {
  return a * std::span<const Complex>(x.coords());
}

// <T x, x>
inline Complex quadratic_form(const ComplexMatrix& t, std::span<const Complex> x) {
  return inner(t * x, x);
}

inline Complex quadratic_form(const ComplexMatrix& t, const UnitVector& x) {
  return quadratic_form(t, std::span<const Complex>(x.coords()));
}

// A - s I
inline ComplexMatrix shifted(const ComplexMatrix& a, Complex s) {
  ComplexMatrix r = a;
  for (std::size_t i = 0; i < std::min(a.rows(), a.cols()); ++i) r(i, i) -= s;
  return r;
}

inline ComplexMatrix hermitian_part(const ComplexMatrix& a) {
  if (!a.is_square()) throw DimensionMismatch("hermitian part of a non-square matrix");
  ComplexMatrix r(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    r(i, i) = a(i, i).real();
    for (std::size_t j = i + 1; j < a.cols(); ++j) {
      const Complex h = 0.5 * (a(i, j) + std::conj(a(j, i)));
      r(i, j) = h;
      r(j, i) = std::conj(h);
    }
  }
  return r;
}

inline ComplexMatrix direct_sum(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix r(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) r(a.rows() + i, a.cols() + j) = b(i, j);
  return r;
}

// Stack matrices with equal column counts on top of each other.
inline ComplexMatrix vstack(std::span<const ComplexMatrix> blocks) {
  if (blocks.empty()) return {};
  const std::size_t c = blocks.front().cols();
  std::size_t r = 0;
  for (const auto& b : blocks) {
    if (b.cols() != c) throw DimensionMismatch("vstack of blocks with different widths");
    r += b.rows();
  }
  ComplexMatrix out(r, c);
  std::size_t off = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < c; ++j) out(off + i, j) = b(i, j);
    off += b.rows();
  }
  return out;
}

// Matrix whose columns are the given vectors.
inline ComplexMatrix from_columns(std::span<const UnitVector> cols, std::size_t n) {
  ComplexMatrix m(n, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].dimension() != n) throw DimensionMismatch("column of wrong length");
    for (std::size_t i = 0; i < n; ++i) m(i, j) = cols[j][i];
  }
  return m;
}

inline double frobenius_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (const auto& z : a.entries()) s += std::norm(z);
  return std::sqrt(s);
}

inline bool is_hermitian(const ComplexMatrix& a, double rel_tol = 1e-12) {
  if (!a.is_square()) return false;
  double diff = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) diff += std::norm(a(i, j) - std::conj(a(j, i)));
  return std::sqrt(diff) <= rel_tol * frobenius_norm(a);
}

// ---------------------------------------------------------------------------
// Hermitian eigensolver.

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // column j belongs to eigenvalues[j]

  ComplexVector vector(std::size_t j) const { return eigenvectors.column(j); }
  UnitVector unit_vector(std::size_t j) const { return UnitVector::normalized(eigenvectors.column(j)); }
};

struct JacobiOptions {
  double off_diagonal_tol = 1e-14;  // relative to ||A||_F
  int max_sweeps = 30;
};

namespace detail {

inline double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

// Zero a(p, q) with the unitary U acting on coordinates p, q:
//   U = [[c, s e^{i phi}], [-s e^{-i phi}, c]],  a_pq = |a_pq| e^{i phi}.
inline void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
  const Complex apq = a(p, q);
  const double mag = std::abs(apq);
  if (mag == 0.0) return;
  const Complex phase = apq / mag;
  const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::hypot(theta, 1.0));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;
  const Complex s_pq = s * phase;             // U(p, q)
  const Complex s_qp = -s * std::conj(phase);  // U(q, p)
  const std::size_t n = a.rows();

  for (std::size_t k = 0; k < n; ++k) {  // A <- A U
    const Complex akp = a(k, p);
    const Complex akq = a(k, q);
    a(k, p) = c * akp + s_qp * akq;
    a(k, q) = s_pq * akp + c * akq;
  }
  for (std::size_t k = 0; k < n; ++k) {  // A <- U^* A
    const Complex apk = a(p, k);
    const Complex aqk = a(q, k);
    a(p, k) = c * apk + std::conj(s_qp) * aqk;
    a(q, k) = std::conj(s_pq) * apk + c * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();
  for (std::size_t k = 0; k < n; ++k) {  // V <- V U
    const Complex vkp = v(k, p);
    const Complex vkq = v(k, q);
    v(k, p) = c * vkp + s_qp * vkq;
    v(k, q) = s_pq * vkp + c * vkq;
  }
}

}  // namespace detail

// Cyclic complex Jacobi. Throws NonHermitianInput when
// ||A - A^*||_F > 1e-12 ||A||_F and NonConvergence when the sweep budget runs
// out before the off-diagonal mass drops below options.off_diagonal_tol ||A||_F.
inline EigenDecomposition hermitian_eig(const ComplexMatrix& input, const JacobiOptions& options = {}) {
  if (!input.is_square() || input.rows() == 0) throw DimensionMismatch("hermitian_eig needs a non-empty square matrix");
  if (!input.all_finite()) throw NumericalFailure("hermitian_eig: non-finite entries");
  if (!is_hermitian(input)) throw NonHermitianInput("matrix is not Hermitian within 1e-12 relative tolerance");

  const std::size_t n = input.rows();
  ComplexMatrix a = hermitian_part(input);
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double target = options.off_diagonal_tol * frobenius_norm(a);

  bool converged = false;
  for (int sweep = 0;; ++sweep) {
    if (detail::off_diagonal_norm(a) <= target) {
      converged = true;
      break;
    }
    if (sweep == options.max_sweeps) break;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) detail::jacobi_rotate(a, v, p, q);
  }
  if (!converged) throw NonConvergence("Jacobi sweep budget exhausted");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors = ComplexMatrix(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
  }
  return out;
}

// Spectral norm, sqrt(lambda_max(A^* A)).
inline double operator_norm(const ComplexMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  const auto eig = hermitian_eig(hermitian_part(adjoint(a) * a));
  return std::sqrt(std::max(eig.eigenvalues.back(), 0.0));
}

// Orthonormal basis of the approximate kernel of S: eigenvectors of S^* S
// taken in ascending order while ||S v|| <= tol ||S||. The residual is
// recomputed from S itself rather than read off the (squared) eigenvalue.
inline std::vector<UnitVector> nullspace(const ComplexMatrix& s, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("nullspace tolerance must be positive");
  if (s.cols() == 0) return {};
  const auto eig = hermitian_eig(hermitian_part(adjoint(s) * s));
  const double s_norm = std::sqrt(std::max(eig.eigenvalues.back(), 0.0));
  std::vector<UnitVector> basis;
  for (std::size_t j = 0; j < s.cols(); ++j) {
    UnitVector v = eig.unit_vector(j);
    if (norm(s * v) > tol * s_norm) break;
    basis.push_back(std::move(v));
  }
  return basis;
}

// ---------------------------------------------------------------------------
// Deterministic random objects. All of them draw standard complex Gaussians
// from a std::mt19937_64 seeded with `seed`.

namespace detail {

inline ComplexVector gaussian_vector(std::size_t n, std::mt19937_64& gen) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexVector v(n);
  for (auto& z : v) {
    const double re = normal(gen);
    const double im = normal(gen);
    z = {re, im};
  }
  return v;
}

}  // namespace detail

inline UnitVector random_unit_vector(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw DimensionMismatch("random_unit_vector needs n >= 1");
  std::mt19937_64 gen(seed);
  for (;;) {
    ComplexVector v = detail::gaussian_vector(n, gen);
    if (norm(v) > 0.0) return UnitVector::normalized(std::move(v));
  }
}

// Entries are i.i.d. standard complex Gaussians scaled by 1/sqrt(2n).
inline ComplexMatrix random_complex_matrix(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  ComplexVector v = detail::gaussian_vector(n * n, gen);
  const double scale = 1.0 / std::sqrt(2.0 * static_cast<double>(n));
  for (auto& z : v) z *= scale;
  return ComplexMatrix(n, n, std::move(v));
}

// Haar-like random unitary: Gram-Schmidt (applied twice) on Gaussian columns.
inline ComplexMatrix random_unitary(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<ComplexVector> cols;
  while (cols.size() < n) {
    ComplexVector v = detail::gaussian_vector(n, gen);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : cols) {
        const Complex c = inner(v, q);
        for (std::size_t i = 0; i < n; ++i) v[i] -= c * q[i];
      }
    const double nv = norm(v);
    if (nv < 1e-8) continue;
    for (auto& z : v) z /= nv;
    cols.push_back(std::move(v));
  }
  ComplexMatrix u(n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) u(i, j) = cols[j][i];
  return u;
}

}  // namespace numrange
