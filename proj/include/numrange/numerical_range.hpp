#pragma once

// Numerical range W(T) = { <Tx, x> : ||x|| = 1 } of a square matrix via its
// support function: for a direction theta the largest eigenvalue of
// (e^{-i theta} T + e^{i theta} T^*) / 2 is max Re(e^{-i theta} z) over W(T),
// and the top eigenvector x attains it at z = <Tx, x>.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <thread>
#include <vector>

#include "numrange/complex_linalg.hpp"
#include "numrange/errors.hpp"

namespace numrange {

struct BoundaryPoint {
  double theta = 0.0;    // outward normal direction, radians
  double support = 0.0;  // top eigenvalue of the rotated Hermitian part
  Complex point;         // <T w, w> for the witness w
  UnitVector witness;
  int multiplicity = 1;  // top eigenvalues within 1e-9 ||T||
};

struct BoundaryCurve {
  std::uint64_t operator_hash = 0;
  std::vector<BoundaryPoint> points;  // theta_j = 2 pi j / angle_count
  std::size_t angle_count = 0;
};

struct FlatPortion {
  double theta = 0.0;  // normal direction of the segment
  Complex start;       // counterclockwise order along the boundary
  Complex end;
};

inline constexpr double kMultiplicityTol = 1e-9;
inline constexpr double kFlatTol = 1e-8;

// FNV-1a over the shape and the bit patterns of the entries.
inline std::uint64_t matrix_hash(const ComplexMatrix& a) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t word) {
    for (int b = 0; b < 8; ++b) {
      h ^= (word >> (8 * b)) & 0xffU;
      h *= 1099511628211ULL;
    }
  };
  mix(a.rows());
  mix(a.cols());
  for (const auto& z : a.entries()) {
    mix(std::bit_cast<std::uint64_t>(z.real()));
    mix(std::bit_cast<std::uint64_t>(z.imag()));
  }
  return h;
}

// Evaluates support data of one operator at arbitrary angles. Keeps T^* and
// ||T|| around so repeated probes (sweeps, bisections) do not recompute them.
class SupportFunction {
 public:
  explicit SupportFunction(ComplexMatrix t) : t_(std::move(t)) {
    if (!t_.is_square() || t_.rows() == 0) throw DimensionMismatch("numerical range needs a non-empty square matrix");
    if (!t_.all_finite()) throw NumericalFailure("operator has non-finite entries");
    adj_ = adjoint(t_);
    norm_ = operator_norm(t_);
  }

  const ComplexMatrix& op() const noexcept { return t_; }
  double op_norm() const noexcept { return norm_; }
  // ||T|| floored at 1, the scale used for absolute tolerances.
  double scale() const noexcept { return std::max(1.0, norm_); }

  // (e^{-i theta} T + e^{i theta} T^*) / 2 with theta = base + offset. The
  // split keeps full relative precision in tiny offsets.
  ComplexMatrix rotated_hermitian(double base, double offset = 0.0) const {
    const Complex dir = std::polar(1.0, base) * std::polar(1.0, offset);
    const std::size_t n = t_.rows();
    ComplexMatrix h(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) h(i, j) = 0.5 * (std::conj(dir) * t_(i, j) + dir * adj_(i, j));
    return hermitian_part(h);
  }

  EigenDecomposition decomposition(double base, double offset = 0.0) const {
    return hermitian_eig(rotated_hermitian(base, offset));
  }

  BoundaryPoint at(double base, double offset = 0.0) const {
    const auto eig = decomposition(base, offset);
    const std::size_t n = eig.eigenvalues.size();
    const double top = eig.eigenvalues.back();
    int mult = 0;
    for (std::size_t k = n; k-- > 0;) {
      if (top - eig.eigenvalues[k] <= kMultiplicityTol * norm_) ++mult;
      else break;
    }
    UnitVector w = eig.unit_vector(n - 1);
    const Complex z = quadratic_form(t_, w);
    return BoundaryPoint{base + offset, top, z, std::move(w), std::max(mult, 1)};
  }

  Complex point(double base, double offset = 0.0) const { return at(base, offset).point; }

 private:
  ComplexMatrix t_;
  ComplexMatrix adj_;
  double norm_ = 0.0;
};

inline BoundaryPoint support_point(const ComplexMatrix& t, double theta) {
  return SupportFunction(t).at(theta);
}

// Smallest turn cross(p_j - p_{j-1}, p_{j+1} - p_j) around the closed
// polygon of support points; negative values mean a non-convex turn.
inline double convexity_defect(const BoundaryCurve& curve) {
  const auto& pts = curve.points;
  const std::size_t m = pts.size();
  double worst = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const Complex a = pts[(j + m - 1) % m].point;
    const Complex b = pts[j].point;
    const Complex c = pts[(j + 1) % m].point;
    const Complex e1 = b - a;
    const Complex e2 = c - b;
    worst = std::min(worst, e1.real() * e2.imag() - e1.imag() * e2.real());
  }
  return worst;
}

inline BoundaryCurve boundary_curve(const SupportFunction& sf, std::size_t m, unsigned threads = 1) {
  if (m < 8) throw AngleCountTooSmall("boundary_curve needs at least 8 angles, got " + std::to_string(m));
  std::vector<std::optional<BoundaryPoint>> slots(m);
  auto work = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t j = lo; j < hi; ++j)
      slots[j] = sf.at(2.0 * kPi * static_cast<double>(j) / static_cast<double>(m));
  };
  threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(m)));
  if (threads == 1) {
    work(0, m);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (m + threads - 1) / threads;
    for (std::size_t lo = 0; lo < m; lo += chunk) pool.emplace_back(work, lo, std::min(m, lo + chunk));
  }

  BoundaryCurve curve;
  curve.operator_hash = matrix_hash(sf.op());
  curve.angle_count = m;
  curve.points.reserve(m);
  for (auto& s : slots) curve.points.push_back(std::move(*s));

  const double s = sf.scale();
  if (convexity_defect(curve) < -1e-9 * s * s) throw NumericalFailure("support polygon is not convex");
  return curve;
}

inline BoundaryCurve boundary_curve(const ComplexMatrix& t, std::size_t m, unsigned threads = 1) {
  return boundary_curve(SupportFunction(t), m, threads);
}

// Membership in the polygon cut out by the m supporting half-planes; this
// contains closure(W(T)) and converges to it as m grows.
inline bool contains(const BoundaryCurve& curve, Complex z, double tol) {
  return std::all_of(curve.points.begin(), curve.points.end(), [&](const BoundaryPoint& bp) {
    return (std::polar(1.0, -bp.theta) * z).real() <= bp.support + tol;
  });
}

inline bool contains(const ComplexMatrix& t, Complex z, std::size_t m, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("contains: tolerance must be positive");
  return contains(boundary_curve(t, m), z, tol);
}

inline double numerical_radius(const BoundaryCurve& curve) {
  double r = 0.0;
  for (const auto& bp : curve.points) r = std::max(r, std::abs(bp.point));
  return r;
}

inline double numerical_radius(const ComplexMatrix& t, std::size_t m) {
  return numerical_radius(boundary_curve(t, m));
}

// Segment of the boundary with outward normal theta, if the top eigenvalue
// there is multiple (within tol ||T||). The segment comes from the numerical
// range of T compressed to the top eigenspace, which lies on the supporting
// line; its extent along the line is the spectrum of the compressed
// imaginary part.
inline std::optional<FlatPortion> flat_portion_at(const SupportFunction& sf, double theta, double tol = kFlatTol) {
  const auto eig = sf.decomposition(theta);
  const std::size_t n = eig.eigenvalues.size();
  const double top = eig.eigenvalues.back();
  std::size_t k = 0;
  while (k < n && top - eig.eigenvalues[n - 1 - k] <= tol * sf.op_norm()) ++k;
  if (k < 2) return std::nullopt;

  ComplexMatrix q(n, k);
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t i = 0; i < n; ++i) q(i, c) = eig.eigenvectors(i, n - k + c);
  const ComplexMatrix b = adjoint(q) * sf.op() * q;
  const Complex dir = std::polar(1.0, theta);
  const ComplexMatrix imag_part = Complex(0.0, -0.5) * (std::conj(dir) * b - dir * adjoint(b));
  const auto sub = hermitian_eig(hermitian_part(imag_part));

  auto endpoint = [&](std::size_t col) {
    const ComplexVector x = q * sub.vector(col);
    return quadratic_form(sf.op(), UnitVector::normalized(x));
  };
  FlatPortion fp{theta, endpoint(0), endpoint(k - 1)};
  if (std::abs(fp.end - fp.start) <= tol * sf.scale()) return std::nullopt;
  return fp;
}

inline std::vector<FlatPortion> flat_portions(const ComplexMatrix& t, std::size_t m, double tol = kFlatTol) {
  if (m < 8) throw AngleCountTooSmall("flat_portions needs at least 8 angles");
  const SupportFunction sf(t);
  std::vector<FlatPortion> out;
  for (std::size_t j = 0; j < m; ++j) {
    const double theta = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(m);
    if (auto fp = flat_portion_at(sf, theta, tol)) out.push_back(*fp);
  }
  return out;
}

}  // namespace numrange
