#pragma once

// Reducing eigenvalues: lam with a unit vector u such that T u = lam u and
// T^* u = conj(lam) u, i.e. u spans a subspace reducing T. Certificates,
// deflation along such subspaces, corner detection, and a step-by-step
// trace of the argument that forces ||T u_n|| and ||T^* u_n|| to zero at
// boundary points of infinite curvature.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "numrange/boundary_geometry.hpp"
#include "numrange/complex_linalg.hpp"
#include "numrange/errors.hpp"
#include "numrange/numerical_range.hpp"

namespace numrange {

struct ReducingCertificate {
  Complex lam;
  std::vector<UnitVector> basis;  // orthonormal basis of null(T - lam) n null(T^* - conj lam)
  std::size_t dimension = 0;
  double max_residual = 0.0;  // max over the basis of reducing_residual
};

// ||(T - lam) u|| + ||(T^* - conj(lam)) u||
inline double reducing_residual(const ComplexMatrix& t, Complex lam, const UnitVector& u) {
  if (!t.is_square() || t.rows() != u.dimension()) throw DimensionMismatch("reducing_residual: dimensions differ");
  const ComplexVector tu = t * u;
  const ComplexVector tsu = adjoint(t) * u;
  const ComplexVector& x = u.coords();
  double a = 0.0;
  double b = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    a += std::norm(tu[i] - lam * x[i]);
    b += std::norm(tsu[i] - std::conj(lam) * x[i]);
  }
  return std::sqrt(a) + std::sqrt(b);
}

// Stack [T - lam I ; T^* - conj(lam) I], whose kernel is the reducing
// eigenspace at lam.
inline ComplexMatrix reducing_stack(const ComplexMatrix& t, Complex lam) {
  const std::vector<ComplexMatrix> blocks = {shifted(t, lam), shifted(adjoint(t), std::conj(lam))};
  return vstack(blocks);
}

inline ReducingCertificate reducing_eigenspace(const ComplexMatrix& t, Complex lam, double tol) {
  if (!t.is_square() || t.rows() == 0) throw DimensionMismatch("reducing_eigenspace needs a square matrix");
  ReducingCertificate c;
  c.lam = lam;
  c.basis = nullspace(reducing_stack(t, lam), tol);
  c.dimension = c.basis.size();
  for (const auto& u : c.basis) c.max_residual = std::max(c.max_residual, reducing_residual(t, lam, u));
  return c;
}

namespace detail {

// Orthonormal basis of the complement of span(basis), as columns.
inline ComplexMatrix complement_basis(const std::vector<UnitVector>& basis, std::size_t n) {
  const ComplexMatrix u = from_columns(basis, n);
  const auto comp = nullspace(adjoint(u), 1e-8);
  if (comp.size() + basis.size() != n) throw NumericalFailure("certificate basis is not orthonormal");
  return from_columns(comp, n);
}

}  // namespace detail

// Compression of T to the orthogonal complement of the certified subspace.
// Because that subspace reduces T (up to the certificate residual), T is
// unitarily A + lam I_dim with A the returned matrix.
inline ComplexMatrix deflate(const ComplexMatrix& t, const ReducingCertificate& cert) {
  const std::size_t n = t.rows();
  if (cert.dimension == 0 || cert.basis.size() != cert.dimension) throw NotReducing("certificate is empty");
  if (cert.dimension >= n) throw DimensionMismatch("certificate spans the whole space; nothing left to deflate to");
  double worst = 0.0;
  for (const auto& u : cert.basis) worst = std::max(worst, reducing_residual(t, cert.lam, u));
  if (worst > 1e-6 * operator_norm(t)) throw NotReducing("certificate residual exceeds 1e-6 ||T||");
  const ComplexMatrix q = detail::complement_basis(cert.basis, n);
  return adjoint(q) * t * q;
}

// ||T - W (A + lam I) W^*|| with W = [Q, U] the adapted basis.
inline double deflation_defect(const ComplexMatrix& t, const ReducingCertificate& cert) {
  const std::size_t n = t.rows();
  const ComplexMatrix a = deflate(t, cert);
  const ComplexMatrix q = detail::complement_basis(cert.basis, n);
  const ComplexMatrix u = from_columns(cert.basis, n);
  std::vector<Complex> lam_diag(cert.dimension, cert.lam);
  const ComplexMatrix model = q * a * adjoint(q) + u * ComplexMatrix::diagonal(lam_diag) * adjoint(u);
  return operator_norm(t - model);
}

// ---------------------------------------------------------------------------
// Proof trace.

enum class TraceMode { TwoSided, Righthand, Lefthand };

struct ProofStep {
  std::size_t n = 0;  // 1-based
  Complex delta;      // <T u, u>
  Complex beta;       // T u = delta u + beta v
  Complex gamma;      // T^* u = conj(delta) u + conj(gamma) w
  double r = 0.0;
  Complex tau;
  Complex eta;
  Complex alpha;      // r tau
  int x_sign = 1;     // x = u + x_sign alpha z
  Complex rayleigh_x;  // <T x, x>
  std::optional<double> mu;  // |Im <Tx,x>| / Re^2 <Tx,x> when Re != 0
  Complex vw;                // <v, w>
  double orthogonality_defect = 0.0;  // | |beta|^2 - (||Tu||^2 - |delta|^2) |
};

struct ProofTrace {
  TraceMode mode = TraceMode::TwoSided;
  std::vector<ProofStep> steps;
  bool verdict = false;       // final |beta|+|gamma| <= 1e-3 (initial + 1e-30)
  double decay_ratio = 0.0;   // final / initial |beta|+|gamma|
  static constexpr double kDecayFactor = 1e-3;
};

namespace detail {

// Unit vector orthogonal to u, used when T u is an exact multiple of u.
inline ComplexVector orthogonal_unit(const UnitVector& u) {
  const std::size_t n = u.dimension();
  for (std::size_t k = 0; k < n; ++k) {
    ComplexVector e(n);
    e[k] = 1.0;
    const Complex c = inner(e, u.coords());
    for (std::size_t i = 0; i < n; ++i) e[i] -= c * u[i];
    const double ne = norm(e);
    if (ne > 0.5) {
      for (auto& z : e) z /= ne;
      return e;
    }
  }
  return ComplexVector(n);  // n == 1: no orthogonal direction exists
}

inline bool on_segment(Complex z, Complex end, double tol) {
  const double len = std::abs(end);
  const double along = dot(z, end) / len;
  const double across = std::abs(cross(end, z)) / len;
  return across <= tol && along >= -tol && along <= len + tol;
}

}  // namespace detail

// T must already be in standard position (W(T) in the closed upper half
// plane, the boundary point under study at 0). Each u_n is split as
//   T u = delta u + beta v,   T^* u = conj(delta) u + conj(gamma) w
// with v, w unit vectors orthogonal to u (w negated if Re <v, w> < 0), then
// alpha = r tau, z = v + w and x = u +- alpha z are formed as in the
// argument. One-sided modes need alpha0 in W(T) with Re alpha0 of the right
// sign and every <T u_n, u_n> on the segment [0, alpha0].
inline ProofTrace proof_trace(const ComplexMatrix& t, const std::vector<UnitVector>& sequence, TraceMode mode,
                              std::optional<Complex> alpha0 = std::nullopt) {
  if (!t.is_square() || t.rows() == 0) throw DimensionMismatch("proof_trace needs a square matrix");
  if (sequence.empty()) throw std::invalid_argument("proof_trace needs a non-empty sequence");
  const std::size_t dim = t.rows();
  const ComplexMatrix ts = adjoint(t);
  const double t_norm = operator_norm(t);
  double big_m = 0.0;
  if (mode != TraceMode::TwoSided) {
    if (!alpha0) throw SegmentViolation("one-sided trace needs alpha0");
    const double re = alpha0->real();
    if ((mode == TraceMode::Righthand && !(re > 0.0)) || (mode == TraceMode::Lefthand && !(re < 0.0)))
      throw SegmentViolation("Re alpha0 has the wrong sign for this side");
    big_m = 5.0 * std::abs(*alpha0) * t_norm / std::abs(re);
  }

  ProofTrace trace;
  trace.mode = mode;
  for (std::size_t k = 0; k < sequence.size(); ++k) {
    const UnitVector& u = sequence[k];
    if (u.dimension() != dim) throw DimensionMismatch("sequence vector has the wrong dimension");
    ProofStep s;
    s.n = k + 1;
    const ComplexVector tu = t * u;
    const ComplexVector tsu = ts * u;
    s.delta = inner(tu, u.coords());
    if (s.delta.imag() < -1e-9) throw NotStandardPosition("<T u_n, u_n> has negative imaginary part");
    if (mode != TraceMode::TwoSided) {
      if (s.delta == Complex{}) throw SegmentViolation("<T u_n, u_n> must be non-zero in one-sided mode");
      if (!detail::on_segment(s.delta, *alpha0, 1e-8)) throw SegmentViolation("<T u_n, u_n> is off the segment [0, alpha0]");
    }

    ComplexVector bv = tu - s.delta * u.coords();
    ComplexVector gw = tsu - std::conj(s.delta) * u.coords();
    const double nb = norm(bv);
    const double ng = norm(gw);
    ComplexVector v = nb > 0.0 ? (Complex(1.0 / nb) * bv) : detail::orthogonal_unit(u);
    ComplexVector w = ng > 0.0 ? (Complex(1.0 / ng) * gw) : detail::orthogonal_unit(u);
    s.beta = nb;
    s.gamma = ng;  // conj(gamma) w = gw with w = gw / ||gw||
    if (inner(v, w).real() < 0.0) {
      w = Complex(-1.0) * w;
      s.gamma = -s.gamma;
    }
    s.vw = inner(v, w);
    s.orthogonality_defect = std::abs(nb * nb - (std::norm(norm(tu)) - std::norm(s.delta)));

    if (mode == TraceMode::TwoSided) s.r = s.delta != Complex{} ? std::sqrt(std::abs(s.delta)) : 1.0 / static_cast<double>(s.n);
    else s.r = std::sqrt(std::abs(s.delta) / big_m);
    s.tau = (s.beta == Complex{} || s.gamma == Complex{}) ? Complex(1.0)
                                                          : std::polar(1.0, 0.5 * (std::arg(s.beta) - std::arg(s.gamma)));
    s.alpha = s.r * s.tau;
    const double mag = std::abs(s.beta) + std::abs(s.gamma);
    const Complex combo = std::conj(s.alpha) * s.beta + s.alpha * s.gamma;
    s.eta = s.r * mag > 0.0 ? combo / (s.r * mag) : Complex(1.0);

    const ComplexVector z = v + w;
    if (mode == TraceMode::TwoSided) {
      const Complex cross_term = std::conj(s.alpha) * inner(tu, z) + s.alpha * inner(t * z, u.coords());
      s.x_sign = cross_term.imag() >= 0.0 ? 1 : -1;
    } else {
      s.x_sign = (s.eta * (1.0 + s.vw)).real() >= 0.0 ? 1 : -1;
    }
    const ComplexVector x = u.coords() + (static_cast<double>(s.x_sign) * s.alpha) * z;
    s.rayleigh_x = quadratic_form(t, x);
    if (s.rayleigh_x.real() != 0.0) s.mu = std::abs(s.rayleigh_x.imag()) / (s.rayleigh_x.real() * s.rayleigh_x.real());
    trace.steps.push_back(s);
  }
  const auto size = [](const ProofStep& s) { return std::abs(s.beta) + std::abs(s.gamma); };
  const double first = size(trace.steps.front());
  const double last = size(trace.steps.back());
  trace.decay_ratio = first > 0.0 ? last / first : (last > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  trace.verdict = last <= ProofTrace::kDecayFactor * (first + 1e-30);
  return trace;
}

// u_k = cos(phi_k) target + sin(phi_k) w_hat with phi_k shrinking
// geometrically from the angle between start and target to final_ratio
// times that angle. The phase of target is aligned with start first.
inline std::vector<UnitVector> spherical_sequence(const UnitVector& start, const UnitVector& target, std::size_t steps,
                                                  double final_ratio = 1e-4) {
  if (start.dimension() != target.dimension()) throw DimensionMismatch("spherical_sequence: dimensions differ");
  if (steps == 0) return {};
  const Complex c = inner(start.coords(), target.coords());
  const Complex phase = std::abs(c) > 0.0 ? c / std::abs(c) : Complex(1.0);
  const ComplexVector tgt = phase * target.coords();
  ComplexVector perp = start.coords() - std::abs(c) * tgt;
  const double np = norm(perp);
  std::vector<UnitVector> out;
  if (np <= 1e-15) {
    for (std::size_t k = 0; k < steps; ++k) out.push_back(UnitVector::normalized(tgt));
    return out;
  }
  for (auto& z : perp) z /= np;
  const double phi0 = std::atan2(np, std::abs(c));
  for (std::size_t k = 0; k < steps; ++k) {
    const double frac = steps == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(steps - 1);
    const double phi = phi0 * std::pow(final_ratio, frac);
    ComplexVector x(tgt.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::cos(phi) * tgt[i] + std::sin(phi) * perp[i];
    out.push_back(UnitVector::normalized(std::move(x)));
  }
  return out;
}

// e^{i rho} (T - lam I): the operator whose range is W(T) in the standard
// position of a classification (rho from StandardPosition::rotation).
inline ComplexMatrix to_standard_position(const ComplexMatrix& t, Complex lam, double rho) {
  return std::polar(1.0, rho) * shifted(t, lam);
}

// ---------------------------------------------------------------------------
// Corners and their reducing certificates.

struct CornerReport {
  Complex lam;
  BoundaryClassification classification;
  ReducingCertificate certificate;
};

namespace detail {

// Corners show up on the sweep as runs of at least two consecutive angles
// sharing a support point, so corners narrower than 2 pi / m can be missed.
inline std::vector<Complex> corner_candidates(const BoundaryCurve& curve, double same) {
  const auto& pts = curve.points;
  const std::size_t m = pts.size();
  std::vector<bool> link(m);  // point j coincides with point j+1
  for (std::size_t j = 0; j < m; ++j) link[j] = std::abs(pts[j].point - pts[(j + 1) % m].point) <= same;
  std::vector<Complex> out;
  if (std::all_of(link.begin(), link.end(), [](bool b) { return b; })) {
    out.push_back(pts[0].point);
    return out;
  }
  // Start scanning right after a break so no run wraps past the origin.
  std::size_t start = 0;
  while (link[start]) ++start;
  start = (start + 1) % m;
  std::size_t k = 0;
  while (k < m) {
    const std::size_t j = (start + k) % m;
    std::size_t len = 0;
    while (len < m && link[(j + len) % m]) ++len;
    if (len >= 1) out.push_back(pts[(j + (len + 1) / 2) % m].point);
    k += len + 1;
  }
  return out;
}

}  // namespace detail

inline std::optional<CornerReport> certify_corner(const SupportFunction& sf, Complex lam, Thresholds thr,
                                                  std::size_t m, double tol) {
  thr.profile_at_corners = false;
  auto cls = classify_point(sf, lam, thr, m);
  if (!cls.corner_flag) return std::nullopt;
  return CornerReport{cls.lam, cls, reducing_eigenspace(sf.op(), cls.lam, tol)};
}

inline std::vector<CornerReport> corner_reducing_check(const ComplexMatrix& t, std::size_t m = 720,
                                                       const Thresholds& thr = {}, double tol = 1e-8) {
  if (m < 64) throw AngleCountTooSmall("corner_reducing_check needs at least 64 angles");
  const SupportFunction sf(t);
  const auto curve = boundary_curve(sf, m);
  std::vector<CornerReport> out;
  for (const auto& lam : detail::corner_candidates(curve, thr.cone_tol * sf.scale()))
    if (auto r = certify_corner(sf, lam, thr, m, tol)) out.push_back(std::move(*r));
  return out;
}

}  // namespace numrange
