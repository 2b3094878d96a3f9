#pragma once

// Named test operators, a small text grammar for them, the half-disk
// approximation experiment and finite-section families.
//
// Grammar (whitespace-free):
//   spec   := term ('/' term)*                  direct sum of the terms
//   term   := '(' spec ')' | kind ':' args
//   jordan:n  shift:n  circle:n  halfdisk:m  random:n
//   normal:z1,z2,...           diagonal
//   sector:phi,m               diag(0, e^{i phi j/(m-1)}), j = 0..m-1
//   compact:lam,rho,n          lam I + K, |K_jj| = rho^j, |K_j,j+1| = rho^(j+1)
//   corner:lam,d,term          [lam] + inner range squeezed into the disk
//                              |z - lam - d e^{i psi}| <= d/4
// Complex numbers are written a, bi, a+bi or a-bi.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "numrange/boundary_geometry.hpp"
#include "numrange/complex_linalg.hpp"
#include "numrange/errors.hpp"
#include "numrange/numerical_range.hpp"
#include "numrange/reducing_spectrum.hpp"

namespace numrange {

enum class SpecKind { Jordan, Shift, Normal, Circle, DirectSum, CornerSum, CompactPerturbation, HalfDisk, Sector, RandomDense };

inline std::string_view kind_name(SpecKind k) {
  switch (k) {
    case SpecKind::Jordan: return "jordan";
    case SpecKind::Shift: return "shift";
    case SpecKind::Normal: return "normal";
    case SpecKind::Circle: return "circle";
    case SpecKind::DirectSum: return "sum";
    case SpecKind::CornerSum: return "corner";
    case SpecKind::CompactPerturbation: return "compact";
    case SpecKind::HalfDisk: return "halfdisk";
    case SpecKind::Sector: return "sector";
    case SpecKind::RandomDense: return "random";
  }
  return "?";
}

inline std::optional<SpecKind> kind_from_name(std::string_view s) {
  for (auto k : {SpecKind::Jordan, SpecKind::Shift, SpecKind::Normal, SpecKind::Circle, SpecKind::DirectSum,
                 SpecKind::CornerSum, SpecKind::CompactPerturbation, SpecKind::HalfDisk, SpecKind::Sector,
                 SpecKind::RandomDense})
    if (kind_name(k) == s) return k;
  return std::nullopt;
}

struct OperatorSpec {
  SpecKind kind = SpecKind::Jordan;
  std::size_t n = 0;               // size, or point count m for halfdisk/sector
  std::vector<Complex> values;     // normal entries; values[0] is lam for corner/compact
  double param = 0.0;              // corner: d; compact: rho; sector: phi
  std::vector<OperatorSpec> children;  // direct-sum parts, or the single inner corner spec
  std::uint64_t seed = 0;

  bool operator==(const OperatorSpec&) const = default;
};

// ---------------------------------------------------------------------------
// Parsing.

inline std::optional<Complex> parse_complex(std::string_view s) {
  if (s.empty()) return std::nullopt;
  auto parse_real = [](std::string_view t) -> std::optional<double> {
    if (t.empty()) return std::nullopt;
    if (t.front() == '+') t.remove_prefix(1);
    double v = 0.0;
    const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || p != t.data() + t.size()) return std::nullopt;
    return v;
  };
  auto parse_imag = [&](std::string_view t) -> std::optional<double> {
    t.remove_suffix(1);  // the 'i'
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return parse_real(t);
  };
  if (s.back() != 'i') {
    if (auto r = parse_real(s)) return Complex(*r, 0.0);
    return std::nullopt;
  }
  // Split at the last sign that is not an exponent sign or the leading one.
  std::size_t split = std::string_view::npos;
  for (std::size_t k = s.size() - 1; k > 0; --k)
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  if (split == std::string_view::npos) {
    if (auto im = parse_imag(s)) return Complex(0.0, *im);
    return std::nullopt;
  }
  const auto re = parse_real(s.substr(0, split));
  const auto im = parse_imag(s.substr(split));
  if (!re || !im) return std::nullopt;
  return Complex(*re, *im);
}

inline std::string format_real(double x) {
  char buf[32];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ec == std::errc() ? p : buf);
}

inline std::string format_complex(Complex z) {
  if (z.imag() == 0.0) return format_real(z.real());
  std::string im = format_real(std::abs(z.imag())) + "i";
  if (z.real() == 0.0) return (z.imag() < 0.0 ? "-" : "") + im;
  return format_real(z.real()) + (z.imag() < 0.0 || std::signbit(z.imag()) ? "-" : "+") + im;
}

namespace detail {

struct SpecParser {
  std::string_view src;
  std::size_t pos = 0;
  std::uint64_t seed = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw InvalidSpec("gallery spec '" + std::string(src) + "': " + what + " at offset " + std::to_string(pos));
  }

  bool at(char c) const { return pos < src.size() && src[pos] == c; }

  OperatorSpec spec() {
    std::vector<OperatorSpec> parts{term()};
    while (at('/')) {
      ++pos;
      parts.push_back(term());
    }
    if (parts.size() == 1) return std::move(parts.front());
    OperatorSpec s;
    s.kind = SpecKind::DirectSum;
    s.children = std::move(parts);
    s.seed = seed;
    return s;
  }

  // Comma-separated token, stopping at ',', '/', ')' or the end.
  std::string_view token() {
    const std::size_t start = pos;
    while (pos < src.size() && src[pos] != ',' && src[pos] != '/' && src[pos] != ')') ++pos;
    if (pos == start) fail("empty argument");
    return src.substr(start, pos - start);
  }

  void comma() {
    if (!at(',')) fail("expected ','");
    ++pos;
  }

  std::size_t count() {
    const auto t = token();
    std::size_t v = 0;
    const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || p != t.data() + t.size() || v == 0) fail("expected a positive integer, got '" + std::string(t) + "'");
    return v;
  }

  double real() {
    const auto t = token();
    const auto z = parse_complex(t);
    if (!z || z->imag() != 0.0) fail("expected a real number, got '" + std::string(t) + "'");
    return z->real();
  }

  Complex complex() {
    const auto t = token();
    const auto z = parse_complex(t);
    if (!z) fail("expected a complex number, got '" + std::string(t) + "'");
    return *z;
  }

  OperatorSpec term() {
    if (at('(')) {
      ++pos;
      auto s = spec();
      if (!at(')')) fail("expected ')'");
      ++pos;
      return s;
    }
    const std::size_t colon = src.find(':', pos);
    if (colon == std::string_view::npos) fail("expected kind:args");
    const auto name = src.substr(pos, colon - pos);
    const auto kind = kind_from_name(name);
    if (!kind || *kind == SpecKind::DirectSum) fail("unknown kind '" + std::string(name) + "'");
    pos = colon + 1;
    OperatorSpec s;
    s.kind = *kind;
    s.seed = seed;
    switch (*kind) {
      case SpecKind::Jordan:
      case SpecKind::Shift:
      case SpecKind::Circle:
      case SpecKind::HalfDisk:
      case SpecKind::RandomDense:
        s.n = count();
        break;
      case SpecKind::Normal:
        s.values.push_back(complex());
        while (at(',')) {
          ++pos;
          s.values.push_back(complex());
        }
        s.n = s.values.size();
        break;
      case SpecKind::Sector:
        s.param = real();
        comma();
        s.n = count();
        break;
      case SpecKind::CompactPerturbation:
        s.values = {complex()};
        comma();
        s.param = real();
        comma();
        s.n = count();
        break;
      case SpecKind::CornerSum:
        s.values = {complex()};
        comma();
        s.param = real();
        comma();
        s.children = {term()};
        break;
      case SpecKind::DirectSum:
        break;
    }
    return s;
  }
};

}  // namespace detail

inline OperatorSpec parse_gallery_spec(std::string_view text, std::uint64_t seed = 0) {
  detail::SpecParser p{text, 0, seed};
  auto s = p.spec();
  if (p.pos != text.size()) p.fail("trailing characters");
  return s;
}

inline std::string to_string(const OperatorSpec& s) {
  std::string out;
  auto join = [&](const std::vector<std::string>& xs) {
    std::string r;
    for (std::size_t k = 0; k < xs.size(); ++k) r += (k ? "," : "") + xs[k];
    return r;
  };
  switch (s.kind) {
    case SpecKind::DirectSum: {
      for (std::size_t k = 0; k < s.children.size(); ++k)
        out += (k ? "/" : "") + std::string(s.children[k].kind == SpecKind::DirectSum ? "(" : "") +
               to_string(s.children[k]) + (s.children[k].kind == SpecKind::DirectSum ? ")" : "");
      return out;
    }
    case SpecKind::Normal: {
      std::vector<std::string> xs;
      for (auto z : s.values) xs.push_back(format_complex(z));
      return "normal:" + join(xs);
    }
    case SpecKind::Sector: return "sector:" + format_real(s.param) + "," + std::to_string(s.n);
    case SpecKind::CompactPerturbation:
      return "compact:" + format_complex(s.values.at(0)) + "," + format_real(s.param) + "," + std::to_string(s.n);
    case SpecKind::CornerSum:
      return "corner:" + format_complex(s.values.at(0)) + "," + format_real(s.param) + ",(" + to_string(s.children.at(0)) + ")";
    default: return std::string(kind_name(s.kind)) + ":" + std::to_string(s.n);
  }
}

// ---------------------------------------------------------------------------
// Materialization.

inline ComplexMatrix jordan_block(std::size_t n) {
  ComplexMatrix j(n);
  for (std::size_t i = 0; i + 1 < n; ++i) j(i, i + 1) = 1.0;
  return j;
}

inline std::vector<Complex> halfdisk_points(std::size_t m) {
  std::vector<Complex> z;
  for (std::size_t j = 0; j < m; ++j) z.push_back(std::polar(1.0, kPi * static_cast<double>(j) / static_cast<double>(m - 1)));
  z.front() = 1.0;
  z.back() = -1.0;
  return z;
}

inline std::vector<Complex> sector_points(double phi, std::size_t m) {
  std::vector<Complex> z = {0.0};
  for (std::size_t j = 0; j < m; ++j) z.push_back(std::polar(1.0, phi * static_cast<double>(j) / static_cast<double>(m - 1)));
  return z;
}

inline ComplexMatrix materialize(const OperatorSpec& s) {
  auto need = [](bool ok, const char* what) {
    if (!ok) throw InvalidSpec(what);
  };
  switch (s.kind) {
    case SpecKind::Jordan:
    case SpecKind::Shift:
      need(s.n >= 1, "jordan/shift needs n >= 1");
      return jordan_block(s.n);
    case SpecKind::Normal:
      need(!s.values.empty(), "normal needs at least one value");
      return ComplexMatrix::diagonal(s.values);
    case SpecKind::Circle: {
      need(s.n >= 1, "circle needs n >= 1");
      std::vector<Complex> z;
      for (std::size_t j = 0; j < s.n; ++j) z.push_back(std::polar(1.0, 2.0 * kPi * static_cast<double>(j) / static_cast<double>(s.n)));
      return ComplexMatrix::diagonal(z);
    }
    case SpecKind::HalfDisk:
      need(s.n >= 3, "halfdisk needs m >= 3");
      return ComplexMatrix::diagonal(halfdisk_points(s.n));
    case SpecKind::Sector:
      need(s.n >= 2 && s.param > 0.0 && s.param <= kPi, "sector needs 0 < phi <= pi and m >= 2");
      return ComplexMatrix::diagonal(sector_points(s.param, s.n));
    case SpecKind::RandomDense:
      need(s.n >= 1, "random needs n >= 1");
      return random_complex_matrix(s.n, s.seed);
    case SpecKind::DirectSum: {
      need(!s.children.empty(), "empty direct sum");
      ComplexMatrix out = materialize(s.children.front());
      for (std::size_t k = 1; k < s.children.size(); ++k) out = direct_sum(out, materialize(s.children[k]));
      return out;
    }
    case SpecKind::CompactPerturbation: {
      need(s.n >= 1 && s.values.size() == 1 && s.param > 0.0 && s.param < 1.0, "compact needs lam, 0 < rho < 1, n >= 1");
      std::mt19937_64 gen(s.seed);
      std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
      ComplexMatrix t = s.values[0] * ComplexMatrix::identity(s.n);
      for (std::size_t j = 0; j < s.n; ++j) {
        // ||K|| <= rho + rho^2, inside the bound sum_j rho^j.
        const double w = std::pow(s.param, static_cast<double>(j + 1));
        t(j, j) += std::polar(w, phase(gen));
        if (j + 1 < s.n) t(j, j + 1) += std::polar(w * s.param, phase(gen));
      }
      return t;
    }
    case SpecKind::CornerSum: {
      need(s.values.size() == 1 && s.children.size() == 1 && s.param > 0.0, "corner needs lam, d > 0 and an inner spec");
      const ComplexMatrix a = materialize(s.children[0]);
      const std::size_t k = a.rows();
      Complex trace{};
      for (std::size_t i = 0; i < k; ++i) trace += a(i, i);
      const ComplexMatrix centred = shifted(a, trace / static_cast<double>(k));
      const double r = operator_norm(centred);
      std::mt19937_64 gen(s.seed);
      const double psi = std::uniform_real_distribution<double>(0.0, 2.0 * kPi)(gen);
      const Complex centre = s.values[0] + std::polar(s.param, psi);
      // Radius strictly below d/4 so W sits inside the open cone.
      const ComplexMatrix inner_block =
          shifted(r > 0.0 ? Complex(0.24 * s.param / r) * centred : centred, -centre);
      ComplexMatrix t = direct_sum(ComplexMatrix::diagonal({s.values[0]}), inner_block);
      if (s.seed != 0) {
        const auto u = random_unitary(t.rows(), s.seed);
        t = u * t * adjoint(u);
      }
      return t;
    }
  }
  throw InvalidSpec("unknown spec kind");
}

// ---------------------------------------------------------------------------
// Distance to a circular sector {r e^{it}: 0 <= r <= 1, 0 <= t <= phi}; the
// half-disk is phi = pi.

// sup_theta |h_S(theta) - h_P(theta)| with h_S the sector's support
// function: the arc for theta in [0, phi], else the best of 0, 1, e^{i phi}.
inline double hausdorff_to_sector(std::span<const Complex> points, double phi) {
  const detail::PolygonSupport pp(points);
  const std::vector<Complex> corners = {0.0, 1.0, std::polar(1.0, phi)};
  const detail::PolygonSupport ps(corners);
  std::vector<double> breaks = pp.starts;
  breaks.insert(breaks.end(), ps.starts.begin(), ps.starts.end());
  breaks.push_back(0.0);
  breaks.push_back(phi);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  breaks.push_back(2.0 * kPi);
  double best = 0.0;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double lo = breaks[k];
    const double hi = breaks[k + 1];
    if (!(hi > lo)) continue;
    const double mid = 0.5 * (lo + hi);
    const Complex p = pp.active(mid);
    const bool arc = mid < phi;
    // h_S - h_P = base + Re(e^{-i theta} d)
    const double base = arc ? 1.0 : 0.0;
    const Complex d = (arc ? Complex{} : ps.active(mid)) - p;
    auto f = [&](double th) { return std::abs(base + (std::polar(1.0, -th) * d).real()); };
    best = std::max({best, f(lo), f(hi)});
    const double c = detail::wrap_angle(std::arg(d));
    for (double crit : {c, detail::wrap_angle(c + kPi)})
      if (crit > lo && crit < hi) best = std::max(best, f(crit));
  }
  return best;
}

inline double hausdorff_to_halfdisk(std::span<const Complex> points) { return hausdorff_to_sector(points, kPi); }

// ---------------------------------------------------------------------------
// Half-disk experiment: a diagonal approximant has genuine reducing
// eigenvectors at its corners; deflating them always shrinks the range, so
// no finite stage reaches the half-disk.

struct DeflationStep {
  std::size_t dimension = 0;
  double hausdorff = 0.0;
};

struct AndersonReport {
  std::size_t m = 0;
  double hausdorff_to_halfdisk = 0.0;
  std::size_t corner_count = 0;
  std::vector<ReducingCertificate> corner_certificates;  // at +1 and -1
  std::vector<DeflationStep> deflation_steps;
  bool terminated = false;
  bool strictly_shrinking = false;
};

namespace detail {

inline std::vector<Complex> range_vertices(const SupportFunction& sf, std::size_t m) {
  std::vector<Complex> pts;
  for (const auto& b : boundary_curve(sf, m).points) pts.push_back(b.point);
  return pts;
}

}  // namespace detail

inline AndersonReport anderson_run(std::size_t m, std::size_t angles = 720, const Thresholds& thr = {},
                                   double tol = 1e-8) {
  if (m < 3) throw InvalidSpec("half-disk approximant needs m >= 3");
  OperatorSpec spec;
  spec.kind = SpecKind::HalfDisk;
  spec.n = m;
  ComplexMatrix t = materialize(spec);
  AndersonReport rep;
  rep.m = m;
  rep.hausdorff_to_halfdisk = hausdorff_to_halfdisk(halfdisk_points(m));

  const auto corners = corner_reducing_check(t, angles, thr, tol);
  rep.corner_count = corners.size();
  for (Complex target : {Complex(1.0), Complex(-1.0)})
    for (const auto& c : corners)
      if (std::abs(c.lam - target) <= 1e-9) rep.corner_certificates.push_back(c.certificate);

  // Each step deflates the rightmost and then the leftmost certified corner.
  double last = rep.hausdorff_to_halfdisk;
  rep.strictly_shrinking = true;
  while (t.rows() > 1) {
    bool progressed = false;
    for (int side : {+1, -1}) {
      if (t.rows() <= 1) break;
      const SupportFunction sf(t);
      auto cands = detail::corner_candidates(boundary_curve(sf, angles), thr.cone_tol * sf.scale());
      std::sort(cands.begin(), cands.end(), [side](Complex a, Complex b) { return side * a.real() > side * b.real(); });
      for (const auto& lam : cands) {
        const auto r = certify_corner(sf, lam, thr, angles, tol);
        if (!r || r->certificate.dimension == 0 || r->certificate.max_residual > 1e-6 * sf.op_norm()) continue;
        t = deflate(t, r->certificate);
        progressed = true;
        break;
      }
    }
    if (!progressed) break;
    const double h = hausdorff_to_halfdisk(detail::range_vertices(SupportFunction(t), angles));
    if (!(h > last)) rep.strictly_shrinking = false;
    last = h;
    rep.deflation_steps.push_back({t.rows(), h});
  }
  rep.terminated = true;
  return rep;
}

inline std::vector<AndersonReport> anderson_experiment(std::span<const std::size_t> m_values, std::size_t angles = 720,
                                                       const Thresholds& thr = {}, double tol = 1e-8) {
  std::vector<AndersonReport> out;
  for (auto m : m_values) out.push_back(anderson_run(m, angles, thr, tol));
  return out;
}

// ---------------------------------------------------------------------------
// Finite-section families.

struct TruncationSummary {
  std::size_t n = 0;
  double numerical_radius = 0.0;
  std::vector<Complex> corners;
  // Reducing residual of the unit vector minimizing
  // ||(T - lam) u||^2 + ||(T^* - conj lam) u||^2, when a candidate is given.
  std::optional<double> min_reducing_residual;
};

inline double min_reducing_residual(const ComplexMatrix& t, Complex lam) {
  const ComplexMatrix s = reducing_stack(t, lam);
  const auto e = hermitian_eig(adjoint(s) * s);
  return reducing_residual(t, lam, e.unit_vector(0));
}

// The prototype's size field is replaced by each n in turn.
inline std::vector<TruncationSummary> truncation_family(const OperatorSpec& prototype, std::span<const std::size_t> n_values,
                                                        std::optional<Complex> candidate = std::nullopt,
                                                        std::size_t angles = 720, const Thresholds& thr = {}) {
  std::vector<TruncationSummary> out;
  for (auto n : n_values) {
    OperatorSpec s = prototype;
    s.n = n;
    const ComplexMatrix t = materialize(s);
    TruncationSummary row;
    row.n = n;
    row.numerical_radius = numerical_radius(t, angles);
    for (const auto& c : corner_reducing_check(t, angles, thr)) row.corners.push_back(c.lam);
    if (candidate) row.min_reducing_residual = min_reducing_residual(t, *candidate);
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace numrange
