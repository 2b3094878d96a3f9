#pragma once

// Planar convex geometry for boundary points of W(T) or of any convex set
// given by samples: hulls, Hausdorff distance, standard position, curvature
// quotient profiles and boundary point classification.
//
// Standard position at a boundary point lam: translate lam to 0 and rotate
// so that a supporting line becomes the real axis with the set above it,
//   alpha = e^{i rho} (z - lam).
// The curvature quotient at a boundary point alpha is Im(alpha) / Re(alpha)^2;
// it stays bounded on a C^2 arc and blows up at corners and at points such
// as the origin of {Im >= Re^{3/2}}.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "numrange/complex_linalg.hpp"
#include "numrange/errors.hpp"
#include "numrange/numerical_range.hpp"

namespace numrange {

enum class Verdict {
  SmoothFinite,
  InfiniteCurvature,
  InfiniteRighthand,
  InfiniteLefthand,
  Corner,
  LinearVertex,
  FlatInterior,
};

inline std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::SmoothFinite: return "SmoothFinite";
    case Verdict::InfiniteCurvature: return "InfiniteCurvature";
    case Verdict::InfiniteRighthand: return "InfiniteRighthand";
    case Verdict::InfiniteLefthand: return "InfiniteLefthand";
    case Verdict::Corner: return "Corner";
    case Verdict::LinearVertex: return "LinearVertex";
    case Verdict::FlatInterior: return "FlatInterior";
  }
  return "?";
}

struct Thresholds {
  // A side diverges if its finest quotient reaches q_max, or if its last
  // min_scales quotients increase strictly with every step growing at least
  // like (t_k / t_{k+1})^min_growth_exponent.
  double q_max = 1e6;
  double min_growth_exponent = 0.25;
  std::size_t min_scales = 4;
  double collinearity_tol = 1e-9;   // sine of the turning angle
  double corner_width = 1e-6;       // radians
  double straight_fraction = 1e-6;  // minimum segment length / diameter
  // Sampled curves only: a vertex is a corner when its turning angle beats
  // both neighbours' by this factor (uniform turning is a sampled smooth arc).
  double corner_turn_ratio = 10.0;
  double boundary_tol = 1e-6;  // distance from the boundary, times max(1, scale)
  double cone_tol = 1e-8;      // support points this close count as lam
  bool profile_at_corners = true;
  std::vector<double> scales;  // empty: diameter * 2^-k, k = 2..20
};

inline double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }
inline double dot(Complex a, Complex b) { return a.real() * b.real() + a.imag() * b.imag(); }

// ---------------------------------------------------------------------------
// Hulls and distances.

// Counterclockwise strict hull (Andrew's monotone chain), starting at the
// lowest-leftmost point. Points whose turn has |sine| <= tol are dropped.
inline std::vector<Complex> convex_hull(std::span<const Complex> points, double tol = 1e-12) {
  std::vector<Complex> p(points.begin(), points.end());
  for (const auto& z : p)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw NumericalFailure("convex_hull: non-finite point");
  std::sort(p.begin(), p.end(), [](Complex a, Complex b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  });
  p.erase(std::unique(p.begin(), p.end()), p.end());
  if (p.size() <= 1) return p;

  auto keeps_turn = [tol](Complex a, Complex b, Complex c) {
    const Complex e1 = b - a;
    const Complex e2 = c - b;
    return cross(e1, e2) > tol * std::abs(e1) * std::abs(e2);
  };
  std::vector<Complex> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && !keeps_turn(h[k - 2], h[k - 1], p[i])) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && !keeps_turn(h[k - 2], h[k - 1], p[i])) --k;
    h[k++] = p[i];
  }
  h.resize(k - 1);
  if (h.size() == 2 && h[0] == h[1]) h.resize(1);
  return h;
}

inline double diameter(std::span<const Complex> points) {
  const auto h = convex_hull(points);
  double d = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i)
    for (std::size_t j = i + 1; j < h.size(); ++j) d = std::max(d, std::abs(h[i] - h[j]));
  return d;
}

inline double polygon_area(std::span<const Complex> ring) {
  double a = 0.0;
  for (std::size_t i = 0; i < ring.size(); ++i) a += cross(ring[i], ring[(i + 1) % ring.size()]);
  return 0.5 * a;
}

inline double segment_distance(Complex p, Complex a, Complex b) {
  const Complex d = b - a;
  const double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(p - a);
  const double s = std::clamp(dot(p - a, d) / len2, 0.0, 1.0);
  return std::abs(p - (a + s * d));
}

namespace detail {

inline double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a < 0.0) a += 2.0 * kPi;
  return a;
}

// Support structure of a convex polygon: vertex k of the hull attains the
// support function on the angle interval starting at starts[k].
struct PolygonSupport {
  std::vector<Complex> vertices;
  std::vector<double> starts;  // sorted, in [0, 2 pi)
  std::vector<std::size_t> owner;

  explicit PolygonSupport(std::span<const Complex> pts) : vertices(convex_hull(pts)) {
    const std::size_t h = vertices.size();
    if (h == 0) throw InvalidSpec("hausdorff needs non-empty point sets");
    if (h == 1) {
      starts = {0.0};
      owner = {0};
      return;
    }
    std::vector<std::pair<double, std::size_t>> s;
    for (std::size_t i = 0; i < h; ++i) {
      const Complex edge = vertices[(i + 1) % h] - vertices[i];
      s.emplace_back(wrap_angle(std::arg(edge) - kPi / 2.0), (i + 1) % h);
    }
    std::sort(s.begin(), s.end());
    for (const auto& [a, k] : s) {
      starts.push_back(a);
      owner.push_back(k);
    }
  }

  Complex active(double theta) const {
    auto it = std::upper_bound(starts.begin(), starts.end(), theta);
    const std::size_t idx = it == starts.begin() ? starts.size() - 1 : static_cast<std::size_t>(it - starts.begin()) - 1;
    return vertices[owner[idx]];
  }
};

}  // namespace detail

// Hausdorff distance between the convex hulls of two point sets, computed
// exactly as sup_theta |h_A(theta) - h_B(theta)| over support functions.
// Between consecutive breakpoints both maximizing vertices are fixed, so the
// difference is |a - b| cos(theta - arg(a - b)) and its extremes are closed form.
inline double hausdorff(std::span<const Complex> a, std::span<const Complex> b) {
  const detail::PolygonSupport pa(a);
  const detail::PolygonSupport pb(b);
  std::vector<double> breaks = pa.starts;
  breaks.insert(breaks.end(), pb.starts.begin(), pb.starts.end());
  breaks.push_back(0.0);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  breaks.push_back(2.0 * kPi);

  double best = 0.0;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double lo = breaks[k];
    const double hi = breaks[k + 1];
    if (!(hi > lo)) continue;
    const double mid = 0.5 * (lo + hi);
    const Complex d = pa.active(mid) - pb.active(mid);
    auto f = [d](double th) { return std::abs((std::polar(1.0, -th) * d).real()); };
    best = std::max({best, f(lo), f(hi)});
    const double c = detail::wrap_angle(std::arg(d));
    for (double crit : {c, detail::wrap_angle(c + kPi)})
      if (crit > lo && crit < hi) best = std::max(best, std::abs(d));
  }
  return best;
}

// ---------------------------------------------------------------------------
// Standard position and curvature profiles.

struct StandardPosition {
  double rotation = 0.0;  // rho
  Complex translation;    // -lam
  std::vector<Complex> transformed_samples;  // counterclockwise boundary order
  std::size_t origin_index = 0;              // sample mapped to 0
  bool closed = false;                       // samples form a closed polygon
  // true: every sample is an exact boundary point (operator refinement);
  // false: samples are polygon vertices, so scales below the local sample
  // spacing are not resolved.
  bool exact_samples = false;

  Complex map(Complex z) const { return std::polar(1.0, rotation) * (z + translation); }
};

struct CurvatureProfile {
  std::vector<double> scales;  // strictly decreasing
  std::vector<std::optional<double>> right_quotients;
  std::vector<std::optional<double>> left_quotients;
  std::vector<bool> right_missing;  // the set ends before Re alpha = +t
  std::vector<bool> left_missing;
  // Largest recorded quotient per side; reported only, never used in verdicts.
  double right_sup = 0.0;
  double left_sup = 0.0;

  std::size_t resolvable_scales() const {
    std::size_t c = 0;
    for (std::size_t k = 0; k < scales.size(); ++k)
      if (right_quotients[k] || left_quotients[k]) ++c;
    return c;
  }
};

struct BoundaryClassification {
  Verdict verdict = Verdict::SmoothFinite;
  bool corner_flag = false;
  bool linear_vertex_flag = false;
  CurvatureProfile profile;
  double normal_cone_width = 0.0;
  Complex lam;  // the boundary point actually studied (lam snapped to the boundary)
  // Set has empty interior (a segment or a point); curvature is undefined
  // there and the profile is left empty.
  bool curvature_suppressed = false;
};

inline std::vector<double> default_scales(double diam) {
  std::vector<double> s;
  for (int k = 2; k <= 20; ++k) s.push_back(diam * std::ldexp(1.0, -k));
  return s;
}

namespace detail {

// Interpolated Im alpha where the boundary polyline on one side of the
// origin crosses |Re alpha| = t. dir = +1 walks forward (right side),
// dir = -1 backward (left side).
struct SideHit {
  std::optional<double> im;
  bool missing = false;
};

inline SideHit side_crossing(const StandardPosition& sp, double t, int dir, double collinear_tol) {
  const auto& s = sp.transformed_samples;
  const std::size_t n = s.size();
  const double sign = dir > 0 ? 1.0 : -1.0;
  auto at = [&](std::size_t step) -> std::optional<Complex> {
    const long long idx = static_cast<long long>(sp.origin_index) + dir * static_cast<long long>(step);
    if (sp.closed) return s[static_cast<std::size_t>(((idx % static_cast<long long>(n)) + static_cast<long long>(n)) % static_cast<long long>(n))];
    if (idx < 0 || idx >= static_cast<long long>(n)) return std::nullopt;
    return s[static_cast<std::size_t>(idx)];
  };

  const std::size_t limit = sp.closed ? n : n + 1;
  for (std::size_t step = 0; step + 1 < limit; ++step) {
    const auto a = at(step);
    const auto b = at(step + 1);
    if (!a || !b) break;
    const double ra = sign * a->real();
    const double rb = sign * b->real();
    if (rb < ra) break;  // the boundary turned back before reaching t
    if (rb < t) continue;
    const double frac = rb > ra ? (t - ra) / (rb - ra) : 1.0;
    const double im = a->imag() + frac * (b->imag() - a->imag());
    if (!sp.exact_samples) {
      const double len = std::abs(*b - *a);
      const bool on_axis = std::abs(a->imag()) <= collinear_tol * std::max(std::abs(*a), len) &&
                           std::abs(b->imag()) <= collinear_tol * std::max(std::abs(*b), len);
      if (!on_axis && rb - ra > 0.5 * t) return {std::nullopt, false};
    }
    return {im, false};
  }
  return {std::nullopt, true};
}

inline bool side_diverges(const std::vector<double>& scales, const std::vector<std::optional<double>>& q,
                          const Thresholds& thr) {
  std::vector<std::pair<double, double>> present;  // (t, q)
  for (std::size_t k = 0; k < scales.size(); ++k)
    if (q[k]) present.emplace_back(scales[k], *q[k]);
  if (present.empty()) return false;
  if (present.back().second >= thr.q_max) return true;
  if (present.size() < thr.min_scales) return false;
  for (std::size_t k = present.size() - thr.min_scales + 1; k < present.size(); ++k) {
    const auto [t0, q0] = present[k - 1];
    const auto [t1, q1] = present[k];
    if (!(q0 > 0.0) || !(q1 > q0)) return false;
    if (std::log(q1 / q0) < thr.min_growth_exponent * std::log(t0 / t1)) return false;
  }
  return true;
}

}  // namespace detail

inline CurvatureProfile curvature_profile(const StandardPosition& sp, std::span<const double> scales,
                                          const Thresholds& thr = {}) {
  for (std::size_t k = 0; k < scales.size(); ++k) {
    if (!(scales[k] > 0.0)) throw std::invalid_argument("curvature scales must be positive");
    if (k > 0 && !(scales[k] < scales[k - 1])) throw std::invalid_argument("curvature scales must decrease strictly");
  }
  CurvatureProfile p;
  p.scales.assign(scales.begin(), scales.end());
  for (double t : scales) {
    const auto r = detail::side_crossing(sp, t, +1, thr.collinearity_tol);
    const auto l = detail::side_crossing(sp, t, -1, thr.collinearity_tol);
    auto quotient = [t](const std::optional<double>& im) -> std::optional<double> {
      if (!im) return std::nullopt;
      return std::max(*im, 0.0) / (t * t);
    };
    p.right_quotients.push_back(quotient(r.im));
    p.left_quotients.push_back(quotient(l.im));
    p.right_missing.push_back(r.missing);
    p.left_missing.push_back(l.missing);
    if (p.right_quotients.back()) p.right_sup = std::max(p.right_sup, *p.right_quotients.back());
    if (p.left_quotients.back()) p.left_sup = std::max(p.left_sup, *p.left_quotients.back());
  }
  return p;
}

// Divergence verdict of a profile alone: one of SmoothFinite,
// InfiniteCurvature, InfiniteRighthand, InfiniteLefthand.
inline Verdict curvature_verdict(const CurvatureProfile& p, const Thresholds& thr = {}) {
  const bool r = detail::side_diverges(p.scales, p.right_quotients, thr);
  const bool l = detail::side_diverges(p.scales, p.left_quotients, thr);
  if (r && l) return Verdict::InfiniteCurvature;
  if (r) return Verdict::InfiniteRighthand;
  if (l) return Verdict::InfiniteLefthand;
  return Verdict::SmoothFinite;
}

// ---------------------------------------------------------------------------
// Sampled sets.

// Counterclockwise boundary of conv(samples) that keeps every sample lying
// on a hull edge (within 1e-12 of the diameter), so straight stretches stay
// resolved as runs of collinear samples.
inline std::vector<Complex> boundary_polyline(std::span<const Complex> samples) {
  const auto hull = convex_hull(samples);
  const std::size_t h = hull.size();
  if (h <= 2) return hull;
  const double tol = 1e-12 * std::max(diameter(hull), std::numeric_limits<double>::min());
  std::vector<std::vector<std::pair<double, Complex>>> on_edge(h);
  for (const auto& p : samples) {
    for (std::size_t i = 0; i < h; ++i) {
      const Complex a = hull[i];
      const Complex b = hull[(i + 1) % h];
      if (segment_distance(p, a, b) > tol) continue;
      const double s = dot(p - a, b - a) / std::norm(b - a);
      if (std::abs(p - a) > tol && std::abs(p - b) > tol) on_edge[i].emplace_back(s, p);
      break;
    }
  }
  std::vector<Complex> out;
  for (std::size_t i = 0; i < h; ++i) {
    out.push_back(hull[i]);
    auto& e = on_edge[i];
    std::sort(e.begin(), e.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    for (std::size_t k = 0; k < e.size(); ++k)
      if (k == 0 || std::abs(e[k].second - e[k - 1].second) > tol) out.push_back(e[k].second);
  }
  return out;
}

namespace detail {

inline double turning(Complex prev, Complex cur, Complex next) {
  const Complex e1 = cur - prev;
  const Complex e2 = next - cur;
  return std::atan2(cross(e1, e2), dot(e1, e2));
}

// Length of the straight run leaving vertex i in direction dir, and the
// number of edges in it.
inline std::pair<double, std::size_t> straight_run(const std::vector<Complex>& ring, std::size_t i, int dir,
                                                   double tol) {
  const std::size_t n = ring.size();
  auto idx = [&](long long k) { return static_cast<std::size_t>(((k % static_cast<long long>(n)) + static_cast<long long>(n)) % static_cast<long long>(n)); };
  const long long start = static_cast<long long>(i);
  double len = std::abs(ring[idx(start + dir)] - ring[i]);
  std::size_t edges = 1;
  for (std::size_t step = 1; step < n; ++step) {
    const Complex a = ring[idx(start + dir * static_cast<long long>(step - 1))];
    const Complex b = ring[idx(start + dir * static_cast<long long>(step))];
    const Complex c = ring[idx(start + dir * static_cast<long long>(step + 1))];
    const Complex e1 = b - a;
    const Complex e2 = c - b;
    if (std::abs(cross(e1, e2)) > tol * std::abs(e1) * std::abs(e2) || dot(e1, e2) <= 0.0) break;
    len += std::abs(e2);
    ++edges;
  }
  return {len, edges};
}

inline StandardPosition make_position(std::span<const Complex> ring, std::size_t origin, Complex lam,
                                      double outward_normal, bool closed, bool exact) {
  StandardPosition sp;
  sp.rotation = -kPi / 2.0 - outward_normal;
  sp.translation = -lam;
  sp.origin_index = origin;
  sp.closed = closed;
  sp.exact_samples = exact;
  for (const auto& z : ring) sp.transformed_samples.push_back(sp.map(z));
  sp.transformed_samples[origin] = 0.0;
  return sp;
}

// Classification of a set with empty interior. The segment [a, b] (a == b
// for a point) is mapped onto the real axis.
inline BoundaryClassification classify_degenerate(Complex a, Complex b, Complex lam, double tol,
                                                  const Thresholds& thr) {
  BoundaryClassification c;
  c.curvature_suppressed = true;
  const double len = std::abs(b - a);
  if (len <= tol) {
    if (std::abs(lam - a) > tol) throw NotOnBoundary("point is not the single point of the set");
    c.verdict = Verdict::Corner;
    c.corner_flag = true;
    c.normal_cone_width = 2.0 * kPi;
    c.lam = a;
    return c;
  }
  if (segment_distance(lam, a, b) > tol) throw NotOnBoundary("point is off the segment");
  const double da = std::abs(lam - a);
  const double db = std::abs(lam - b);
  const double edge_tol = std::max(tol, thr.straight_fraction * len);
  if (da <= edge_tol || db <= edge_tol) {
    c.verdict = Verdict::LinearVertex;
    c.corner_flag = true;
    c.linear_vertex_flag = true;
    c.normal_cone_width = kPi;
    c.lam = da <= db ? a : b;
  } else {
    c.verdict = Verdict::FlatInterior;
    c.lam = a + (dot(lam - a, b - a) / (len * len)) * (b - a);
  }
  return c;
}

inline StandardPosition degenerate_position(Complex a, Complex b, Complex lam) {
  // Orient the segment so lam's end sits at 0 and the rest at Re > 0 when lam
  // is an endpoint.
  if (std::abs(lam - b) < std::abs(lam - a)) std::swap(a, b);
  const double phi = std::abs(b - a) > 0.0 ? std::arg(b - a) : 0.0;
  StandardPosition sp;
  sp.rotation = -phi;
  sp.translation = -lam;
  sp.closed = false;
  sp.exact_samples = true;
  std::vector<Complex> pts = {sp.map(a), sp.map(b), Complex(0.0)};
  std::sort(pts.begin(), pts.end(), [](Complex x, Complex y) { return x.real() < y.real(); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  sp.origin_index = static_cast<std::size_t>(std::find(pts.begin(), pts.end(), Complex(0.0)) - pts.begin());
  sp.transformed_samples = std::move(pts);
  return sp;
}

}  // namespace detail

struct SampledPoint {
  std::vector<Complex> ring;  // boundary polyline, lam inserted if needed
  std::size_t index = 0;      // position of lam in ring
  Complex lam;
  double diam = 0.0;
};

// Locate lam on the boundary polyline of the samples: snap to a vertex within
// boundary_tol * max(1, diam), otherwise insert the projection onto the
// nearest edge.
inline SampledPoint locate_on_samples(std::span<const Complex> samples, Complex lam, const Thresholds& thr) {
  SampledPoint sp;
  sp.ring = boundary_polyline(samples);
  sp.diam = diameter(sp.ring);
  const double tol = thr.boundary_tol * std::max(1.0, sp.diam);
  const std::size_t n = sp.ring.size();
  std::size_t best_v = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs(sp.ring[i] - lam) < std::abs(sp.ring[best_v] - lam)) best_v = i;
  if (std::abs(sp.ring[best_v] - lam) <= tol) {
    sp.index = best_v;
    sp.lam = sp.ring[best_v];
    return sp;
  }
  std::size_t best_e = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double d = segment_distance(lam, sp.ring[i], sp.ring[(i + 1) % n]);
    if (d < best_d) {
      best_d = d;
      best_e = i;
    }
  }
  if (best_d > tol) throw NotOnBoundary("point is not within tolerance of the sampled boundary");
  const Complex a = sp.ring[best_e];
  const Complex b = sp.ring[(best_e + 1) % n];
  const Complex proj = a + std::clamp(dot(lam - a, b - a) / std::norm(b - a), 0.0, 1.0) * (b - a);
  sp.ring.insert(sp.ring.begin() + static_cast<std::ptrdiff_t>(best_e + 1), proj);
  sp.index = best_e + 1;
  sp.lam = proj;
  return sp;
}

// Standard position for sampled boundaries. Without an explicit outward
// normal: corners use the bisector of the polygon's normal cone; other
// points use an adjacent straight run if there is one, else the chord
// through the two neighbouring samples.
inline StandardPosition standard_position(std::span<const Complex> samples, Complex lam, const Thresholds& thr = {},
                                          std::optional<double> outward_normal = std::nullopt) {
  const auto hull = convex_hull(samples);
  if (hull.size() <= 2) {
    const Complex a = hull.front();
    const Complex b = hull.back();
    const double tol = thr.boundary_tol * std::max(1.0, std::abs(b - a));
    if (segment_distance(lam, a, b) > tol) throw NotOnBoundary("point is off the segment");
    return detail::degenerate_position(a, b, lam);
  }
  const auto loc = locate_on_samples(samples, lam, thr);
  const auto& r = loc.ring;
  const std::size_t n = r.size();
  const Complex prev = r[(loc.index + n - 1) % n];
  const Complex cur = r[loc.index];
  const Complex next = r[(loc.index + 1) % n];
  double normal = 0.0;
  if (outward_normal) {
    normal = *outward_normal;
  } else {
    const double psi = detail::turning(prev, cur, next);
    const double psi_prev = detail::turning(r[(loc.index + n - 2) % n], prev, cur);
    const double psi_next = detail::turning(cur, next, r[(loc.index + 2) % n]);
    const bool corner = psi > thr.corner_width && psi > thr.corner_turn_ratio * std::max(psi_prev, psi_next);
    const double n_in = std::arg(cur - prev) - kPi / 2.0;
    if (corner) {
      normal = n_in + psi / 2.0;
    } else {
      const auto back = detail::straight_run(r, loc.index, -1, thr.collinearity_tol);
      const auto fwd = detail::straight_run(r, loc.index, +1, thr.collinearity_tol);
      if (back.second >= 2) normal = n_in;
      else if (fwd.second >= 2) normal = std::arg(next - cur) - kPi / 2.0;
      else normal = std::arg(next - prev) - kPi / 2.0;
    }
  }
  return detail::make_position(r, loc.index, loc.lam, normal, true, false);
}

// Classification of a boundary point of conv(samples). Corners are detected
// from turning angles (see Thresholds::corner_turn_ratio); a side counts as a
// straight segment only if its collinear run spans at least two sample edges,
// since one chord between samples says nothing about the set in between.
inline BoundaryClassification classify_point(std::span<const Complex> samples, Complex lam, const Thresholds& thr = {},
                                             std::optional<double> outward_normal = std::nullopt) {
  const auto hull = convex_hull(samples);
  if (hull.empty()) throw InvalidSpec("classify_point needs samples");
  if (hull.size() <= 2) {
    const Complex a = hull.front();
    const Complex b = hull.back();
    return detail::classify_degenerate(a, b, lam, thr.boundary_tol * std::max(1.0, std::abs(b - a)), thr);
  }

  const auto loc = locate_on_samples(samples, lam, thr);
  const auto& r = loc.ring;
  const std::size_t n = r.size();
  const std::size_t i = loc.index;
  const double psi = detail::turning(r[(i + n - 1) % n], r[i], r[(i + 1) % n]);
  const double psi_prev = detail::turning(r[(i + n - 2) % n], r[(i + n - 1) % n], r[i]);
  const double psi_next = detail::turning(r[i], r[(i + 1) % n], r[(i + 2) % n]);
  const auto back = detail::straight_run(r, i, -1, thr.collinearity_tol);
  const auto fwd = detail::straight_run(r, i, +1, thr.collinearity_tol);
  const double min_len = thr.straight_fraction * loc.diam;

  BoundaryClassification c;
  c.lam = loc.lam;
  if (std::abs(std::sin(psi)) <= thr.collinearity_tol && back.first >= min_len && fwd.first >= min_len) {
    c.verdict = Verdict::FlatInterior;
    return c;
  }
  c.corner_flag = psi > thr.corner_width && psi > thr.corner_turn_ratio * std::max(psi_prev, psi_next);
  c.normal_cone_width = c.corner_flag ? psi : 0.0;
  c.linear_vertex_flag = c.corner_flag && back.second >= 2 && fwd.second >= 2 && back.first >= min_len &&
                         fwd.first >= min_len;

  if (!c.corner_flag || thr.profile_at_corners) {
    const auto sp = standard_position(samples, lam, thr, outward_normal);
    const auto scales = thr.scales.empty() ? default_scales(loc.diam) : thr.scales;
    c.profile = curvature_profile(sp, scales, thr);
  }
  if (c.linear_vertex_flag) {
    c.verdict = Verdict::LinearVertex;
  } else if (c.corner_flag) {
    c.verdict = Verdict::Corner;
  } else {
    if (c.profile.resolvable_scales() < 3) throw InsufficientResolution("fewer than 3 curvature scales are resolved");
    c.verdict = curvature_verdict(c.profile, thr);
  }
  return c;
}

inline BoundaryClassification classify_point(const BoundaryCurve& curve, Complex lam, const Thresholds& thr = {}) {
  std::vector<Complex> pts;
  pts.reserve(curve.points.size());
  for (const auto& bp : curve.points) pts.push_back(bp.point);
  return classify_point(pts, lam, thr);
}

// ---------------------------------------------------------------------------
// Operators: the support function gives the normal cone directly and can be
// probed at any angle, so refinement near lam is exact rather than sampled.

struct BoundaryLocation {
  Complex lam;               // boundary point under study
  double theta_lo = 0.0;     // normal cone [theta_lo, theta_hi]
  double theta_hi = 0.0;
  double diam = 0.0;
  std::optional<FlatPortion> flat;  // lam strictly inside this segment
  bool left_straight = false;       // boundary arcs next to lam are segments
  bool right_straight = false;
  // Empty interior: W(T) is the segment [seg_a, seg_b] (equal for a point).
  bool degenerate = false;
  Complex seg_a, seg_b;

  double cone_width() const { return theta_hi - theta_lo; }
  double normal() const { return 0.5 * (theta_lo + theta_hi); }
};

inline BoundaryLocation locate_on_boundary(const SupportFunction& sf, Complex lam, const Thresholds& thr = {},
                                           std::size_t m = 720) {
  const auto curve = boundary_curve(sf, m);
  const double scale = sf.scale();
  const double btol = thr.boundary_tol * scale;
  std::vector<Complex> pts;
  for (const auto& bp : curve.points) pts.push_back(bp.point);

  BoundaryLocation loc;
  const auto hull = convex_hull(pts, 1e-9);
  loc.diam = diameter(hull);
  if (hull.size() <= 2 || std::abs(polygon_area(hull)) <= 1e-10 * std::max(loc.diam * loc.diam, 1e-300)) {
    // Empty interior: take the two extreme points of the sampled segment.
    Complex a = hull.front();
    Complex b = hull.front();
    for (const auto& p : hull)
      for (const auto& q : hull)
        if (std::abs(p - q) > std::abs(a - b)) {
          a = p;
          b = q;
        }
    loc.degenerate = true;
    loc.seg_a = a;
    loc.seg_b = b;
    loc.lam = lam;
    return loc;
  }

  auto gap = [&](double theta) { return sf.at(theta).support - (std::polar(1.0, -theta) * lam).real(); };
  std::size_t jmin = 0;
  double hmin = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < m; ++j) {
    const double h = curve.points[j].support - (std::polar(1.0, -curve.points[j].theta) * lam).real();
    if (h < hmin) {
      hmin = h;
      jmin = j;
    }
  }
  if (hmin < -btol) throw NotOnBoundary("point lies outside the numerical range");

  // Golden-section search for the direction whose supporting line passes
  // closest to lam.
  const double step = 2.0 * kPi / static_cast<double>(m);
  double a = curve.points[jmin].theta - step;
  double b = curve.points[jmin].theta + step;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - g * (b - a);
  double x2 = a + g * (b - a);
  double f1 = gap(x1);
  double f2 = gap(x2);
  for (int it = 0; it < 80 && b - a > 1e-15; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = gap(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = gap(x2);
    }
  }
  double theta_star = f1 <= f2 ? x1 : x2;
  if (hmin < std::min(f1, f2)) theta_star = curve.points[jmin].theta;
  if (std::min({hmin, f1, f2}) > btol) throw NotOnBoundary("point lies in the interior of the numerical range");

  const double min_len = thr.straight_fraction * loc.diam;
  Complex anchor = sf.point(theta_star);
  if (auto fp = flat_portion_at(sf, theta_star)) {
    const Complex d = fp->end - fp->start;
    const double s = std::clamp(dot(lam - fp->start, d) / std::norm(d), 0.0, 1.0);
    const Complex proj = fp->start + s * d;
    if (std::abs(proj - fp->start) >= min_len && std::abs(proj - fp->end) >= min_len) {
      loc.lam = proj;
      loc.flat = fp;
      loc.theta_lo = loc.theta_hi = theta_star;
      if (std::abs(proj - lam) > btol) throw NotOnBoundary("point is not on the flat portion");
      return loc;
    }
    anchor = std::abs(lam - fp->start) <= std::abs(lam - fp->end) ? fp->start : fp->end;
  }
  if (std::abs(anchor - lam) > btol) throw NotOnBoundary("point is not within tolerance of the boundary");
  loc.lam = anchor;

  // Normal cone: angles whose support point coincides with the anchor.
  const double ctol = thr.cone_tol * scale;
  auto inside = [&](double base, double off) { return std::abs(sf.point(base, off) - anchor) <= ctol; };
  double start = theta_star;
  if (!inside(theta_star, 0.0)) {
    if (inside(theta_star, 1e-10)) start = theta_star + 1e-10;
    else if (inside(theta_star, -1e-10)) start = theta_star - 1e-10;
  }
  auto edge = [&](int dir) {
    double in = 0.0;
    double out = step;
    bool found_out = false;
    for (std::size_t k = 1; k <= m; ++k) {
      const double off = dir * step * static_cast<double>(k);
      if (!inside(start, off)) {
        out = step * static_cast<double>(k);
        found_out = true;
        break;
      }
      in = step * static_cast<double>(k);
    }
    if (!found_out) return std::numeric_limits<double>::infinity();
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (in + out);
      if (inside(start, dir * mid)) in = mid;
      else out = mid;
    }
    return in;
  };
  const double up = edge(+1);
  const double down = edge(-1);
  loc.theta_lo = start - down;
  loc.theta_hi = start + up;

  // Straight neighbours: just past the cone the support point jumps to the
  // far end of a segment and then stays put.
  auto straight = [&](double base, int dir) {
    const double delta = 1e-9;
    const Complex p1 = sf.point(base, dir * delta);
    const Complex p2 = sf.point(base, 2.0 * dir * delta);
    const double len = std::abs(p1 - anchor);
    return len >= std::max(min_len, ctol) && std::abs(p2 - p1) <= 1e-6 * len;
  };
  loc.right_straight = straight(loc.theta_hi, +1);
  loc.left_straight = straight(loc.theta_lo, -1);
  return loc;
}

namespace detail {

// Support point on one side of the cone whose standard-position abscissa is
// |Re alpha| = t. Returns nullopt when the set ends before t.
inline std::optional<Complex> abscissa_sample(const SupportFunction& sf, const BoundaryLocation& loc, double rho,
                                              double t, int dir, double& hint) {
  const double base = dir > 0 ? loc.theta_hi : loc.theta_lo;
  const double psi = loc.normal();
  const double phi_max = dir > 0 ? psi + kPi / 2.0 - base : base - (psi - kPi / 2.0);
  const Complex rot = std::polar(1.0, rho);
  auto alpha = [&](double phi) { return rot * (sf.point(base, dir * phi) - loc.lam); };
  auto abscissa = [&](Complex z) { return dir * z.real(); };

  double lo = 0.0;
  double hi = std::min(hint, phi_max);
  Complex a_lo = 0.0;
  Complex a_hi = alpha(hi);
  if (abscissa(a_hi) < t) {
    hi = phi_max;
    a_hi = alpha(hi);
    if (abscissa(a_hi) < t * (1.0 - 1e-12)) return std::nullopt;
  }
  for (int it = 0; it < 200; ++it) {
    if (std::abs(abscissa(a_hi) - t) <= 1e-9 * t) {
      hint = hi;
      return a_hi;
    }
    if (hi - lo <= 1e-15 * std::max(hi, 1e-300)) break;
    const double mid = 0.5 * (lo + hi);
    const Complex am = alpha(mid);
    if (abscissa(am) >= t) {
      hi = mid;
      a_hi = am;
    } else {
      lo = mid;
      a_lo = am;
    }
  }
  hint = hi;
  // The support point jumps across [a_lo, a_hi]: that stretch of boundary is
  // a segment, so interpolate along it.
  const double r0 = abscissa(a_lo);
  const double r1 = abscissa(a_hi);
  const double frac = r1 > r0 ? (t - r0) / (r1 - r0) : 1.0;
  return a_lo + frac * (a_hi - a_lo);
}

}  // namespace detail

// Boundary samples of W(T) near lam at |Re alpha| = t for each scale t,
// found by bisection on the direction just outside the normal cone. The
// result is a standard position with exact samples, ordered
// left (far to near), origin, right (near to far).
inline StandardPosition refine_near(const SupportFunction& sf, const BoundaryLocation& loc,
                                    std::span<const double> scales) {
  if (loc.degenerate) return detail::degenerate_position(loc.seg_a, loc.seg_b, loc.lam);

  const double psi = loc.normal();
  const double rho = -kPi / 2.0 - psi;
  std::vector<Complex> right;
  std::vector<Complex> left;
  double hint_r = kPi;
  double hint_l = kPi;
  for (double t : scales) {
    if (auto s = detail::abscissa_sample(sf, loc, rho, t, +1, hint_r)) right.push_back(*s);
    if (auto s = detail::abscissa_sample(sf, loc, rho, t, -1, hint_l)) left.push_back(*s);
  }
  StandardPosition sp;
  sp.rotation = rho;
  sp.translation = -loc.lam;
  sp.exact_samples = true;
  sp.closed = false;
  // Scales decrease, so the far samples come first on each side.
  for (const auto& z : left) sp.transformed_samples.push_back(z);
  sp.origin_index = sp.transformed_samples.size();
  sp.transformed_samples.push_back(0.0);
  for (auto it = right.rbegin(); it != right.rend(); ++it) sp.transformed_samples.push_back(*it);
  return sp;
}

inline StandardPosition refine_near(const ComplexMatrix& t, Complex lam, std::span<const double> scales,
                                    std::size_t m = 720, const Thresholds& thr = {}) {
  const SupportFunction sf(t);
  return refine_near(sf, locate_on_boundary(sf, lam, thr, m), scales);
}

// Classification of lam on the boundary of W(T) using m sweep angles for
// the initial location and targeted refinement afterwards.
inline BoundaryClassification classify_point(const SupportFunction& sf, Complex lam, const Thresholds& thr = {},
                                             std::size_t m = 720) {
  const auto loc = locate_on_boundary(sf, lam, thr, m);
  if (loc.degenerate) {
    const double tol = thr.boundary_tol * sf.scale();
    return detail::classify_degenerate(loc.seg_a, loc.seg_b, lam, tol, thr);
  }
  BoundaryClassification c;
  c.lam = loc.lam;
  if (loc.flat) {
    c.verdict = Verdict::FlatInterior;
    return c;
  }
  c.normal_cone_width = loc.cone_width();
  c.corner_flag = c.normal_cone_width > thr.corner_width;
  c.linear_vertex_flag = c.corner_flag && loc.left_straight && loc.right_straight;
  if (!c.corner_flag || thr.profile_at_corners) {
    const auto scales = thr.scales.empty() ? default_scales(loc.diam) : thr.scales;
    c.profile = curvature_profile(refine_near(sf, loc, scales), scales, thr);
  }
  if (c.linear_vertex_flag) {
    c.verdict = Verdict::LinearVertex;
  } else if (c.corner_flag) {
    c.verdict = Verdict::Corner;
  } else {
    if (c.profile.resolvable_scales() < 3) throw InsufficientResolution("fewer than 3 curvature scales are resolved");
    c.verdict = curvature_verdict(c.profile, thr);
  }
  return c;
}

inline BoundaryClassification classify_point(const ComplexMatrix& t, Complex lam, const Thresholds& thr = {},
                                             std::size_t m = 720) {
  return classify_point(SupportFunction(t), lam, thr, m);
}

}  // namespace numrange
