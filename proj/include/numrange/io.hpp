#pragma once

// JSON, CSV and SVG encodings of matrices and reports. Doubles go out in
// shortest round-trip form in JSON and with 17 significant digits in CSV.

#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "numrange/boundary_geometry.hpp"
#include "numrange/complex_linalg.hpp"
#include "numrange/errors.hpp"
#include "numrange/joint_range.hpp"
#include "numrange/numerical_range.hpp"
#include "numrange/operator_gallery.hpp"
#include "numrange/reducing_spectrum.hpp"

namespace numrange::io {

using nlohmann::json;

inline std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw InvalidSpec("expected a [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

// ---------------------------------------------------------------------------
// Matrices: {"n": n, "entries": [[re, im], ...]} row-major.

inline json matrix_json(const ComplexMatrix& t) {
  if (!t.is_square()) throw DimensionMismatch("matrix JSON holds square matrices only");
  json entries = json::array();
  for (const auto& z : t.entries()) entries.push_back(complex_json(z));
  return {{"n", t.rows()}, {"entries", std::move(entries)}};
}

inline ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("entries")) throw InvalidSpec("matrix JSON needs n and entries");
  if (!j["n"].is_number_unsigned() || j["n"].get<std::size_t>() == 0) throw InvalidSpec("n must be a positive integer");
  const auto n = j["n"].get<std::size_t>();
  const auto& e = j["entries"];
  if (!e.is_array() || e.size() != n * n) throw InvalidSpec("entries must hold n^2 [re, im] pairs");
  ComplexVector v;
  v.reserve(n * n);
  for (const auto& z : e) v.push_back(complex_from_json(z));
  ComplexMatrix t(n, n, std::move(v));
  if (!t.all_finite()) throw InvalidSpec("matrix entries must be finite");
  return t;
}

inline ComplexMatrix read_matrix(std::istream& in) {
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw InvalidSpec(std::string("malformed matrix JSON: ") + e.what());
  }
  return matrix_from_json(j);
}

// ---------------------------------------------------------------------------
// CSV.

inline void write_boundary_csv(std::ostream& out, const BoundaryCurve& curve) {
  out << "theta,support,re,im,multiplicity\n";
  for (const auto& p : curve.points)
    out << g17(p.theta) << ',' << g17(p.support) << ',' << g17(p.point.real()) << ',' << g17(p.point.imag()) << ','
        << p.multiplicity << '\n';
}

inline void write_trace_csv(std::ostream& out, const ProofTrace& tr) {
  out << "n,delta_re,delta_im,abs_beta,abs_gamma,r_n,mu_n\n";
  for (const auto& s : tr.steps)
    out << s.n << ',' << g17(s.delta.real()) << ',' << g17(s.delta.imag()) << ',' << g17(std::abs(s.beta)) << ','
        << g17(std::abs(s.gamma)) << ',' << g17(s.r) << ',' << (s.mu ? g17(*s.mu) : "") << '\n';
}

inline void write_cloud_csv(std::ostream& out, const JointSampleCloud& cloud) {
  if (cloud.points.empty()) return;
  const std::size_t k = cloud.points.front().size();
  for (std::size_t j = 1; j <= k; ++j) out << (j > 1 ? "," : "") << "re_" << j << ",im_" << j;
  out << '\n';
  for (const auto& p : cloud.points) {
    for (std::size_t j = 0; j < k; ++j) out << (j ? "," : "") << g17(p[j].real()) << ',' << g17(p[j].imag());
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Reports.

inline json certificate_json(const ReducingCertificate& c) {
  json basis = json::array();
  for (const auto& u : c.basis) {
    json v = json::array();
    for (const auto& z : u.coords()) v.push_back(complex_json(z));
    basis.push_back(std::move(v));
  }
  return {{"lam", complex_json(c.lam)}, {"dimension", c.dimension}, {"max_residual", c.max_residual}, {"basis", basis}};
}

inline json optional_list(const std::vector<std::optional<double>>& q) {
  json a = json::array();
  for (const auto& x : q) a.push_back(x ? json(*x) : json(nullptr));
  return a;
}

inline json classification_json(const BoundaryClassification& c) {
  return {{"verdict", verdict_name(c.verdict)},
          {"lam", complex_json(c.lam)},
          {"corner_flag", c.corner_flag},
          {"linear_vertex_flag", c.linear_vertex_flag},
          {"normal_cone_width", c.normal_cone_width},
          {"curvature_suppressed", c.curvature_suppressed},
          {"scales", c.profile.scales},
          {"left_q", optional_list(c.profile.left_quotients)},
          {"right_q", optional_list(c.profile.right_quotients)},
          {"left_sup", c.profile.left_sup},
          {"right_sup", c.profile.right_sup}};
}

inline json corner_report_json(const CornerReport& r) {
  return {{"lam", complex_json(r.lam)}, {"classification", classification_json(r.classification)},
          {"certificate", certificate_json(r.certificate)}};
}

inline json trace_json(const ProofTrace& tr) {
  json steps = json::array();
  for (const auto& s : tr.steps)
    steps.push_back({{"n", s.n},
                     {"delta", complex_json(s.delta)},
                     {"beta", complex_json(s.beta)},
                     {"gamma", complex_json(s.gamma)},
                     {"r", s.r},
                     {"tau", complex_json(s.tau)},
                     {"eta", complex_json(s.eta)},
                     {"alpha", complex_json(s.alpha)},
                     {"x_sign", s.x_sign},
                     {"rayleigh_x", complex_json(s.rayleigh_x)},
                     {"mu", s.mu ? json(*s.mu) : json(nullptr)}});
  return {{"verdict", tr.verdict},
          {"decay_ratio", tr.decay_ratio},
          {"decay_factor", ProofTrace::kDecayFactor},
          {"note", "verdict means |beta|+|gamma| fell by the fixed factor decay_factor over the sequence; "
                   "no decay rate is implied"},
          {"steps", std::move(steps)}};
}

inline json anderson_json(const AndersonReport& r) {
  json certs = json::array();
  for (const auto& c : r.corner_certificates) certs.push_back(certificate_json(c));
  json steps = json::array();
  for (const auto& s : r.deflation_steps) steps.push_back({{"dimension", s.dimension}, {"hausdorff", s.hausdorff}});
  return {{"m", r.m},
          {"hausdorff_to_halfdisk", r.hausdorff_to_halfdisk},
          {"corner_count", r.corner_count},
          {"corner_certificates", std::move(certs)},
          {"deflation_steps", std::move(steps)},
          {"terminated", r.terminated},
          {"strictly_shrinking", r.strictly_shrinking}};
}

inline json joint_report_json(const JointCornerReport& r) {
  json coords = json::array();
  for (const auto& c : r.coordinates) coords.push_back(classification_json(c));
  return {{"hypothesis_met", r.hypothesis_met},
          {"passed", r.passed},
          {"note", r.note},
          {"coordinates", std::move(coords)},
          {"certificate", r.certificate ? certificate_json(*r.certificate) : json(nullptr)}};
}

inline json spec_json(const OperatorSpec& s) {
  json j = {{"kind", kind_name(s.kind)}, {"seed", s.seed}};
  switch (s.kind) {
    case SpecKind::Normal: {
      json v = json::array();
      for (auto z : s.values) v.push_back(complex_json(z));
      j["values"] = std::move(v);
      break;
    }
    case SpecKind::DirectSum: {
      json parts = json::array();
      for (const auto& c : s.children) parts.push_back(spec_json(c));
      j["parts"] = std::move(parts);
      break;
    }
    case SpecKind::CornerSum:
      j["lam"] = complex_json(s.values.at(0));
      j["d"] = s.param;
      j["inner"] = spec_json(s.children.at(0));
      break;
    case SpecKind::CompactPerturbation:
      j["lam"] = complex_json(s.values.at(0));
      j["rho"] = s.param;
      j["n"] = s.n;
      break;
    case SpecKind::Sector:
      j["phi"] = s.param;
      j["m"] = s.n;
      break;
    case SpecKind::HalfDisk:
      j["m"] = s.n;
      break;
    default:
      j["n"] = s.n;
  }
  return j;
}

inline OperatorSpec spec_from_json(const json& j) {
  try {
    OperatorSpec s;
    const auto kind = kind_from_name(j.at("kind").get<std::string>());
    if (!kind) throw InvalidSpec("unknown kind " + j.at("kind").get<std::string>());
    s.kind = *kind;
    s.seed = j.value("seed", std::uint64_t{0});
    switch (s.kind) {
      case SpecKind::Normal:
        for (const auto& z : j.at("values")) s.values.push_back(complex_from_json(z));
        s.n = s.values.size();
        break;
      case SpecKind::DirectSum:
        for (const auto& c : j.at("parts")) s.children.push_back(spec_from_json(c));
        break;
      case SpecKind::CornerSum:
        s.values = {complex_from_json(j.at("lam"))};
        s.param = j.at("d").get<double>();
        s.children = {spec_from_json(j.at("inner"))};
        break;
      case SpecKind::CompactPerturbation:
        s.values = {complex_from_json(j.at("lam"))};
        s.param = j.at("rho").get<double>();
        s.n = j.at("n").get<std::size_t>();
        break;
      case SpecKind::Sector:
        s.param = j.at("phi").get<double>();
        s.n = j.at("m").get<std::size_t>();
        break;
      case SpecKind::HalfDisk:
        s.n = j.at("m").get<std::size_t>();
        break;
      default:
        s.n = j.at("n").get<std::size_t>();
    }
    return s;
  } catch (const json::exception& e) {
    throw InvalidSpec(std::string("malformed spec JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// SVG: 800x800 canvas, axes fitted to the bounding box of everything drawn
// plus a 10% margin.

struct SvgStyle {
  std::string version = "0";
};

inline std::string boundary_svg(std::span<const Complex> boundary, std::span<const Complex> markers,
                                const SvgStyle& style = {}) {
  double x0 = std::numeric_limits<double>::infinity();
  double x1 = -x0;
  double y0 = x0;
  double y1 = -x0;
  auto grow = [&](Complex z) {
    x0 = std::min(x0, z.real());
    x1 = std::max(x1, z.real());
    y0 = std::min(y0, z.imag());
    y1 = std::max(y1, z.imag());
  };
  for (auto z : boundary) grow(z);
  for (auto z : markers) grow(z);
  if (!(x1 >= x0)) x0 = y0 = -1.0, x1 = y1 = 1.0;
  const double span = std::max({x1 - x0, y1 - y0, 1e-12});
  const double cx = 0.5 * (x0 + x1);
  const double cy = 0.5 * (y0 + y1);
  const double half = 0.5 * span * 1.1;
  auto px = [&](Complex z) { return 400.0 + 400.0 * (z.real() - cx) / half; };
  auto py = [&](Complex z) { return 400.0 - 400.0 * (z.imag() - cy) / half; };
  auto f = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return std::string(buf);
  };

  std::ostringstream s;
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s << "<!-- numrange " << style.version << " -->\n";
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" viewBox=\"0 0 800 800\">\n";
  s << "<rect width=\"800\" height=\"800\" fill=\"white\"/>\n";
  const Complex origin{0.0, 0.0};
  if (cx - half <= 0.0 && 0.0 <= cx + half)
    s << "<line x1=\"" << f(px(origin)) << "\" y1=\"0\" x2=\"" << f(px(origin)) << "\" y2=\"800\" stroke=\"#bbb\"/>\n";
  if (cy - half <= 0.0 && 0.0 <= cy + half)
    s << "<line x1=\"0\" y1=\"" << f(py(origin)) << "\" x2=\"800\" y2=\"" << f(py(origin)) << "\" stroke=\"#bbb\"/>\n";
  if (!boundary.empty()) {
    s << "<path d=\"";
    for (std::size_t k = 0; k < boundary.size(); ++k)
      s << (k ? " L" : "M") << f(px(boundary[k])) << ',' << f(py(boundary[k]));
    s << " Z\" fill=\"#dde8f5\" stroke=\"#1f4e8c\" stroke-width=\"1.5\"/>\n";
  }
  for (auto z : markers)
    s << "<circle cx=\"" << f(px(z)) << "\" cy=\"" << f(py(z)) << "\" r=\"3\" fill=\"#c0392b\"/>\n";
  s << "</svg>\n";
  return s.str();
}

}  // namespace numrange::io
