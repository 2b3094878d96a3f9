#include <CLI11.hpp>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "numrange/numrange.hpp"

#ifndef NUMRANGE_VERSION
#define NUMRANGE_VERSION "dev"
#endif

using namespace numrange;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kBadInput = 2, kNumeric = 3, kOffBoundary = 4 };

struct Config {
  std::string in;
  std::string gallery;
  std::string lam;
  std::size_t angles = 720;
  double tol = 1e-8;
  std::uint64_t seed = 0;
  std::string format;
  std::string out;
  std::string scales;
  // trace
  std::size_t steps = 50;
  double final_ratio = 1e-4;
  std::string mode = "two-sided";
  std::string alpha0;
  // anderson
  std::string m_values = "5,9,17,33";
  // joint
  std::size_t samples = 10000;
};

unsigned thread_cap() {
  unsigned hw = std::max(1U, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("NUMRANGE_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(v));
  }
  return hw;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

Complex complex_arg(const std::string& s, const char* what) {
  const auto z = parse_complex(s);
  if (!z) throw InvalidSpec(std::string(what) + ": cannot parse '" + s + "' as a complex number");
  return *z;
}

std::vector<double> real_list(const std::string& s, const char* what) {
  std::vector<double> out;
  for (const auto& t : split(s, ',')) {
    const auto z = complex_arg(t, what);
    if (z.imag() != 0.0) throw InvalidSpec(std::string(what) + " must be real");
    out.push_back(z.real());
  }
  return out;
}

std::vector<std::size_t> count_list(const std::string& s, const char* what) {
  std::vector<std::size_t> out;
  for (const auto& t : split(s, ',')) {
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(t, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != t.size() || t.empty()) throw InvalidSpec(std::string(what) + ": '" + t + "' is not a count");
    out.push_back(v);
  }
  return out;
}

ComplexMatrix matrix_from_any_json(const json& j) {
  if (j.is_object() && j.contains("kind")) return materialize(io::spec_from_json(j));
  return io::matrix_from_json(j);
}

json read_json_file(const std::string& path) {
  std::ifstream file;
  std::istream* in = &std::cin;
  if (path != "-") {
    file.open(path);
    if (!file) throw InvalidSpec("cannot open " + path);
    in = &file;
  }
  try {
    return json::parse(*in);
  } catch (const json::parse_error& e) {
    throw InvalidSpec(std::string("malformed JSON in ") + path + ": " + e.what());
  }
}

ComplexMatrix load_operator(const Config& c) {
  if (c.in.empty() == c.gallery.empty()) throw InvalidSpec("give exactly one of --in and --gallery");
  if (!c.gallery.empty()) return materialize(parse_gallery_spec(c.gallery, c.seed));
  return matrix_from_any_json(read_json_file(c.in));
}

std::vector<ComplexMatrix> load_tuple(const Config& c) {
  if (c.in.empty() == c.gallery.empty()) throw InvalidSpec("give exactly one of --in and --gallery");
  std::vector<ComplexMatrix> ops;
  if (!c.gallery.empty()) {
    for (const auto& s : split(c.gallery, ';')) ops.push_back(materialize(parse_gallery_spec(s, c.seed)));
  } else {
    const json j = read_json_file(c.in);
    if (!j.is_array()) throw InvalidSpec("joint --in expects a JSON array of matrices");
    for (const auto& m : j) ops.push_back(matrix_from_any_json(m));
  }
  return ops;
}

// Temp file plus rename so readers never see a partial report.
void emit(const Config& c, const std::string& body) {
  if (c.out.empty() || c.out == "-") {
    std::cout << body;
    return;
  }
  const std::string tmp = c.out + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw InvalidSpec("cannot write " + tmp);
    f << body;
  }
  std::filesystem::rename(tmp, c.out);
}

void require_format(const Config& c, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (c.format == a) return;
  throw InvalidSpec("unsupported --format '" + c.format + "' for this command");
}

Thresholds thresholds(const Config& c) {
  Thresholds thr;
  thr.cone_tol = c.tol;
  if (!c.scales.empty()) thr.scales = real_list(c.scales, "--scales");
  return thr;
}

std::vector<Complex> eigenvalues(const ComplexMatrix& t) {
  const auto n = static_cast<Eigen::Index>(t.rows());
  Eigen::MatrixXcd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = t(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(a, false);
  if (es.info() != Eigen::Success) throw NumericalFailure("eigenvalue computation failed");
  std::vector<Complex> out;
  for (Eigen::Index i = 0; i < n; ++i) out.push_back(es.eigenvalues()[i]);
  return out;
}

int cmd_range(Config c) {
  if (c.format.empty()) c.format = "csv";
  require_format(c, {"csv", "json", "svg"});
  const auto t = load_operator(c);
  const auto curve = boundary_curve(t, c.angles, thread_cap());
  std::ostringstream s;
  if (c.format == "csv") {
    io::write_boundary_csv(s, curve);
  } else if (c.format == "json") {
    json pts = json::array();
    for (const auto& p : curve.points)
      pts.push_back({{"theta", p.theta}, {"support", p.support}, {"point", io::complex_json(p.point)},
                     {"multiplicity", p.multiplicity}});
    s << json{{"angle_count", curve.angle_count},
              {"operator_hash", curve.operator_hash},
              {"numerical_radius", numerical_radius(curve)},
              {"points", std::move(pts)}}
             .dump(2)
      << '\n';
  } else {
    std::vector<Complex> pts;
    for (const auto& p : curve.points) pts.push_back(p.point);
    io::SvgStyle style;
    style.version = NUMRANGE_VERSION;
    s << io::boundary_svg(convex_hull(pts), eigenvalues(t), style);
  }
  emit(c, s.str());
  return kOk;
}

int cmd_classify(Config c) {
  if (c.format.empty()) c.format = "json";
  require_format(c, {"json"});
  if (c.lam.empty()) throw InvalidSpec("--lam is required");
  const auto t = load_operator(c);
  const auto cls = classify_point(t, complex_arg(c.lam, "--lam"), thresholds(c), c.angles);
  emit(c, io::classification_json(cls).dump(2) + "\n");
  return kOk;
}

int cmd_reduce(Config c) {
  if (c.format.empty()) c.format = "json";
  require_format(c, {"json"});
  const auto t = load_operator(c);
  json out;
  if (!c.lam.empty()) {
    out = io::certificate_json(reducing_eigenspace(t, complex_arg(c.lam, "--lam"), c.tol));
  } else {
    out = json::array();
    for (const auto& r : corner_reducing_check(t, c.angles, thresholds(c), c.tol)) out.push_back(io::corner_report_json(r));
  }
  emit(c, out.dump(2) + "\n");
  return kOk;
}

// Moves T to standard position at lam and follows a spherical sequence from
// a seeded random start towards a reducing eigenvector at lam when one
// exists, else towards the support witness in the normal direction.
int cmd_trace(Config c) {
  if (c.format.empty()) c.format = "csv";
  require_format(c, {"csv", "json"});
  if (c.lam.empty()) throw InvalidSpec("--lam is required");
  TraceMode mode;
  if (c.mode == "two-sided") mode = TraceMode::TwoSided;
  else if (c.mode == "righthand") mode = TraceMode::Righthand;
  else if (c.mode == "lefthand") mode = TraceMode::Lefthand;
  else throw InvalidSpec("--mode must be two-sided, righthand or lefthand");
  std::optional<Complex> alpha0;
  if (!c.alpha0.empty()) alpha0 = complex_arg(c.alpha0, "--alpha0");

  const auto t = load_operator(c);
  const SupportFunction sf(t);
  const auto loc = locate_on_boundary(sf, complex_arg(c.lam, "--lam"), thresholds(c), c.angles);
  const double theta = loc.normal();
  const auto ts = to_standard_position(t, loc.lam, -kPi / 2.0 - theta);
  const auto cert = reducing_eigenspace(t, loc.lam, c.tol);
  const UnitVector target = cert.dimension > 0 ? cert.basis.front() : sf.at(theta).witness;
  // The gallery also draws from --seed; a separate stream keeps the start
  // vector from being a column of a gallery unitary.
  const auto start = random_unit_vector(t.rows(), c.seed ^ 0x9E3779B97F4A7C15ULL);
  const auto seq = spherical_sequence(start, target, c.steps, c.final_ratio);
  const auto tr = proof_trace(ts, seq, mode, alpha0);
  std::ostringstream s;
  if (c.format == "csv") io::write_trace_csv(s, tr);
  else s << io::trace_json(tr).dump(2) << '\n';
  emit(c, s.str());
  return kOk;
}

int cmd_anderson(Config c) {
  if (c.format.empty()) c.format = "json";
  require_format(c, {"json"});
  const auto ms = count_list(c.m_values, "--m");
  json out = json::array();
  for (const auto& r : anderson_experiment(ms, c.angles, thresholds(c), c.tol)) out.push_back(io::anderson_json(r));
  emit(c, out.dump(2) + "\n");
  return kOk;
}

int cmd_joint(Config c) {
  if (c.format.empty()) c.format = c.lam.empty() ? "csv" : "json";
  require_format(c, {"csv", "json"});
  const OperatorTuple tup(load_tuple(c));
  std::ostringstream s;
  if (c.format == "csv") {
    io::write_cloud_csv(s, joint_sample(tup, c.samples, c.seed, thread_cap()));
  } else {
    if (c.lam.empty()) throw InvalidSpec("--lam is required for the joint corner check");
    std::vector<Complex> lam;
    for (const auto& x : split(c.lam, ',')) lam.push_back(complex_arg(x, "--lam"));
    s << io::joint_report_json(joint_corner_check(tup, lam, c.angles, thresholds(c), c.tol)).dump(2) << '\n';
  }
  emit(c, s.str());
  return kOk;
}

int cmd_gallery_list(const Config& c) {
  const char* text =
      "jordan:n              n x n Jordan block (zero diagonal, unit superdiagonal)\n"
      "shift:n               finite section of the unilateral shift\n"
      "normal:z1,...,zk      diag(z1, ..., zk)\n"
      "circle:n              diag of the n-th roots of unity\n"
      "halfdisk:m            diag(e^{i pi j/(m-1)}), j = 0..m-1\n"
      "sector:phi,m          diag(0, e^{i phi j/(m-1)}), j = 0..m-1\n"
      "compact:lam,rho,n     lam I + K with |K_jj| = rho^j, |K_j,j+1| = rho^(j+1), seeded phases\n"
      "corner:lam,d,term     [lam] plus the inner range squeezed near lam + d e^{i psi}, seeded\n"
      "random:n              seeded dense Gaussian matrix\n"
      "a/b                   direct sum; parentheses group\n";
  emit(c, text);
  return kOk;
}

int cmd_gallery_materialize(const Config& c) {
  if (c.gallery.empty()) throw InvalidSpec("--gallery is required");
  emit(c, io::matrix_json(materialize(parse_gallery_spec(c.gallery, c.seed))).dump() + "\n");
  return kOk;
}

void add_operator_flags(CLI::App* app, Config& c) {
  app->add_option("--in", c.in, "matrix or spec JSON file ('-' for stdin)");
  app->add_option("--gallery", c.gallery, "gallery spec, e.g. jordan:2 or normal:1,i,-1");
  app->add_option("--seed", c.seed, "seed for randomized gallery kinds")->capture_default_str();
}

void add_common_flags(CLI::App* app, Config& c, bool short_m = true) {
  app->add_option(short_m ? "-m,--angles" : "--angles", c.angles, "number of sweep angles")->capture_default_str();
  app->add_option("--tol", c.tol, "support-point and certificate tolerance")->capture_default_str();
  app->add_option("--format", c.format, "output format: csv, json or svg");
  app->add_option("--out", c.out, "output file (default stdout)");
  app->add_option("--scales", c.scales, "comma-separated decreasing curvature scales");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical ranges of complex matrices: boundaries, corners and reducing eigenvalues"};
  app.set_version_flag("--version", NUMRANGE_VERSION);
  app.require_subcommand(1);
  Config c;

  auto* range = app.add_subcommand("range", "boundary of W(T) by support-function sweep");
  add_operator_flags(range, c);
  add_common_flags(range, c);

  auto* classify = app.add_subcommand("classify", "classify a boundary point");
  add_operator_flags(classify, c);
  add_common_flags(classify, c);
  classify->add_option("--lam", c.lam, "boundary point, e.g. 1 or 0.5-2i")->required();

  auto* reduce = app.add_subcommand("reduce", "reducing eigenspace at --lam, or certificates at every corner");
  add_operator_flags(reduce, c);
  add_common_flags(reduce, c);
  reduce->add_option("--lam", c.lam, "candidate reducing eigenvalue");

  auto* trace = app.add_subcommand("trace", "step-by-step decomposition along a sequence approaching --lam");
  add_operator_flags(trace, c);
  add_common_flags(trace, c);
  trace->add_option("--lam", c.lam, "boundary point")->required();
  trace->add_option("--steps", c.steps, "sequence length")->capture_default_str();
  trace->add_option("--final-ratio", c.final_ratio, "final angle to the target over the initial one")->capture_default_str();
  trace->add_option("--mode", c.mode, "two-sided, righthand or lefthand")->capture_default_str();
  trace->add_option("--alpha0", c.alpha0, "segment end point for one-sided modes (standard position)");

  auto* anderson = app.add_subcommand("anderson", "half-disk approximants and their corner deflations");
  add_common_flags(anderson, c, false);
  anderson->add_option("--m", c.m_values, "comma-separated approximant sizes")->capture_default_str();

  auto* joint = app.add_subcommand("joint", "joint numerical range samples or the coordinatewise corner check");
  add_operator_flags(joint, c);
  add_common_flags(joint, c);
  joint->add_option("--lam", c.lam, "comma-separated tuple point; selects the corner check");
  joint->add_option("--samples", c.samples, "sample count for the cloud")->capture_default_str();

  auto* gallery = app.add_subcommand("gallery", "list gallery kinds or materialize a spec");
  gallery->require_subcommand(1);
  auto* list = gallery->add_subcommand("list", "print the spec grammar");
  list->add_option("--out", c.out, "output file (default stdout)");
  auto* mat = gallery->add_subcommand("materialize", "print the matrix JSON of --gallery");
  mat->add_option("--gallery", c.gallery, "gallery spec")->required();
  mat->add_option("--seed", c.seed, "seed")->capture_default_str();
  mat->add_option("--out", c.out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    if (range->parsed()) return cmd_range(c);
    if (classify->parsed()) return cmd_classify(c);
    if (reduce->parsed()) return cmd_reduce(c);
    if (trace->parsed()) return cmd_trace(c);
    if (anderson->parsed()) return cmd_anderson(c);
    if (joint->parsed()) return cmd_joint(c);
    if (list->parsed()) return cmd_gallery_list(c);
    if (mat->parsed()) return cmd_gallery_materialize(c);
  } catch (const NotOnBoundary& e) {
    std::cerr << "not on the boundary: " << e.what() << '\n';
    return kOffBoundary;
  } catch (const InvalidSpec& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kBadInput;
  } catch (const DimensionMismatch& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kBadInput;
  } catch (const AngleCountTooSmall& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kBadInput;
  } catch (const SegmentViolation& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kBadInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kBadInput;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumeric;
  }
  return kBadInput;
}
