#pragma once

// Joint numerical ranges W(T_1, ..., T_k) = {(<T_1 x, x>, ..., <T_k x, x>)}
// explored by sampling, plus joint reducing certificates and the
// coordinatewise corner check.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "numrange/boundary_geometry.hpp"
#include "numrange/complex_linalg.hpp"
#include "numrange/errors.hpp"
#include "numrange/reducing_spectrum.hpp"

namespace numrange {

struct OperatorTuple {
  std::vector<ComplexMatrix> ops;

  OperatorTuple() = default;
  explicit OperatorTuple(std::vector<ComplexMatrix> m) : ops(std::move(m)) { validate(); }

  std::size_t k() const noexcept { return ops.size(); }
  std::size_t dim() const { return ops.empty() ? 0 : ops.front().rows(); }

  void validate() const {
    if (ops.empty()) throw DimensionMismatch("operator tuple is empty");
    for (const auto& t : ops)
      if (!t.is_square() || t.rows() != ops.front().rows() || t.rows() == 0)
        throw DimensionMismatch("tuple operators must be square of one common size");
  }
};

struct JointSampleCloud {
  std::vector<std::vector<Complex>> points;  // points[s][j] = <T_j x_s, x_s>
  std::vector<UnitVector> witnesses;
  std::uint64_t seed = 0;
};

namespace detail {

inline constexpr std::size_t kJointBlock = 4096;

inline std::uint64_t block_seed(std::uint64_t seed, std::size_t block) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (block + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace detail

// Samples come in blocks of 4096 with a generator per block, so the cloud
// does not depend on the thread count.
inline JointSampleCloud joint_sample(const OperatorTuple& tup, std::size_t count, std::uint64_t seed,
                                     unsigned threads = 1) {
  tup.validate();
  if (count == 0) throw std::invalid_argument("joint_sample needs at least one sample");
  const std::size_t n = tup.dim();
  const std::size_t blocks = (count + detail::kJointBlock - 1) / detail::kJointBlock;
  std::vector<std::vector<std::vector<Complex>>> pts(blocks);
  std::vector<std::vector<UnitVector>> wit(blocks);
  auto run = [&](std::size_t b) {
    std::mt19937_64 gen(detail::block_seed(seed, b));
    const std::size_t lo = b * detail::kJointBlock;
    const std::size_t hi = std::min(count, lo + detail::kJointBlock);
    for (std::size_t s = lo; s < hi; ++s) {
      ComplexVector v;
      do v = detail::gaussian_vector(n, gen);
      while (norm(v) == 0.0);
      auto x = UnitVector::normalized(std::move(v));
      std::vector<Complex> p;
      p.reserve(tup.k());
      for (const auto& t : tup.ops) p.push_back(quadratic_form(t, x));
      pts[b].push_back(std::move(p));
      wit[b].push_back(std::move(x));
    }
  };
  const unsigned workers = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(blocks)));
  if (workers == 1) {
    for (std::size_t b = 0; b < blocks; ++b) run(b);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t b = w; b < blocks; b += workers) run(b);
      });
  }
  JointSampleCloud cloud;
  cloud.seed = seed;
  for (std::size_t b = 0; b < blocks; ++b) {
    for (auto& p : pts[b]) cloud.points.push_back(std::move(p));
    for (auto& x : wit[b]) cloud.witnesses.push_back(std::move(x));
  }
  return cloud;
}

// Common kernel of all T_j - lam_j and T_j^* - conj(lam_j). The reported
// residual of a basis vector is the sum of its per-operator residuals.
inline ReducingCertificate joint_reducing_eigenspace(const OperatorTuple& tup, std::span<const Complex> lam,
                                                     double tol) {
  tup.validate();
  if (lam.size() != tup.k()) throw DimensionMismatch("lam has the wrong length for the tuple");
  std::vector<ComplexMatrix> blocks;
  for (std::size_t j = 0; j < tup.k(); ++j) {
    blocks.push_back(shifted(tup.ops[j], lam[j]));
    blocks.push_back(shifted(adjoint(tup.ops[j]), std::conj(lam[j])));
  }
  ReducingCertificate c;
  c.lam = lam.front();
  c.basis = nullspace(vstack(blocks), tol);
  c.dimension = c.basis.size();
  for (const auto& u : c.basis) {
    double r = 0.0;
    for (std::size_t j = 0; j < tup.k(); ++j) r += reducing_residual(tup.ops[j], lam[j], u);
    c.max_residual = std::max(c.max_residual, r);
  }
  return c;
}

struct JointCornerReport {
  std::vector<BoundaryClassification> coordinates;
  // Every coordinate is a corner or a point of infinite curvature.
  bool hypothesis_met = false;
  std::optional<ReducingCertificate> certificate;
  bool passed = false;  // hypothesis met and the joint certificate is non-trivial and tight
  std::string note;
};

inline bool corner_or_infinite(const BoundaryClassification& c) {
  switch (c.verdict) {
    case Verdict::Corner:
    case Verdict::LinearVertex:
    case Verdict::InfiniteCurvature:
    case Verdict::InfiniteRighthand:
    case Verdict::InfiniteLefthand:
      return true;
    default:
      return c.corner_flag;
  }
}

inline JointCornerReport joint_corner_check(const OperatorTuple& tup, std::span<const Complex> lam,
                                            std::size_t m = 720, Thresholds thr = {}, double tol = 1e-8) {
  tup.validate();
  if (lam.size() != tup.k()) throw DimensionMismatch("lam has the wrong length for the tuple");
  thr.profile_at_corners = false;
  JointCornerReport r;
  for (std::size_t j = 0; j < tup.k(); ++j) r.coordinates.push_back(classify_point(tup.ops[j], lam[j], thr, m));
  r.hypothesis_met = std::all_of(r.coordinates.begin(), r.coordinates.end(), corner_or_infinite);
  if (!r.hypothesis_met) {
    r.note = "hypothesis not met: some coordinate is neither a corner nor a point of infinite curvature";
    return r;
  }
  std::vector<Complex> snapped;
  double scale = 0.0;
  for (std::size_t j = 0; j < tup.k(); ++j) {
    snapped.push_back(r.coordinates[j].lam);
    scale = std::max(scale, operator_norm(tup.ops[j]));
  }
  r.certificate = joint_reducing_eigenspace(tup, snapped, tol);
  r.passed = r.certificate->dimension >= 1 && r.certificate->max_residual <= 1e-7 * scale;
  r.note = r.passed ? "joint reducing eigenvector certified" : "no joint reducing eigenvector at this tuple";
  return r;
}

}  // namespace numrange
