#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "numrange/boundary_geometry.hpp"
#include "numrange/numerical_range.hpp"

using namespace numrange;

namespace {

const ComplexMatrix kJ2 = ComplexMatrix::from_rows({{0, 1}, {0, 0}});
const ComplexMatrix kSquare = ComplexMatrix::diagonal({1.0, Complex(0, 1), -1.0, Complex(0, -1)});

ComplexMatrix jordan(std::size_t n) {
  ComplexMatrix j(n);
  for (std::size_t i = 0; i + 1 < n; ++i) j(i, i + 1) = 1.0;
  return j;
}

std::vector<Complex> points_of(const BoundaryCurve& c) {
  std::vector<Complex> p;
  for (const auto& bp : c.points) p.push_back(bp.point);
  return p;
}

// Brute-force max of Re(e^{-i theta} <Tx, x>) over random unit vectors.
double sampled_support(const ComplexMatrix& t, double theta, int samples, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  double best = -1e300;
  const std::size_t n = t.rows();
  ComplexVector x(n);
  for (int s = 0; s < samples; ++s) {
    for (auto& z : x) {
      const double re = normal(gen);
      const double im = normal(gen);
      z = {re, im};
    }
    const double nx = norm(x);
    const Complex q = quadratic_form(t, x) / (nx * nx);
    best = std::max(best, (std::polar(1.0, -theta) * q).real());
  }
  return best;
}

}  // namespace

TEST(SupportPoint, JordanBlockAtZeroAngle) {
  const auto bp = support_point(kJ2, 0.0);
  EXPECT_NEAR(bp.support, 0.5, 1e-14);
  EXPECT_NEAR(std::abs(bp.point - Complex(0.5, 0.0)), 0.0, 1e-14);
  EXPECT_EQ(bp.multiplicity, 1);
  const double mc = sampled_support(kJ2, 0.0, 1000000, 1);
  EXPECT_LE(mc, bp.support + 1e-12);
  EXPECT_GE(mc, bp.support - 1e-3);
}

TEST(SupportPoint, DiagonalAndIdentity) {
  const auto bp = support_point(ComplexMatrix::diagonal({2.0, -1.0}), 0.0);
  EXPECT_NEAR(bp.support, 2.0, 1e-15);
  EXPECT_NEAR(std::abs(bp.point - 2.0), 0.0, 1e-15);
  EXPECT_EQ(bp.multiplicity, 1);
  for (double theta : {0.0, 0.7, 2.0, 5.5}) {
    const auto id = support_point(ComplexMatrix::identity(3), theta);
    EXPECT_NEAR(id.support, std::cos(theta), 1e-14);
    EXPECT_NEAR(std::abs(id.point - 1.0), 0.0, 1e-14);
    EXPECT_EQ(id.multiplicity, 3);
  }
}

TEST(SupportPoint, WitnessReproducesPoint) {
  const auto t = random_complex_matrix(6, 3);
  for (double theta : {0.1, 1.3, 4.0}) {
    const auto bp = support_point(t, theta);
    EXPECT_NEAR(std::abs(quadratic_form(t, bp.witness) - bp.point), 0.0, 1e-13);
    EXPECT_NEAR((std::polar(1.0, -theta) * bp.point).real(), bp.support, 1e-9);
  }
}

TEST(BoundaryCurve, RejectsTooFewAngles) {
  EXPECT_THROW(boundary_curve(kJ2, 7), AngleCountTooSmall);
  EXPECT_NO_THROW(boundary_curve(kJ2, 8));
}

TEST(BoundaryCurve, AnglesEquallySpacedAndConvex) {
  const auto c = boundary_curve(random_complex_matrix(5, 9), 256);
  ASSERT_EQ(c.points.size(), 256U);
  EXPECT_EQ(c.angle_count, 256U);
  for (std::size_t j = 0; j < 256; ++j) EXPECT_NEAR(c.points[j].theta, 2.0 * kPi * j / 256.0, 1e-15);
  EXPECT_GE(convexity_defect(c), -1e-9);
}

TEST(BoundaryCurve, NormalMatrixGivesHullOfEigenvalues) {
  const auto c = boundary_curve(kSquare, 360);
  const std::vector<Complex> square = {1.0, Complex(0, 1), -1.0, Complex(0, -1)};
  EXPECT_LE(hausdorff(points_of(c), square), 1e-9);
}

TEST(BoundaryCurve, JordanBlockIsDiskOfRadiusHalf) {
  const auto c = boundary_curve(kJ2, 720);
  double worst = 0.0;
  for (const auto& bp : c.points) {
    worst = std::max(worst, std::abs(bp.point - std::polar(0.5, bp.theta)));
    worst = std::max(worst, std::abs(bp.support - 0.5));
  }
  EXPECT_LE(worst, 1e-6);
  // Independent check: random Rayleigh quotients never leave the disk and
  // come close to its rim.
  double top = 0.0;
  for (int s = 0; s < 100000; ++s) top = std::max(top, std::abs(quadratic_form(kJ2, random_unit_vector(2, s))));
  EXPECT_LE(top, 0.5 + 1e-12);
  EXPECT_GE(top, 0.5 - 1e-3);
}

TEST(BoundaryCurve, LargerJordanBlockRadius) {
  const auto c = boundary_curve(jordan(5), 720);
  for (const auto& bp : c.points) EXPECT_NEAR(std::abs(bp.point), std::cos(kPi / 6.0), 1e-6);
  // The support in every direction equals the top eigenvalue of the real
  // tridiagonal Hermitian part.
  EXPECT_NEAR(hermitian_eig(hermitian_part(jordan(5))).eigenvalues.back(), std::cos(kPi / 6.0), 1e-12);
}

TEST(BoundaryCurve, ThreadedSweepMatchesSerial) {
  const auto t = random_complex_matrix(7, 21);
  const auto a = boundary_curve(t, 300, 1);
  const auto b = boundary_curve(t, 300, 4);
  ASSERT_EQ(a.points.size(), b.points.size());
  for (std::size_t j = 0; j < a.points.size(); ++j) {
    EXPECT_EQ(a.points[j].point, b.points[j].point);
    EXPECT_EQ(a.points[j].witness, b.points[j].witness);
  }
  EXPECT_EQ(a.operator_hash, b.operator_hash);
  EXPECT_NE(a.operator_hash, boundary_curve(kJ2, 8).operator_hash);
}

TEST(Contains, Examples) {
  const auto seg = ComplexMatrix::diagonal({0.0, 1.0});
  EXPECT_TRUE(contains(seg, 0.5, 64, 1e-9));
  EXPECT_FALSE(contains(seg, Complex(0.5, 0.1), 64, 1e-9));
  EXPECT_TRUE(contains(kJ2, 0.49, 720, 1e-6));
  EXPECT_FALSE(contains(kJ2, 0.51, 720, 1e-6));
  EXPECT_THROW(contains(kJ2, 0.0, 720, 0.0), std::invalid_argument);
}

TEST(Contains, RandomRayleighQuotientsAreInside) {
  const auto t = random_complex_matrix(6, 8);
  const auto c = boundary_curve(t, 720);
  for (int s = 0; s < 10000; ++s) EXPECT_TRUE(contains(c, quadratic_form(t, random_unit_vector(6, s)), 1e-6));
}

TEST(NumericalRadius, Examples) {
  EXPECT_NEAR(numerical_radius(ComplexMatrix::identity(4), 64), 1.0, 1e-14);
  EXPECT_NEAR(numerical_radius(kJ2, 720), 0.5, 1e-6);
  EXPECT_NEAR(numerical_radius(ComplexMatrix::diagonal({Complex(0, 3), -1.0}), 64), 3.0, 1e-9);
}

TEST(FlatPortions, SegmentIsDetectedFromBothSides) {
  const auto flats = flat_portions(ComplexMatrix::diagonal({0.0, 1.0}), 64);
  ASSERT_EQ(flats.size(), 2U);
  EXPECT_NEAR(flats[0].theta, kPi / 2.0, 1e-15);
  EXPECT_NEAR(flats[1].theta, 3.0 * kPi / 2.0, 1e-15);
  for (const auto& f : flats) {
    EXPECT_NEAR(std::min(std::abs(f.start), std::abs(f.end)), 0.0, 1e-12);
    EXPECT_NEAR(std::max(std::abs(f.start), std::abs(f.end)), 1.0, 1e-12);
  }
  // Counterclockwise order: upward-facing side runs from 1 to 0.
  EXPECT_NEAR(std::abs(flats[0].start - 1.0), 0.0, 1e-12);
}

TEST(FlatPortions, DiskHasNone) {
  EXPECT_TRUE(flat_portions(kJ2, 720).empty());
}

TEST(FlatPortions, SquareEdges) {
  const auto flats = flat_portions(kSquare, 360);
  ASSERT_EQ(flats.size(), 4U);
  const std::vector<Complex> v = {1.0, Complex(0, 1), -1.0, Complex(0, -1)};
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_NEAR(flats[k].theta, kPi / 4.0 + k * kPi / 2.0, 1e-14);
    EXPECT_LE(std::abs(flats[k].start - v[k]), 1e-8);
    EXPECT_LE(std::abs(flats[k].end - v[(k + 1) % 4]), 1e-8);
  }
}

TEST(Properties, RotationTranslationEquivariance) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const auto t = random_complex_matrix(5, 300 + trial);
    const double phi = kPi * u(gen);
    const Complex c(u(gen), u(gen));
    const ComplexMatrix moved = std::polar(1.0, phi) * t + c * ComplexMatrix::identity(5);
    const SupportFunction a(t);
    const SupportFunction b(moved);
    for (int j = 0; j < 64; ++j) {
      const double theta = 2.0 * kPi * j / 64.0;
      const auto pa = a.at(theta);
      const auto pb = b.at(theta, phi);
      EXPECT_NEAR(pb.support, pa.support + (std::polar(1.0, -(theta + phi)) * c).real(), 1e-9);
      EXPECT_LE(std::abs(pb.point - (std::polar(1.0, phi) * pa.point + c)), 1e-9);
    }
  }
}

TEST(Properties, AdjointConjugatesTheRange) {
  const auto t = random_complex_matrix(6, 44);
  const SupportFunction a(t);
  const SupportFunction b(adjoint(t));
  for (int j = 0; j < 64; ++j) {
    const double theta = 2.0 * kPi * j / 64.0;
    const auto pa = a.at(theta);
    const auto pb = b.at(-theta);
    EXPECT_NEAR(pa.support, pb.support, 1e-9);
    EXPECT_LE(std::abs(pb.point - std::conj(pa.point)), 1e-9);
  }
}

TEST(Properties, DirectSumSupportIsMaxOfSupports) {
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t na = 1 + trial % 4;
    const std::size_t nb = 1 + (trial * 3) % 4;
    const auto a = random_complex_matrix(na, 500 + trial);
    const auto b = shifted(random_complex_matrix(nb, 600 + trial), Complex(0.3, -0.2));
    const auto ca = boundary_curve(a, 720);
    const auto cb = boundary_curve(b, 720);
    const auto cs = boundary_curve(direct_sum(a, b), 720);
    for (std::size_t j = 0; j < 720; ++j)
      EXPECT_NEAR(cs.points[j].support, std::max(ca.points[j].support, cb.points[j].support), 1e-9);
    auto both = points_of(ca);
    const auto pb = points_of(cb);
    both.insert(both.end(), pb.begin(), pb.end());
    // The sampled polygons differ only by the polygonal gap of the sweep.
    EXPECT_LE(hausdorff(points_of(cs), both), 1e-4);
  }
}

TEST(Properties, HermitianCollapsesToSegment) {
  const auto h = hermitian_part(random_complex_matrix(6, 12));
  const auto e = hermitian_eig(h);
  const auto c = boundary_curve(h, 128);
  double lo = 1e300;
  double hi = -1e300;
  for (const auto& bp : c.points) {
    EXPECT_NEAR(bp.point.imag(), 0.0, 1e-9);
    lo = std::min(lo, bp.point.real());
    hi = std::max(hi, bp.point.real());
  }
  EXPECT_NEAR(lo, e.eigenvalues.front(), 1e-9);
  EXPECT_NEAR(hi, e.eigenvalues.back(), 1e-9);
}
