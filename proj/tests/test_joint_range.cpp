#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "numrange/joint_range.hpp"

using namespace numrange;

namespace {

const Complex I{0.0, 1.0};

ComplexMatrix jordan2() { return ComplexMatrix::from_rows({{0, 1}, {0, 0}}); }

}  // namespace

TEST(JointSample, RealDiagonalStaysInUnitInterval) {
  const OperatorTuple tup({ComplexMatrix::diagonal({0.0, 1.0})});
  const auto cloud = joint_sample(tup, 1000, 1);
  ASSERT_EQ(cloud.points.size(), 1000U);
  for (const auto& p : cloud.points) {
    EXPECT_NEAR(p[0].imag(), 0.0, 1e-15);
    EXPECT_GE(p[0].real(), -1e-15);
    EXPECT_LE(p[0].real(), 1.0 + 1e-15);
  }
}

TEST(JointSample, DuplicatedCoordinateAgrees) {
  const auto t = random_complex_matrix(3, 4);
  const auto cloud = joint_sample(OperatorTuple({t, t}), 500, 2);
  for (const auto& p : cloud.points) EXPECT_EQ(p[0], p[1]);
}

TEST(JointSample, RealAndImaginaryPartsOfJordanLieInTheDisk) {
  const auto j = jordan2();
  const auto re = hermitian_part(j);
  const auto im = Complex(0.0, -0.5) * (j - adjoint(j));
  const auto cloud = joint_sample(OperatorTuple({re, im}), 5000, 3);
  for (const auto& p : cloud.points) EXPECT_LE(std::abs(p[0].real() + I * p[1].real()), 0.5 + 1e-9);
}

TEST(JointSample, WitnessesReproducePoints) {
  const OperatorTuple tup({random_complex_matrix(4, 1), random_complex_matrix(4, 2)});
  const auto cloud = joint_sample(tup, 300, 9);
  for (std::size_t s = 0; s < cloud.points.size(); ++s)
    for (std::size_t j = 0; j < 2; ++j)
      EXPECT_NEAR(std::abs(quadratic_form(tup.ops[j], cloud.witnesses[s]) - cloud.points[s][j]), 0.0, 1e-12);
}

TEST(JointSample, ThreadCountDoesNotChangeTheCloud) {
  const OperatorTuple tup({random_complex_matrix(3, 1)});
  const auto a = joint_sample(tup, 10000, 5, 1);
  const auto b = joint_sample(tup, 10000, 5, 3);
  EXPECT_EQ(a.points, b.points);
  EXPECT_THROW(joint_sample(tup, 0, 5), std::invalid_argument);
  EXPECT_THROW(OperatorTuple({ComplexMatrix(2), ComplexMatrix(3)}), DimensionMismatch);
}

TEST(JointSample, CoordinatesLieInEachNumericalRange) {
  const OperatorTuple tup({random_complex_matrix(3, 11), random_complex_matrix(3, 12)});
  const auto cloud = joint_sample(tup, 2000, 4);
  for (std::size_t j = 0; j < 2; ++j) {
    const auto curve = boundary_curve(tup.ops[j], 720);
    for (const auto& p : cloud.points) EXPECT_TRUE(contains(curve, p[j], 1e-6));
  }
}

TEST(JointSample, DiagonalTuplesStayInHullOfJointEigenvalues) {
  // x -> sum |x_i|^2 (d1_i, d2_i): every linear functional is maximized at a
  // joint diagonal entry, and each entry is attained by a basis vector.
  const std::vector<Complex> d1 = {1.0, I, -1.0, 0.5};
  const std::vector<Complex> d2 = {2.0, 0.0, -2.0, I};
  const OperatorTuple tup({ComplexMatrix::diagonal(d1), ComplexMatrix::diagonal(d2)});
  const auto cloud = joint_sample(tup, 20000, 6);
  for (int f = 0; f < 50; ++f) {
    const auto w = random_unit_vector(2, 700 + f);
    auto score = [&](Complex a, Complex b) { return (std::conj(w[0]) * a + std::conj(w[1]) * b).real(); };
    double best_vertex = -1e300;
    for (std::size_t i = 0; i < d1.size(); ++i) best_vertex = std::max(best_vertex, score(d1[i], d2[i]));
    for (const auto& p : cloud.points) EXPECT_LE(score(p[0], p[1]), best_vertex + 1e-12);
  }
  for (std::size_t i = 0; i < d1.size(); ++i) {
    const auto e = UnitVector::basis(4, i);
    EXPECT_EQ(quadratic_form(tup.ops[0], e), d1[i]);
    EXPECT_EQ(quadratic_form(tup.ops[1], e), d2[i]);
  }
}

TEST(JointSample, SingleOperatorCloudApproachesTheRange) {
  for (std::size_t n : {2U, 3U, 4U}) {
    const auto t = random_complex_matrix(n, 40 + n);
    const auto cloud = joint_sample(OperatorTuple({t}), 100000, 8);
    std::vector<Complex> pts;
    for (const auto& p : cloud.points) pts.push_back(p[0]);
    const auto hull = convex_hull(pts);
    std::vector<Complex> ring;
    for (const auto& b : boundary_curve(t, 720).points) ring.push_back(b.point);
    EXPECT_LE(hausdorff(hull, ring), 5e-2) << "n=" << n;
  }
}

TEST(JointReducingEigenspace, Examples) {
  const std::vector<Complex> lam = {2.0, 3.0};
  const auto a = joint_reducing_eigenspace(
      OperatorTuple({ComplexMatrix::diagonal({2.0, 0.0}), ComplexMatrix::diagonal({3.0, 0.0})}), lam, 1e-10);
  ASSERT_EQ(a.dimension, 1U);
  EXPECT_NEAR(std::abs(a.basis[0][0]), 1.0, 1e-12);
  const auto b = joint_reducing_eigenspace(
      OperatorTuple({ComplexMatrix::diagonal({2.0, 0.0}), ComplexMatrix::diagonal({0.0, 3.0})}), lam, 1e-10);
  EXPECT_EQ(b.dimension, 0U);
  const std::vector<Complex> lam2 = {1.0, 0.0};
  const auto c = joint_reducing_eigenspace(
      OperatorTuple({ComplexMatrix::diagonal({1.0, I, 0.0}), ComplexMatrix::diagonal({0.0, 1.0, I})}), lam2, 1e-10);
  EXPECT_EQ(c.dimension, 1U);
  EXPECT_THROW(joint_reducing_eigenspace(OperatorTuple({ComplexMatrix(2)}), lam, 1e-10), DimensionMismatch);
}

TEST(JointCornerCheck, SimultaneousDiagonalCorner) {
  const OperatorTuple tup({ComplexMatrix::diagonal({1.0, I, -1.0}), ComplexMatrix::diagonal({2.0, 0.0, -2.0})});
  const std::vector<Complex> lam = {1.0, 2.0};
  const auto r = joint_corner_check(tup, lam);
  EXPECT_TRUE(r.hypothesis_met);
  ASSERT_TRUE(r.certificate);
  EXPECT_EQ(r.certificate->dimension, 1U);
  EXPECT_TRUE(r.passed);
}

TEST(JointCornerCheck, SharedReducingBlock) {
  const auto block = direct_sum(ComplexMatrix(1), I * ComplexMatrix::identity(2) + Complex(0.25) * jordan2());
  const OperatorTuple tup({block, ComplexMatrix::diagonal({0.0, 1.0, 2.0})});
  const std::vector<Complex> lam = {0.0, 0.0};
  const auto r = joint_corner_check(tup, lam);
  EXPECT_TRUE(r.passed);
  ASSERT_TRUE(r.certificate);
  ASSERT_EQ(r.certificate->dimension, 1U);
  EXPECT_NEAR(std::abs(r.certificate->basis[0][0]), 1.0, 1e-10);
}

TEST(JointCornerCheck, SmoothCoordinatesFailTheHypothesis) {
  const OperatorTuple tup({jordan2(), jordan2()});
  const std::vector<Complex> lam = {0.5, 0.5};
  const auto r = joint_corner_check(tup, lam);
  EXPECT_FALSE(r.hypothesis_met);
  EXPECT_FALSE(r.passed);
  EXPECT_FALSE(r.certificate);
  const std::vector<Complex> off = {0.1, 0.5};
  EXPECT_THROW(joint_corner_check(tup, off), NotOnBoundary);
}
