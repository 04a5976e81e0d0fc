#include "equibu/matrix_bu.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace equibu;

namespace {

Mat mat2(double a, double b, double c, double e) {
  Mat m(2, 2);
  m << a, b, c, e;
  return m;
}

BUWitness expect_bu(const BUOutcome& out) {
  if (const auto* inc = std::get_if<Inconclusive>(&out)) ADD_FAILURE() << "inconclusive: " << inc->reason;
  return std::get<BUWitness>(out);
}

// Polynomial odd field with random coefficients, degree 1 and 3 terms.
OddMatrixField random_field(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  const int m = d + 1;
  std::vector<Mat> lin, cub;
  for (int k = 0; k < m; ++k) {
    Mat a(m, m), b(m, m);
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) {
        a(r, c) = g(rng);
        b(r, c) = 0.5 * g(rng);
      }
    lin.push_back(a);
    cub.push_back(b);
  }
  return OddMatrixField(d, [lin, cub, m](const Vec& x) {
    Mat out = Mat::Zero(m, m);
    for (int k = 0; k < m; ++k) out += x[k] * lin[static_cast<std::size_t>(k)] + std::pow(x[k], 3) * cub[static_cast<std::size_t>(k)];
    return out;
  });
}

}  // namespace

TEST(CubeFacets, SpecExamples) {
  EXPECT_TRUE(rows_in_intersecting_cube_facets(mat2(1, 0, 1, 0), 1e-3).verdict);
  const auto bad = rows_in_intersecting_cube_facets(mat2(1, 0, -1, 0), 1e-3);
  EXPECT_FALSE(bad.verdict);
  EXPECT_EQ(bad.row_a, 0);
  EXPECT_EQ(bad.row_b, 1);
  EXPECT_EQ(bad.column, 0);
  EXPECT_FALSE(rows_in_intersecting_cube_facets(mat2(0, 0, 1, 0), 1e-3).verdict);
}

TEST(CubeFacets, DistinctColumnsNeverFail) {
  EXPECT_TRUE(rows_in_intersecting_cube_facets(mat2(2, 0, 0, -3), 1e-3).verdict);
  EXPECT_THROW(rows_in_intersecting_cube_facets(Mat::Zero(2, 3), 1e-3), Error);
}

TEST(OddField, EvaluationIsExactlyOdd) {
  std::mt19937_64 rng(3);
  auto f = random_field(2, rng);
  std::normal_distribution<double> g;
  for (int t = 0; t < 200; ++t) {
    Vec u(3);
    u << g(rng), g(rng), g(rng);
    EXPECT_EQ((f(u) + f(-u)).cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(ColorfulBU, ZeroFieldGivesBadRows) {
  OddMatrixField f(1, [](const Vec&) { return Mat(Mat::Zero(2, 2)); });
  const auto w = expect_bu(solve_colorful_bu(f));
  ASSERT_TRUE(std::holds_alternative<CubeFacetReport>(w.outcome));
  EXPECT_FALSE(std::get<CubeFacetReport>(w.outcome).verdict);
  EXPECT_TRUE(validate_bu_witness(f, w));
}

TEST(ColorfulBU, EqualRowsGiveTransversalOnDiagonal) {
  OddMatrixField f(1, [](const Vec& x) { return mat2(x[0], x[1], x[0], x[1]); });
  const auto w = expect_bu(solve_colorful_bu(f));
  ASSERT_TRUE(std::holds_alternative<Transversal>(w.outcome));
  EXPECT_TRUE(validate_bu_witness(f, w));
  EXPECT_NEAR(w.x[0], std::sqrt(0.5), 2e-3);
  EXPECT_NEAR(w.x[1], std::sqrt(0.5), 2e-3);
}

TEST(ColorfulBU, RandomFieldsRevalidate) {
  std::mt19937_64 rng(11);
  for (int d = 1; d <= 2; ++d)
    for (int t = 0; t < 10; ++t) {
      auto f = random_field(d, rng);
      const auto w = expect_bu(solve_colorful_bu(f));
      EXPECT_TRUE(validate_bu_witness(f, w)) << "d=" << d << " trial " << t;
    }
}

TEST(ClassicalBU, Zeros) {
  auto z1 = classical_bu_zero(1, [](const Vec& u) { return Vec::Constant(1, u[1]); });
  ASSERT_TRUE(std::holds_alternative<ZeroWitness>(z1));
  const auto& w1 = std::get<ZeroWitness>(z1);
  EXPECT_LE(w1.norm, 1e-3);
  EXPECT_NEAR(std::abs(w1.x[0]), 1.0, 1e-3);

  auto z2 = classical_bu_zero(2, [](const Vec& u) {
    Vec v(2);
    v << u[0], u[1];
    return v;
  });
  ASSERT_TRUE(std::holds_alternative<ZeroWitness>(z2));
  const auto& w2 = std::get<ZeroWitness>(z2);
  EXPECT_LE(w2.norm, 1e-3);
  EXPECT_NEAR(std::abs(w2.x[2]), 1.0, 1e-3);

  auto z3 = classical_bu_zero(2, [](const Vec& u) {
    Vec v(2);
    v << u[1] - u[2], u[0];
    return v;
  });
  ASSERT_TRUE(std::holds_alternative<ZeroWitness>(z3));
  const auto& w3 = std::get<ZeroWitness>(z3);
  EXPECT_LE(w3.norm, 1e-3);
  EXPECT_NEAR(std::abs(w3.x[1]), std::sqrt(0.5), 2e-3);
  EXPECT_NEAR(w3.x[1], w3.x[2], 2e-3);
}

TEST(OrbitCollapse, CosineOnCircleZ3) {
  auto out = orbit_collapse(3, 1, [](const Vec& x) { return Vec::Constant(1, x[0] / x.norm()); });
  ASSERT_TRUE(std::holds_alternative<OrbitCollapse>(out));
  const auto& c = std::get<OrbitCollapse>(out);
  EXPECT_LE(c.residual, 1e-3);
  EXPECT_NEAR(c.y[0], 0.5, 2e-3);
  EXPECT_NEAR(c.alpha, 1.5, 2e-3);
  std::vector<double> angles;
  for (const auto& q : c.orbit) angles.push_back(std::fmod(std::atan2(q[1], q[0]) * 180 / M_PI + 360.0, 360.0));
  std::sort(angles.begin(), angles.end());
  EXPECT_NEAR(angles[0], 60.0, 0.5);
  EXPECT_NEAR(angles[1], 180.0, 0.5);
  EXPECT_NEAR(angles[2], 300.0, 0.5);
}

TEST(OrbitCollapse, AntipodalDiagonal) {
  auto out = orbit_collapse(2, 2, [](const Vec& x) { return Vec(x); });
  ASSERT_TRUE(std::holds_alternative<OrbitCollapse>(out));
  const auto& c = std::get<OrbitCollapse>(out);
  EXPECT_LE(c.residual, 1e-3);
  // f(x) = y and f(-x) = y - alpha(1,1) forces x on the diagonal
  EXPECT_NEAR(c.y[0], c.y[1], 2e-3);
  EXPECT_NEAR(std::abs(c.y[0]), std::sqrt(0.5), 2e-3);
}

TEST(OrbitCollapse, ConstantMapCollapsesFully) {
  auto out = orbit_collapse(3, 1, [](const Vec&) { return Vec::Constant(1, 2.0); });
  ASSERT_TRUE(std::holds_alternative<OrbitCollapse>(out));
  const auto& c = std::get<OrbitCollapse>(out);
  EXPECT_LE(c.residual, 1e-3);
  EXPECT_NEAR(c.alpha, 0.0, 1e-3);
}

TEST(OrbitCollapse, RejectsCompositeOrder) {
  EXPECT_THROW(orbit_collapse(4, 1, [](const Vec& x) { return Vec(x.head(1)); }), Error);
}
