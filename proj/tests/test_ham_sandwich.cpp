#include "equibu/ham_sandwich.hpp"
#include "equibu/oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace equibu;

namespace {

Vec v2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

Vec v1(double x) { return Vec::Constant(1, x); }

std::vector<Vec> gaussian_cloud(int n, int d, std::mt19937_64& rng, double shift = 0.0) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Vec> pts;
  for (int k = 0; k < n; ++k) pts.push_back(Vec::NullaryExpr(d, [&] { return g(rng) + shift; }));
  return pts;
}

template <class T, class O>
T expect_holds(const O& out) {
  if (const auto* inc = std::get_if<Inconclusive>(&out)) ADD_FAILURE() << "inconclusive: " << inc->reason;
  return std::get<T>(out);
}

}  // namespace

TEST(HalfspaceValue, RampAndPoles) {
  auto m = uniform_measure({v2(0, 0), v2(2, 0)}, 0.5, 2.0);
  // H^+ = {x <= 1}: the left point only.
  EXPECT_NEAR(halfspace_value(m, hyperplane_from(v2(1, 0), 1.0)), 1.0, 1e-12);
  // A line through a point counts it half.
  EXPECT_NEAR(halfspace_value(m, hyperplane_from(v2(1, 0), 0.0)), 0.5, 1e-12);
  // Inside the ramp: distance 0.125 past the point with width 0.5.
  EXPECT_NEAR(halfspace_value(m, hyperplane_from(v2(1, 0), 0.125)), 0.75, 1e-12);
  Vec north = Vec::Zero(3), south = Vec::Zero(3);
  north[0] = 1;
  south[0] = -1;
  EXPECT_EQ(halfspace_value(m, north), 2.0);
  EXPECT_EQ(halfspace_value(m, south), 0.0);
  m.delta = 0;
  EXPECT_THROW(halfspace_value(m, north), Error);
}

TEST(HalfspaceValue, ContinuousNearThePoles) {
  std::mt19937_64 rng(1);
  auto m = uniform_measure(gaussian_cloud(10, 2, rng), 0.1);
  for (double eps : {1e-3, 1e-5, 1e-8}) {
    Vec u(3);
    u << std::sqrt(1 - eps * eps), eps, 0;
    EXPECT_NEAR(halfspace_value(m, u), m.total(), 1e-12);
  }
}

TEST(HalfspaceValue, ComplementsSumToTotal) {
  std::mt19937_64 rng(2);
  auto m = uniform_measure(gaussian_cloud(15, 2, rng), 0.2, 3.0);
  std::normal_distribution<double> g;
  for (int k = 0; k < 100; ++k) {
    Vec u = Vec::NullaryExpr(3, [&] { return g(rng); }).normalized();
    EXPECT_NEAR(halfspace_value(m, u) + halfspace_value(m, -u), m.total(), 1e-12);
  }
}

TEST(HSField, RawFieldIsOdd) {
  std::mt19937_64 rng(3);
  MeasureFamilySet M;
  for (int j = 0; j < 3; ++j) {
    M.families.emplace_back();
    for (int i = 0; i < 3; ++i) M.families.back().push_back(uniform_measure(gaussian_cloud(6, 2, rng), 0.05));
  }
  std::normal_distribution<double> g;
  for (int k = 0; k < 200; ++k) {
    Vec u = Vec::NullaryExpr(3, [&] { return g(rng); }).normalized();
    EXPECT_LE((hs_field_raw(M, u) + hs_field_raw(M, -u)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Equalizing, SymmetricCloudsGiveZeroDifferences) {
  // Three measures symmetric under x -> -x: any cut through the origin
  // equalizes, and the solver must find some equalizing cut.
  std::mt19937_64 rng(4);
  std::vector<SmoothedPointMeasure> ms;
  for (int i = 0; i < 3; ++i) {
    auto pts = gaussian_cloud(5, 2, rng);
    const auto n = pts.size();
    for (std::size_t k = 0; k < n; ++k) pts.push_back(-pts[k]);
    ms.push_back(uniform_measure(pts, 0.01));
  }
  const auto cut = expect_holds<EqualizingCut>(solve_equalizing_hs(ms));
  const auto diff = detail::signed_differences(ms, cut.u);
  EXPECT_LE(detail::spread(diff), 1e-6);
}

TEST(Equalizing, RepeatedMeasureStillEqualizes) {
  std::mt19937_64 rng(5);
  auto a = uniform_measure(gaussian_cloud(20, 2, rng), 0.01);
  auto b = uniform_measure(gaussian_cloud(20, 2, rng, 1.5), 0.01);
  const auto cut = expect_holds<EqualizingCut>(solve_equalizing_hs({a, b, a}));
  EXPECT_LE(detail::spread(detail::signed_differences({a, b, a}, cut.u)), 1e-6);
}

TEST(HamSandwich, MedianOnTheLine) {
  auto m = uniform_measure({v1(0), v1(1), v1(2), v1(5), v1(9)}, 1e-3);
  const auto cut = expect_holds<FractionCut>(solve_ham_sandwich({m}));
  EXPECT_NEAR(cut.fractions[0], 0.5, 1e-4);
  // The only bisecting point is the median 2.
  EXPECT_NEAR(cut.u[0] / cut.u[1], 2.0, 1e-3);
}

TEST(HamSandwich, BisectorAgreesWithSweep) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 5; ++trial) {
    auto a = uniform_measure(gaussian_cloud(20, 2, rng), 1.0);
    auto b = uniform_measure(gaussian_cloud(20, 2, rng, 1.0), 1.0);
    const double delta = default_delta({a, b});
    a.delta = b.delta = delta;
    const auto cut = expect_holds<FractionCut>(solve_ham_sandwich({a, b}));
    EXPECT_LE(cut.residual, 1e-3);
    auto bisect = [](const std::vector<double>& fr) { return std::max(std::abs(fr[0] - 0.5), std::abs(fr[1] - 0.5)); };
    SweepConfig sc;
    sc.angles = 360;
    sc.offsets = 400;
    const auto sweep = line_sweep_2d({a, b}, bisect, sc);
    EXPECT_LE(std::abs(sweep.best.residual - cut.residual), 2 * sweep.modulus);
  }
}

TEST(TwoFamily, NaiveConjectureFails) {
  const auto c = figure2_configuration();
  EXPECT_FALSE(naive_conjecture_scan(c, 0.01, 0.05));
  Vec u;
  EXPECT_TRUE(naive_conjecture_scan(c, 0.01, 0.3, &u));
  EXPECT_NEAR(u.norm(), 1.0, 1e-12);
}

TEST(TwoFamily, NaiveConjectureHoldsForEqualFamilies) {
  auto c = figure2_configuration();
  c.r2 = c.r1;
  c.g2 = c.g1;
  EXPECT_TRUE(naive_conjecture_scan(c, 0.01, 0.03));
}

TEST(TwoFamily, ColorfulSolverReportsOppositePair) {
  const auto c = figure2_configuration();
  const auto M = two_family_instance(c);
  BUConfig cfg;
  cfg.refine.witness_tol = 1e-3;
  const auto out = solve_colorful_hs(M, cfg);
  ASSERT_TRUE(std::holds_alternative<OppositePairReport>(out));
  const auto& r = std::get<OppositePairReport>(out);
  EXPECT_TRUE(validate_opposite_pair(M, r, 1e-3));
  EXPECT_NE(r.max_family, r.min_family);
}

TEST(ColorfulHS, PerturbedFamiliesValidate) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> jitter(0.0, 0.05);
  std::vector<SmoothedPointMeasure> base;
  for (int i = 0; i < 3; ++i) base.push_back(uniform_measure(gaussian_cloud(8, 2, rng, i), 0.02));
  MeasureFamilySet M;
  for (int j = 0; j < 3; ++j) {
    M.families.emplace_back();
    for (auto m : base) {
      for (auto& p : m.points) p += Vec::NullaryExpr(2, [&] { return jitter(rng); });
      M.families.back().push_back(m);
    }
  }
  BUConfig cfg;
  cfg.refine.witness_tol = 1e-3;
  const auto out = solve_colorful_hs(M, cfg);
  ASSERT_FALSE(std::holds_alternative<Inconclusive>(out));
  if (const auto* w = std::get_if<HSWitness>(&out)) EXPECT_TRUE(validate_hs_witness(M, *w, 1e-3));
  if (const auto* r = std::get_if<OppositePairReport>(&out)) EXPECT_TRUE(validate_opposite_pair(M, *r, 1e-3));
}

TEST(BHJ, QuartileOnTheLine) {
  std::vector<Vec> pts;
  for (int k = 0; k < 8; ++k) pts.push_back(v1(k + 0.5));
  auto m = uniform_measure(pts, 1e-3);
  const auto cut = expect_holds<FractionCut>(solve_bhj_fractions({m}, {0.25}, v1(20.0)));
  EXPECT_NEAR(cut.fractions[0], 0.25, 1e-3);
}

TEST(BHJ, PlanarQuarterThreeQuarters) {
  std::mt19937_64 rng(9);
  // Clusters left and right of the y-axis; no line through (0, 5) meets both.
  std::vector<Vec> pa, pb;
  for (const auto& p : gaussian_cloud(30, 2, rng)) pa.push_back(0.5 * p + v2(-3, 0));
  for (const auto& p : gaussian_cloud(30, 2, rng)) pb.push_back(0.5 * p + v2(3, 0));
  auto a = uniform_measure(pa, 1.0);
  auto b = uniform_measure(pb, 1.0);
  const double delta = default_delta({a, b});
  a.delta = b.delta = delta;
  const auto cut = expect_holds<FractionCut>(solve_bhj_fractions({a, b}, {0.25, 0.75}, v2(0, 5)));
  EXPECT_NEAR(cut.fractions[0], 0.25, 1e-3);
  EXPECT_NEAR(cut.fractions[1], 0.75, 1e-3);
  EXPECT_GT(cut.epsilon, 0);
}

TEST(BHJ, AnchorInsideTheHullIsRejected) {
  auto a = uniform_measure({v2(-1, -1), v2(1, -1), v2(0, 1)}, 1e-3);
  auto b = uniform_measure({v2(-1, 1), v2(1, 1), v2(0, -1)}, 1e-3);
  try {
    solve_bhj_fractions({a, b}, {0.25, 0.75}, v2(0, 0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidAnchor);
  }
  EXPECT_THROW(solve_bhj_fractions({a, b}, {0.0, 0.5}, v2(0, 9)), Error);
}

TEST(WellSeparated, Intervals) {
  EXPECT_TRUE(well_separated_check({{v1(0), v1(1)}, {v1(2), v1(3)}}).separated);
  const auto rep = well_separated_check({{v1(0), v1(2)}, {v1(1), v1(3)}});
  EXPECT_FALSE(rep.separated);
  EXPECT_EQ(rep.sets, (std::vector<int>{0, 1}));
}

TEST(WellSeparated, StabbingLineAndTriangles) {
  // Three collinear clusters are stabbed by the x-axis.
  const auto rep = well_separated_check({{v2(0, 0), v2(0.1, 0.1)}, {v2(2, 0), v2(2.1, -0.1)}, {v2(4, 0.05), v2(4.1, 0)}});
  EXPECT_FALSE(rep.separated);
  EXPECT_EQ(rep.sets, (std::vector<int>{0, 1, 2}));
  ASSERT_EQ(rep.transversal.size(), 3u);
  // Small clusters at the corners of a triangle.
  auto cluster = [](double x, double y) { return std::vector<Vec>{v2(x, y), v2(x + 0.1, y), v2(x, y + 0.1)}; };
  EXPECT_TRUE(well_separated_check({cluster(0, 0), cluster(4, 0), cluster(2, 3)}).separated);
  // Overlapping hulls.
  EXPECT_FALSE(well_separated_check({cluster(0, 0), cluster(0.05, 0.05), cluster(2, 3)}).separated);
  EXPECT_THROW(well_separated_check({{Vec::Zero(3)}}), Error);
}
