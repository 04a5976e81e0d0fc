#include "equibu/cover.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace equibu;

namespace {

constexpr double kTol = 1e-3;

CoverFamilySet circle_z2(std::vector<std::vector<CoverOracle>> families) {
  CoverFamilySet fs;
  fs.p = 2;
  fs.action = -Mat::Identity(2, 2);
  fs.families = std::move(families);
  return fs;
}

CoverFamilySet circle_z3(std::vector<std::vector<CoverOracle>> families) {
  CoverFamilySet fs;
  fs.p = 3;
  fs.action = zp_action(3, 1);
  fs.families = std::move(families);
  return fs;
}

double angle_deg(const Vec& x) { return std::atan2(x[1], x[0]) * 180.0 / std::numbers::pi; }

CoverWitness expect_witness(const CoverOutcome& out) {
  if (const auto* v = std::get_if<Violation>(&out)) ADD_FAILURE() << "violation: " << to_string(v->kind);
  if (const auto* i = std::get_if<Inconclusive>(&out)) ADD_FAILURE() << "inconclusive: " << i->reason;
  if (!std::holds_alternative<CoverWitness>(out)) return {};
  return std::get<CoverWitness>(out);
}

// Oracle: the arcs' intersection endpoints computed by a dense 1-D sweep.
std::pair<double, double> sweep_intersection(const std::function<bool(const Vec&)>& in) {
  double lo = 1e9, hi = -1e9;
  for (int k = 0; k < 360000; ++k) {
    const double a = -180.0 + k * 0.001;
    Vec x(2);
    x << std::cos(a * std::numbers::pi / 180), std::sin(a * std::numbers::pi / 180);
    if (in(x)) {
      lo = std::min(lo, a);
      hi = std::max(hi, a);
    }
  }
  return {lo, hi};
}

}  // namespace

TEST(FanCover, TwoQuarterArcsPositiveSigns) {
  auto fs = circle_z2({{arc_set(-45, 45), arc_set(45, 135)}});
  const auto w = expect_witness(solve_fan_cover(fs, {1, 1}));
  EXPECT_NEAR(w.point[0], std::sqrt(0.5), 2 * kTol);
  EXPECT_NEAR(w.point[1], std::sqrt(0.5), 2 * kTol);
  EXPECT_TRUE(validate_cover_witness(fs, w, kTol));
  EXPECT_LE(w.residual(), kTol);
}

TEST(FanCover, MixedSigns) {
  auto fs = circle_z2({{arc_set(-45, 45), arc_set(45, 135)}});
  const auto w = expect_witness(solve_fan_cover(fs, {1, -1}));
  EXPECT_NEAR(angle_deg(w.point), -45.0, 0.2);
  EXPECT_TRUE(validate_cover_witness(fs, w, kTol));
}

TEST(FanCover, ResidualsAreMonotone) {
  auto fs = circle_z2({{arc_set(-45, 45), arc_set(45, 135)}});
  const auto w = expect_witness(solve_fan_cover(fs, {1, 1}));
  for (std::size_t k = 1; k < w.history.size(); ++k) EXPECT_LE(w.history[k], w.history[k - 1]);
}

TEST(FanCover, LongArcViolatesDisjointness) {
  auto fs = circle_z2({{arc_set(-100, 100), arc_set(100, 160)}});
  auto out = solve_fan_cover(fs, {1, 1});
  ASSERT_TRUE(std::holds_alternative<Violation>(out));
  const auto& v = std::get<Violation>(out);
  EXPECT_EQ(v.kind, ViolationKind::Disjointness);
  EXPECT_EQ(v.set, 0);
  EXPECT_TRUE(validate_violation(fs, v, kTol));
}

TEST(FanCover, GapIsReported) {
  auto fs = circle_z2({{arc_set(0, 30), arc_set(60, 80)}});
  auto out = solve_fan_cover(fs, {1, 1});
  ASSERT_TRUE(std::holds_alternative<Violation>(out));
  EXPECT_EQ(std::get<Violation>(out).kind, ViolationKind::CoverGap);
}

TEST(FanCover, OctahedralCapsOnS2) {
  // caps of radius 60 deg around e_1, e_2, e_3 with antipodes cover S^2
  std::vector<CoverOracle> caps;
  for (int k = 0; k < 3; ++k) caps.push_back(cap_set(Vec::Unit(3, k), 60));
  CoverFamilySet fs;
  fs.p = 2;
  fs.action = -Mat::Identity(3, 3);
  fs.families = {caps};
  for (auto s : std::vector<std::vector<int>>{{1, 1, 1}, {1, -1, 1}}) {
    const auto w = expect_witness(solve_fan_cover(fs, s));
    EXPECT_TRUE(validate_cover_witness(fs, w, kTol));
  }
}

TEST(ColorfulFanCover, EqualFamiliesSatisfyUncoloredPostcondition) {
  auto arcs = std::vector<CoverOracle>{arc_set(-45, 45), arc_set(45, 135)};
  auto fs = circle_z2({arcs, arcs});
  const auto w = expect_witness(solve_colorful_fan_cover(fs, {1, 1}));
  EXPECT_NEAR(angle_deg(w.point), 45.0, 0.2);
  auto single = circle_z2({arcs});
  CoverWitness as_uncolored = w;
  std::fill(as_uncolored.assignment.begin(), as_uncolored.assignment.end(), 0);
  EXPECT_TRUE(validate_cover_witness(single, as_uncolored, kTol));
}

TEST(ColorfulFanCover, RotatedSecondFamily) {
  auto fs = circle_z2({{arc_set(-45, 45), arc_set(45, 135)}, {arc_set(-35, 55), arc_set(55, 145)}});
  const auto w = expect_witness(solve_colorful_fan_cover(fs, {1, 1}));
  EXPECT_TRUE(validate_cover_witness(fs, w, kTol));
  std::vector<int> sorted = w.assignment;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(sorted, (std::vector<int>{0, 1}));
  // sweep oracle: the witness lies in the intersection chosen by pi
  auto [lo, hi] = sweep_intersection([&](const Vec& x) {
    return fs.contains(w.assignment[0], 0, 0, x) && fs.contains(w.assignment[1], 1, 0, x);
  });
  EXPECT_GE(angle_deg(w.point), lo - 0.1);
  EXPECT_LE(angle_deg(w.point), hi + 0.1);
}

TEST(ColorfulFanCover, AntipodalFamiliesViolateCrossCondition) {
  auto fs = circle_z2({{arc_set(-45, 45), arc_set(45, 135)}, {arc_set(135, 225), arc_set(225, 315)}});
  auto out = solve_colorful_fan_cover(fs, {1, 1});
  ASSERT_TRUE(std::holds_alternative<Violation>(out));
  const auto& v = std::get<Violation>(out);
  EXPECT_EQ(v.kind, ViolationKind::CrossDisjointness);
  EXPECT_TRUE(validate_violation(fs, v, kTol));
}

TEST(ColorfulFanCover, PerturbedCapsOnS2) {
  std::vector<std::vector<CoverOracle>> families;
  for (int j = 0; j < 3; ++j) {
    std::vector<CoverOracle> caps;
    for (int k = 0; k < 3; ++k) {
      Vec c = Vec::Unit(3, k);
      c[(k + 1) % 3] += 0.05 * j;
      caps.push_back(cap_set(c, 60));
    }
    families.push_back(caps);
  }
  CoverFamilySet fs;
  fs.p = 2;
  fs.action = -Mat::Identity(3, 3);
  fs.families = families;
  const auto w = expect_witness(solve_colorful_fan_cover(fs, {1, 1, 1}));
  EXPECT_TRUE(validate_cover_witness(fs, w, kTol));
}

TEST(ZpCover, P2MatchesFanCover) {
  auto fs = circle_z2({{arc_set(-45, 45), arc_set(45, 135)}});
  const auto a = expect_witness(solve_fan_cover(fs, {1, -1}));
  // sign +1 excludes shift 1 (the label -i); sign -1 excludes shift 0
  const auto b = expect_witness(solve_zp_cover(fs, {1, 0}));
  EXPECT_EQ(a.point, b.point);
}

TEST(ZpCover, ThirdTurnArcs) {
  auto fs = circle_z3({{arc_set(-65, 65)}});
  const auto w = expect_witness(solve_zp_cover(fs, {0}));
  EXPECT_TRUE(validate_cover_witness(fs, w, kTol));
  EXPECT_NEAR(std::abs(angle_deg(w.point)), 180.0, 5.0 + 0.1);
}

TEST(ZpCover, HugeArcHitsFullOrbit) {
  auto fs = circle_z3({{arc_set(-130, 130)}});
  auto out = solve_zp_cover(fs, {0});
  ASSERT_TRUE(std::holds_alternative<Violation>(out));
  EXPECT_EQ(std::get<Violation>(out).kind, ViolationKind::OrbitIntersection);
  EXPECT_TRUE(validate_violation(fs, std::get<Violation>(out), kTol));
}

TEST(ColorfulZpCover, EqualFamiliesAgreeWithUncolored) {
  auto fs = circle_z3({{arc_set(-65, 65)}, {arc_set(-65, 65)}});
  const auto w = expect_witness(solve_colorful_zp_cover(fs, {0}));
  EXPECT_TRUE(validate_cover_witness(fs, w, kTol));
  EXPECT_NEAR(std::abs(angle_deg(w.point)), 180.0, 5.1);
}

TEST(ColorfulZpCover, NearlyIdenticalRotatedFamilies) {
  auto fs = circle_z3({{arc_set(-65, 65)}, {arc_set(-60, 70)}});
  for (int shift = 0; shift < 3; ++shift) {
    const auto w = expect_witness(solve_colorful_zp_cover(fs, {shift}));
    EXPECT_TRUE(validate_cover_witness(fs, w, kTol));
    EXPECT_NE(w.assignment[0], w.assignment[1]);
  }
}

TEST(ColorfulZpCover, P2SpecializesToColorfulFan) {
  auto fs = circle_z2({{arc_set(-45, 45), arc_set(45, 135)}, {arc_set(-35, 55), arc_set(55, 145)}});
  const auto a = expect_witness(solve_colorful_fan_cover(fs, {1, 1}));
  const auto b = expect_witness(solve_colorful_zp_cover(fs, {1, 1}));
  EXPECT_EQ(a.point, b.point);
  EXPECT_EQ(a.assignment, b.assignment);
}

TEST(ZpCover, JoinSphereS3) {
  // p = 3, d = 2: S^3 in R^4 with caps around the first vertex of each block
  auto z = zp_join_sphere(3, 2);
  CoverFamilySet fs;
  fs.p = 3;
  fs.action = z.action.geometric;
  fs.families = {{cap_set(z.coords[0], 80), cap_set(z.coords[3], 80)}};
  auto out = solve_zp_cover(fs, {0, 0});
  if (auto* w = std::get_if<CoverWitness>(&out)) {
    EXPECT_TRUE(validate_cover_witness(fs, *w, kTol));
  } else if (auto* v = std::get_if<Violation>(&out)) {
    EXPECT_TRUE(validate_violation(fs, *v, kTol)) << to_string(v->kind);
  } else {
    FAIL() << std::get<Inconclusive>(out).reason;
  }
}

TEST(CoverConfig, RejectsBadParameters) {
  auto fs = circle_z2({{arc_set(-45, 45), arc_set(45, 135)}});
  RefinementConfig cfg;
  cfg.max_depth = 0;
  EXPECT_THROW(solve_fan_cover(fs, {1, 1}, cfg), Error);
  cfg.max_depth = 2;
  cfg.witness_tol = 0;
  EXPECT_THROW(solve_fan_cover(fs, {1, 1}, cfg), Error);
}
