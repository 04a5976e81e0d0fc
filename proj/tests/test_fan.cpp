#include "equibu/fan.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace equibu;
using equibu::testing::all_sign_vectors;
using equibu::testing::random_antipodal_labeling;
using equibu::testing::random_equivariant_labeling;

TEST(FanZ2, SquareIdentityLabelingGivesTargetFacet) {
  auto sq = crosspolytope(2);
  SignedLabeling l{{1, 1}, {2, 2}, {-1, -1}, {-2, -2}};
  auto cert = solve_fan_z2(sq, l, {1, 1});
  ASSERT_TRUE(std::holds_alternative<TargetFacet>(cert));
  EXPECT_EQ(std::get<TargetFacet>(cert).facet, (Face{1, 2}));
  EXPECT_EQ(std::get<TargetFacet>(cert).matching, (std::vector<VertexId>{1, 2}));
  EXPECT_TRUE(validate_certificate(sq, l, {1, 1}, cert));
}

TEST(FanZ2, SquareMixedLabelingGivesComplementaryEdge) {
  auto sq = crosspolytope(2);
  SignedLabeling l{{1, 1}, {2, -1}, {-1, -1}, {-2, 1}};
  auto cert = solve_fan_z2(sq, l, {1, 1});
  ASSERT_TRUE(std::holds_alternative<ComplementaryEdge>(cert));
  EXPECT_EQ(std::get<ComplementaryEdge>(cert).edge, (Face{1, 2}));
  EXPECT_EQ(std::get<ComplementaryEdge>(cert).label, 1);
}

TEST(FanZ2, SignVectorSelectsFacet) {
  auto sq = crosspolytope(2);
  SignedLabeling l{{1, 1}, {2, 2}, {-1, -1}, {-2, -2}};
  auto cert = solve_fan_z2(sq, l, {1, -1});
  ASSERT_TRUE(std::holds_alternative<TargetFacet>(cert));
  EXPECT_EQ(std::get<TargetFacet>(cert).facet, (Face{-2, 1}));
}

TEST(FanZ2, RejectsNonAntipodalAndOutOfRange) {
  auto sq = crosspolytope(2);
  SignedLabeling bad{{1, 1}, {2, 2}, {-1, 1}, {-2, -2}};
  try {
    solve_fan_z2(sq, bad, {1, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidLabeling);
  }
  SignedLabeling range{{1, 3}, {2, 2}, {-1, -3}, {-2, -2}};
  EXPECT_THROW(solve_fan_z2(sq, range, {1, 1}), Error);
}

TEST(FanZ2, EdgesTakePriorityOverFacets) {
  // Both alternatives present: +1 next to -1 on one edge, and {+1,+2} elsewhere.
  auto sq = barycentric_subdivide(crosspolytope(2));
  std::mt19937 rng(7);
  int both = 0;
  for (int trial = 0; trial < 200; ++trial) {
    auto l = random_antipodal_labeling(sq, 2, rng);
    auto cert = solve_fan_z2(sq, l, {1, 1});
    EXPECT_TRUE(validate_certificate(sq, l, {1, 1}, cert));
    bool has_edge = false;
    for (const auto& f : sq.complex.facets()) has_edge |= l.at(f[0]) == -l.at(f[1]);
    EXPECT_EQ(has_edge, std::holds_alternative<ComplementaryEdge>(cert));
    both += has_edge ? 1 : 0;
  }
  EXPECT_GT(both, 0);
}

TEST(FanZ2, ExistenceOnSubdividedOctahedron) {
  auto sc = subdivide(crosspolytope(3), 2);
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    auto l = random_antipodal_labeling(sc, 3, rng);
    for (const auto& s : all_sign_vectors(3)) {
      auto cert = solve_fan_z2(sc, l, s);
      ASSERT_TRUE(validate_certificate(sc, l, s, cert));
    }
  }
}

TEST(FanZp, TriangleBoundaryIdentityLabeling) {
  auto tri = zp_join_sphere(3, 1);
  OrbitLabeling l{{0, {1, 0}}, {1, {1, 1}}, {2, {1, 2}}};
  auto cert = solve_fan_zp(tri, l, {0});
  ASSERT_TRUE(std::holds_alternative<TargetFacet>(cert));
  const auto& t = std::get<TargetFacet>(cert);
  EXPECT_EQ(t.facet, (Face{1, 2}));
  EXPECT_EQ(t.labels, (std::vector<OrbitLabel>{{1, 1}, {1, 2}}));
  EXPECT_TRUE(validate_certificate(tri, l, zp_target(3, {0}), cert));
}

TEST(FanZp, P2AgreesWithZ2Solver) {
  // zp_join_sphere(2, 2) vertex (j, t) has id 2j + t; the crosspolytope vertex is +-(j+1).
  auto z = zp_join_sphere(2, 2);
  auto sq = crosspolytope(2);
  auto to_cross = [](VertexId v) { return (v / 2 + 1) * (v % 2 == 0 ? 1 : -1); };
  std::mt19937 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    auto lz = random_equivariant_labeling(z, 2, rng);
    SignedLabeling ls;
    for (const auto& [v, lab] : lz) ls[to_cross(v)] = to_signed(lab);
    for (const auto& s : all_sign_vectors(2)) {
      std::vector<int> shifts;
      for (int si : s) shifts.push_back(si > 0 ? 1 : 0);  // excluded shift
      auto cz = solve_fan_zp(z, lz, shifts);
      auto cs = solve_fan_z2(sq, ls, s);
      Face fz;
      if (auto* e = std::get_if<ComplementaryEdge>(&cz)) fz = e->edge;
      if (auto* t = std::get_if<TargetFacet>(&cz)) fz = t->facet;
      Face fs;
      if (auto* e = std::get_if<ComplementaryEdge>(&cs)) fs = e->edge;
      if (auto* t = std::get_if<TargetFacet>(&cs)) fs = t->facet;
      for (auto& v : fz) v = to_cross(v);
      std::sort(fz.begin(), fz.end());
      EXPECT_EQ(cz.index(), cs.index());
      if (std::holds_alternative<TargetFacet>(cz)) {
        EXPECT_EQ(fz, fs);
      } else {
        // both are complementary edges; the canonical choice may differ after relabelling ids
        EXPECT_TRUE(validate_certificate(sq, ls, s, cs));
      }
    }
  }
}

TEST(FanZp, RandomLabelingsOnJoinSphere) {
  std::mt19937 rng(11);
  for (int level = 0; level <= 1; ++level) {
    auto z = subdivide(zp_join_sphere(3, 2), level);
    for (int trial = 0; trial < 50; ++trial) {
      auto l = random_equivariant_labeling(z, 2, rng);
      std::vector<int> shifts{static_cast<int>(rng() % 3), static_cast<int>(rng() % 3)};
      auto cert = solve_fan_zp(z, l, shifts);
      EXPECT_TRUE(validate_certificate(z, l, zp_target(3, shifts), cert));
    }
  }
}

TEST(FanZp, RejectsNonEquivariantLabeling) {
  auto tri = zp_join_sphere(3, 1);
  OrbitLabeling l{{0, {1, 0}}, {1, {1, 0}}, {2, {1, 2}}};
  try {
    solve_fan_zp(tri, l, {0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidLabeling);
  }
}

TEST(ForcedOrbitFace, CircleWithOneLabelPair) {
  auto sc = subdivide(crosspolytope(2), 2);
  std::mt19937 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    auto l = to_orbit_labeling(random_antipodal_labeling(sc, 1, rng));
    auto face = forced_orbit_face(sc, l);
    EXPECT_EQ(face.face.size(), 2u);
    EXPECT_EQ(face.block, 1);
    EXPECT_NE(l.at(face.face[0]).shift, l.at(face.face[1]).shift);
  }
}

TEST(ForcedOrbitFace, AllOctahedronLabelingsIntoTwoPairs) {
  // Brute force: every antipodal labeling of the octahedron into +-[2].
  auto oct = crosspolytope(3);
  const std::vector<int> choices{1, -1, 2, -2};
  for (int a : choices)
    for (int b : choices)
      for (int c : choices) {
        SignedLabeling l{{1, a}, {2, b}, {3, c}, {-1, -a}, {-2, -b}, {-3, -c}};
        auto face = forced_orbit_face(oct, to_orbit_labeling(l));
        EXPECT_EQ(l.at(face.face[0]), -l.at(face.face[1]));
      }
}

TEST(ForcedOrbitFace, RotationOctahedronZ3) {
  auto sc = equibu::testing::rotation_octahedron();
  std::mt19937 rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    auto l = random_equivariant_labeling(sc, 1, rng);
    auto face = forced_orbit_face(sc, l);
    EXPECT_EQ(face.face.size(), 3u);
    std::set<int> shifts;
    for (VertexId v : face.face) shifts.insert(l.at(v).shift);
    EXPECT_EQ(shifts.size(), 3u);
  }
}

namespace {

CoverFamilySet arcs_family(std::vector<std::vector<CoverOracle>> families) {
  CoverFamilySet fs;
  fs.p = 2;
  fs.action = -Mat::Identity(2, 2);
  fs.families = std::move(families);
  return fs;
}

}  // namespace

TEST(Rainbow, UncoloredLabelingIsAntipodalAndSound) {
  auto fs = arcs_family({{arc_set(-45, 45), arc_set(45, 135)}});
  auto sc = subdivide(crosspolytope(2), 3);
  auto res = rainbow_labeling(sc, fs);
  ASSERT_TRUE(std::holds_alternative<OrbitLabeling>(res));
  const auto& l = std::get<OrbitLabeling>(res);
  EXPECT_NO_THROW(check_orbit_labeling(sc, l, 2));
  for (const auto& [v, lab] : l) EXPECT_TRUE(fs.contains(0, lab.block - 1, lab.shift, sc.coord(v)));
}

TEST(Rainbow, TwoFamiliesOfArcs) {
  auto fs = arcs_family({{arc_set(-45, 45), arc_set(45, 135)}, {arc_set(-35, 55), arc_set(55, 145)}});
  auto sc = subdivide(crosspolytope(2), 3);
  auto res = rainbow_labeling(sc, fs);
  ASSERT_TRUE(std::holds_alternative<OrbitLabeling>(res));
  const auto& l = std::get<OrbitLabeling>(res);
  EXPECT_NO_THROW(check_orbit_labeling(sc, l, 2));
  for (const auto& [v, lab] : l) EXPECT_TRUE(fs.contains(sc.rank_of(v) - 1, lab.block - 1, lab.shift, sc.coord(v)));
}

TEST(Rainbow, TieRuleLowestIndexPositive) {
  // e_1 lies in both arcs; the lowest set with shift 0 wins.
  auto fs = arcs_family({{arc_set(-90, 90), arc_set(-10, 180)}});
  PointLabeler lab(fs, false, false);
  auto out = lab(Vec::Unit(2, 0), 0);
  ASSERT_TRUE(out.label.has_value());
  EXPECT_EQ(*out.label, (OrbitLabel{1, 0}));
}

TEST(Rainbow, CoverGapIsReported) {
  auto fs = arcs_family({{arc_set(0, 20), arc_set(60, 80)}});
  auto sc = subdivide(crosspolytope(2), 2);
  auto res = rainbow_labeling(sc, fs);
  ASSERT_TRUE(std::holds_alternative<Violation>(res));
  EXPECT_EQ(std::get<Violation>(res).kind, ViolationKind::CoverGap);
  EXPECT_TRUE(validate_violation(fs, std::get<Violation>(res), 0.0));
}

TEST(Rainbow, ZpLabelingIsEquivariant) {
  CoverFamilySet fs;
  fs.p = 3;
  fs.action = cyclic_rotation(3);
  // arcs relative to the realization angle of vertex 0
  const Vec v0 = zp_join_sphere(3, 1).coords[0];
  const double base = std::atan2(v0[1], v0[0]) * 180 / std::numbers::pi;
  fs.families = {{arc_set(base - 65, base + 65)}};
  auto sc = subdivide(zp_join_sphere(3, 1), 3);
  auto res = rainbow_labeling(sc, fs);
  ASSERT_TRUE(std::holds_alternative<OrbitLabeling>(res));
  EXPECT_NO_THROW(check_orbit_labeling(sc, std::get<OrbitLabeling>(res), 1));
}
