#include "equibu/kkm.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace equibu;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

Vec bary(int dim) { return Vec::Constant(dim, 1.0 / dim); }

template <class T>
T expect_witness(const SimplexOutcome& out) {
  if (const auto* inc = std::get_if<Inconclusive>(&out)) ADD_FAILURE() << "inconclusive: " << inc->reason;
  const auto& w = std::get<SimplexWitness>(out);
  EXPECT_TRUE(std::holds_alternative<T>(w)) << "unexpected witness variant " << w.index();
  return std::get<T>(w);
}

// Random contraction h(x) = c + k (x - c) mixed with a random stochastic matrix.
SimplexMap random_contraction(int dim, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  Mat P(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) P(r, c) = u(rng);
    P.row(r) /= P.row(r).sum();
  }
  Vec c(dim);
  for (int k = 0; k < dim; ++k) c[k] = u(rng);
  c /= c.sum();
  const double k = 0.5 * u(rng);
  return [P, c, k](const Vec& x) -> Vec { return (1 - k) * c + k * (P.transpose() * x); };
}

}  // namespace

TEST(DeletedJoin, VerticesAndMidpoints) {
  // +e_1 is the vertex x = e_1 with lambda = 1; -e_2 is y = e_2 with lambda = 0
  auto p = to_deleted_join(v2(1, 0));
  EXPECT_EQ(p.lambda, 1.0);
  EXPECT_EQ(p.x, v2(1, 0));
  auto q = to_deleted_join(v2(0, -1));
  EXPECT_EQ(q.lambda, 0.0);
  EXPECT_EQ(q.y, v2(0, 1));
  auto m = to_deleted_join(v2(1, -1).normalized());
  EXPECT_DOUBLE_EQ(m.lambda, 0.5);
  EXPECT_TRUE(from_deleted_join(m).isApprox(v2(1, -1).normalized()));
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int t = 0; t < 100; ++t) {
    Vec z(4);
    z << g(rng), g(rng), g(rng), g(rng);
    z.normalize();
    EXPECT_LT((from_deleted_join(to_deleted_join(z)) - z).norm(), 1e-12);
  }
}

TEST(RadonKKM, IdentityGivesIntersection) {
  for (int d = 1; d <= 3; ++d) {
    SimplexMap id = [](const Vec& x) { return x; };
    const auto w = expect_witness<Intersection>(radon_kkm_alternative(d, id));
    EXPECT_GT(w.x.minCoeff(), 0.0);
    EXPECT_TRUE(w.x.isApprox(bary(d + 1), 1e-3));
    EXPECT_TRUE(validate_radon_kkm(id, SimplexWitness{w}, 1e-3));
  }
}

TEST(RadonKKM, ConstantGivesRadonPartitionAtHalf) {
  for (int d = 1; d <= 3; ++d) {
    SimplexMap e1 = [d](const Vec&) {
      Vec v = Vec::Zero(d + 1);
      v[0] = 1;
      return v;
    };
    const auto r = expect_witness<RadonPartition>(radon_kkm_alternative(d, e1));
    EXPECT_NEAR(r.lambda, 0.5, 1e-6);
    EXPECT_EQ(r.gap, 0.0);
    EXPECT_TRUE(validate_radon_kkm(e1, SimplexWitness{r}, 1e-3));
  }
}

TEST(RadonKKM, MapIntoFacetForcesRadon) {
  // alpha lands in the facet x_3 = 0, so A_3 is empty and no intersection exists
  SimplexMap a = [](const Vec& x) {
    Vec v(3);
    v << x[0] + 0.5 * x[2], x[1] + 0.5 * x[2], 0.0;
    return v;
  };
  const auto r = expect_witness<RadonPartition>(radon_kkm_alternative(2, a));
  EXPECT_TRUE(validate_radon_kkm(a, SimplexWitness{r}, 1e-3));
}

TEST(RadonKKM, SwapMapAgreesWithSweep) {
  SimplexMap swap = [](const Vec& x) { return v2(x[1], x[0]); };
  // Oracle: the swap has no Radon partition (alpha(e_1) = e_2 != e_1 = alpha(e_2)),
  // and alpha(x) > 0 exactly on the open segment.
  const auto out = radon_kkm_alternative(1, swap);
  const auto w = expect_witness<Intersection>(out);
  EXPECT_TRUE(validate_radon_kkm(swap, SimplexWitness{w}, 1e-3));
}

TEST(ColorfulKKM, IdentityMaps) {
  std::vector<SimplexMap> maps(3, [](const Vec& x) { return x; });
  const auto w = expect_witness<Intersection>(solve_colorful_kkm(maps));
  EXPECT_TRUE(validate_colorful_kkm(maps, w, 1e-3));
  EXPECT_TRUE(w.x.isApprox(bary(3), 2e-3));
}

TEST(ColorfulKKM, SquaredMapAgreesWithSweep) {
  std::vector<SimplexMap> maps = {[](const Vec& x) { return x; },
                                  [](const Vec& x) { return v2(x[0] * x[0], 1 - x[0] * x[0]); }};
  const auto w = expect_witness<Intersection>(solve_colorful_kkm(maps));
  EXPECT_TRUE(validate_colorful_kkm(maps, w, 1e-3));
  // Oracle: sweep Delta_1 for points admitting some permutation.
  int hits = 0;
  for (int k = 0; k <= 10000; ++k) {
    const double t = k / 10000.0;
    const Vec x = v2(t, 1 - t);
    for (std::vector<int> pi : {std::vector<int>{0, 1}, std::vector<int>{1, 0}})
      if (validate_colorful_kkm(maps, Intersection{x, pi, {}}, 0.0)) ++hits;
  }
  EXPECT_GT(hits, 0);
}

TEST(ColorfulKKM, RejectsFaceBreach) {
  std::vector<SimplexMap> maps = {[](const Vec& x) { return x; }, [](const Vec&) { return v2(0.5, 0.5); }};
  EXPECT_THROW(solve_colorful_kkm(maps), Error);
}

TEST(ColorfulKKMCovers, StandardPair) {
  const double m = 1e-3;
  std::vector<DepthFunction> cover = {[m](const Vec& x) { return x[0] - (1.0 / 3 - m); },
                                      [m](const Vec& x) { return x[1] - (1.0 / 3 - m); }};
  std::vector<std::vector<DepthFunction>> covers = {cover, cover};
  const auto w = expect_witness<Intersection>(solve_colorful_kkm_covers(covers));
  EXPECT_TRUE(validate_kkm_covers(covers, w, 1e-3));
  EXPECT_GE(w.x[0], 1.0 / 3 - m - 1e-3);
  EXPECT_GE(w.x[1], 1.0 / 3 - m - 1e-3);
}

TEST(ColorfulKKMCovers, PerturbedFamilies) {
  auto make = [](double c0, double c1, double c2) {
    return std::vector<DepthFunction>{[c0](const Vec& x) { return x[0] - c0; }, [c1](const Vec& x) { return x[1] - c1; },
                                      [c2](const Vec& x) { return x[2] - c2; }};
  };
  std::vector<std::vector<DepthFunction>> covers = {make(0.3, 0.3, 0.3), make(0.32, 0.28, 0.3), make(0.25, 0.33, 0.31)};
  const auto w = expect_witness<Intersection>(solve_colorful_kkm_covers(covers));
  EXPECT_TRUE(validate_kkm_covers(covers, w, 1e-3));
}

TEST(ColorfulKKMCovers, RejectsNonKKM) {
  std::vector<DepthFunction> bad = {[](const Vec& x) { return x[1] - 0.5; }, [](const Vec& x) { return x[0] - 0.5; }};
  EXPECT_THROW(solve_colorful_kkm_covers({bad, bad}), Error);
}

TEST(ColorfulBrouwer, ConstantRowsGiveFixedPoint) {
  Vec c(3);
  c << 0.2, 0.5, 0.3;
  StochasticMatrixField f = [c](const Vec&) {
    Mat m(3, 3);
    for (int r = 0; r < 3; ++r) m.row(r) = c.transpose();
    return m;
  };
  const auto b = expect_witness<BrouwerColorful>(solve_colorful_brouwer(2, f));
  EXPECT_TRUE(validate_colorful_brouwer(f, b, 1e-3));
  EXPECT_LE((b.x - c).lpNorm<1>(), 3e-3);
}

TEST(ColorfulBrouwer, RandomContractionsAllRowsEqual) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 5; ++t) {
    auto h = random_contraction(3, rng);
    StochasticMatrixField f = [h](const Vec& x) {
      Mat m(3, 3);
      const Vec v = h(x);
      for (int r = 0; r < 3; ++r) m.row(r) = v.transpose();
      return m;
    };
    const auto b = expect_witness<BrouwerColorful>(solve_colorful_brouwer(2, f));
    EXPECT_TRUE(validate_colorful_brouwer(f, b, 1e-3));
    EXPECT_LE((h(b.x) - b.x).lpNorm<1>(), 3e-3) << "trial " << t;
  }
}

TEST(ColorfulBrouwer, MixedRowsAgreeWithSweep) {
  StochasticMatrixField f = [](const Vec& x) {
    Mat m(2, 2);
    m << x[1], x[0], x[0], x[1];
    return m;
  };
  const auto b = expect_witness<BrouwerColorful>(solve_colorful_brouwer(1, f));
  EXPECT_TRUE(validate_colorful_brouwer(f, b, 1e-3));
  bool any = false;
  for (int k = 0; k <= 1000 && !any; ++k) {
    const double t = k / 1000.0;
    for (std::vector<int> pi : {std::vector<int>{0, 1}, std::vector<int>{1, 0}})
      any = any || validate_colorful_brouwer(f, BrouwerColorful{v2(t, 1 - t), pi, {}}, 0.0);
  }
  EXPECT_TRUE(any);
}

TEST(ColorfulBrouwer, RejectsNonStochastic) {
  StochasticMatrixField f = [](const Vec&) { return Mat(Mat::Constant(2, 2, 0.7)); };
  EXPECT_THROW(solve_colorful_brouwer(1, f), Error);
}
