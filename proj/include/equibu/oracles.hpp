// Brute-force reference implementations. They share only data types and
// plain evaluators with the solvers and are meant for small inputs.
#pragma once

#include "equibu/fan.hpp"
#include "equibu/ham_sandwich.hpp"

#include <set>

namespace equibu {

/// Grid resolutions and acceptance slack for the scans below.
struct SweepConfig {
  int angles = 720;
  int offsets = 800;
  double slack = 1e-3;

  void validate() const {
    require(angles >= 8 && offsets >= 8, ErrorKind::InvalidParameter, "grid resolutions must be >= 8");
  }
};

/// Every orbit face (complementary edge for p = 2) and every target facet.
struct FanScan {
  std::vector<OrbitFace> orbit_faces;
  std::vector<TargetFacet> target_facets;

  bool contains(const FanCertificate& c) const {
    if (const auto* e = std::get_if<ComplementaryEdge>(&c))
      return std::any_of(orbit_faces.begin(), orbit_faces.end(),
                         [&](const OrbitFace& o) { return o.face == e->edge && o.block == e->label; });
    if (const auto* o = std::get_if<OrbitFace>(&c))
      return std::any_of(orbit_faces.begin(), orbit_faces.end(),
                         [&](const OrbitFace& f) { return f.face == o->face && f.block == o->block; });
    const auto& t = std::get<TargetFacet>(c);
    return std::any_of(target_facets.begin(), target_facets.end(), [&](const TargetFacet& f) { return f.facet == t.facet; });
  }
};

/// Enumerates all faces of size p and all facets; throws too-large above
/// `max_facets`.
inline FanScan exhaustive_fan_scan(const SymmetricComplex& sc, const OrbitLabeling& l,
                                   const std::vector<OrbitLabel>& target, std::size_t max_facets = 1000000) {
  require(sc.complex.facets().size() <= max_facets, ErrorKind::TooLarge,
          std::to_string(sc.complex.facets().size()) + " facets exceed the scan cap");
  const int p = sc.order();
  FanScan out;
  std::set<Face> seen;
  for (const auto& facet : sc.complex.facets()) {
    // all p-subsets of the facet
    std::vector<int> pick(static_cast<std::size_t>(p));
    std::iota(pick.begin(), pick.end(), 0);
    while (static_cast<int>(facet.size()) >= p) {
      Face f;
      for (int k : pick) f.push_back(facet[static_cast<std::size_t>(k)]);
      std::sort(f.begin(), f.end());
      if (seen.insert(f).second) {
        std::set<int> blocks, shifts;
        for (VertexId v : f) {
          blocks.insert(l.at(v).block);
          shifts.insert(l.at(v).shift);
        }
        if (blocks.size() == 1 && static_cast<int>(shifts.size()) == p) out.orbit_faces.push_back({f, *blocks.begin()});
      }
      int k = p - 1;
      while (k >= 0 && pick[static_cast<std::size_t>(k)] == static_cast<int>(facet.size()) - p + k) --k;
      if (k < 0) break;
      ++pick[static_cast<std::size_t>(k)];
      for (int m = k + 1; m < p; ++m) pick[static_cast<std::size_t>(m)] = pick[static_cast<std::size_t>(m - 1)] + 1;
    }
    std::multiset<OrbitLabel> got, want(target.begin(), target.end());
    for (VertexId v : facet) got.insert(l.at(v));
    if (got == want) {
      TargetFacet t{facet, target, {}};
      for (const auto& lab : target)
        for (VertexId v : facet)
          if (l.at(v) == lab) {
            t.matching.push_back(v);
            break;
          }
      out.target_facets.push_back(std::move(t));
    }
  }
  return out;
}

inline FanScan exhaustive_fan_scan(const SymmetricComplex& sc, const SignedLabeling& l, const std::vector<int>& signs,
                                   std::size_t max_facets = 1000000) {
  return exhaustive_fan_scan(sc, to_orbit_labeling(l), z2_target(signs), max_facets);
}

/// Uniform grid on S^d for d = 1 (resolution angles) and d = 2 (a
/// latitude-longitude grid with resolution latitudes).
inline std::vector<Vec> sphere_grid(int d, int resolution) {
  require(resolution >= 8, ErrorKind::InvalidParameter, "resolution must be >= 8");
  std::vector<Vec> out;
  if (d == 1) {
    for (int k = 0; k < resolution; ++k) {
      const double a = 2 * M_PI * k / resolution;
      Vec u(2);
      u << std::cos(a), std::sin(a);
      out.push_back(u);
    }
    return out;
  }
  require(d == 2, ErrorKind::UnsupportedDimension, "dense sphere grids are provided for d <= 2");
  for (int i = 0; i <= resolution; ++i) {
    const double theta = M_PI * i / resolution;
    const int ring = (i == 0 || i == resolution) ? 1 : std::max(8, static_cast<int>(std::lround(2 * resolution * std::sin(theta))));
    for (int k = 0; k < ring; ++k) {
      const double phi = 2 * M_PI * k / ring;
      Vec u(3);
      u << std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta);
      out.push_back(u);
    }
  }
  return out;
}

struct GridSearchResult {
  Vec best;
  double best_residual = std::numeric_limits<double>::infinity();
  std::vector<Vec> points;
  std::vector<double> residuals;
  double modulus = 0.0;  // largest residual change between points within two grid steps
};

/// Minimizer of `residual` over sphere_grid(d, resolution).
inline GridSearchResult sphere_grid_search(int d, const std::function<double(const Vec&)>& residual, int resolution) {
  GridSearchResult r;
  r.points = sphere_grid(d, resolution);
  r.residuals.resize(r.points.size());
  parallel_for(r.points.size(), [&](std::size_t k) { r.residuals[k] = residual(r.points[k]); });
  for (std::size_t k = 0; k < r.points.size(); ++k)
    if (r.residuals[k] < r.best_residual) {
      r.best_residual = r.residuals[k];
      r.best = r.points[k];
    }
  const double reach = 2.0 * (d == 1 ? 2 * M_PI : M_PI) / resolution + 1e-12;
  for (std::size_t a = 0; a < r.points.size(); ++a)
    for (std::size_t b = a + 1; b < r.points.size(); ++b)
      if ((r.points[a] - r.points[b]).norm() <= reach)
        r.modulus = std::max(r.modulus, std::abs(r.residuals[a] - r.residuals[b]));
  return r;
}

/// Smallest tolerance at which some permutation makes m a transversal
/// (m_{pi(i) i} >= 0 and maximal in absolute value in its row).
inline double transversal_residual(const Mat& m) {
  const auto n = m.rows();
  std::vector<int> pi(static_cast<std::size_t>(n));
  std::iota(pi.begin(), pi.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Index r = pi[static_cast<std::size_t>(i)];
      worst = std::max(worst, -m(r, i));
      worst = std::max(worst, m.row(r).cwiseAbs().maxCoeff() - std::abs(m(r, i)));
    }
    best = std::min(best, worst);
  } while (std::next_permutation(pi.begin(), pi.end()));
  return best;
}

/// One line of the 2-D sweep: H^+ = {x : <(cos a, sin a), x> <= offset}.
struct SweepCell {
  double angle = 0.0;
  double offset = 0.0;
  double residual = 0.0;
  Vec u;
};

struct LineSweepResult {
  std::vector<SweepCell> solutions;  // cells with residual <= slack
  SweepCell best;
  double modulus = 0.0;  // largest residual change between neighbouring cells
};

/// Evaluates `constraint` on the fractions mu_i(H^+) / mu_i(R^2) over an
/// (angle, offset) grid covering every line that meets the points.
inline LineSweepResult line_sweep_2d(const std::vector<SmoothedPointMeasure>& ms,
                                     const std::function<double(const std::vector<double>&)>& constraint,
                                     SweepConfig cfg = {}) {
  cfg.validate();
  double radius = 0.0, delta = 0.0;
  for (const auto& m : ms) {
    require(m.dimension() == 2 && m.total() > 0, ErrorKind::InvalidInput, "line sweeps need planar measures");
    for (const auto& p : m.points) radius = std::max(radius, p.norm());
    delta = std::max(delta, m.delta);
  }
  radius += delta;
  const int na = cfg.angles, nb = cfg.offsets;
  std::vector<double> res(static_cast<std::size_t>(na) * static_cast<std::size_t>(nb));
  auto make_u = [&](int a, int b) {
    const double angle = 2 * M_PI * a / na;
    const double offset = -radius + 2 * radius * b / (nb - 1);
    Vec n(2);
    n << std::cos(angle), std::sin(angle);
    return std::make_tuple(angle, offset, hyperplane_from(n, offset));
  };
  parallel_for(res.size(), [&](std::size_t idx) {
    const auto [angle, offset, u] = make_u(static_cast<int>(idx / nb), static_cast<int>(idx % nb));
    std::vector<double> frac;
    for (const auto& m : ms) frac.push_back(halfspace_value(m, u) / m.total());
    res[idx] = constraint(frac);
  });
  LineSweepResult out;
  out.best.residual = std::numeric_limits<double>::infinity();
  for (int a = 0; a < na; ++a)
    for (int b = 0; b < nb; ++b) {
      const double r = res[static_cast<std::size_t>(a) * nb + b];
      const double right = res[static_cast<std::size_t>((a + 1) % na) * nb + b];
      out.modulus = std::max(out.modulus, std::abs(r - right));
      if (b + 1 < nb) out.modulus = std::max(out.modulus, std::abs(r - res[static_cast<std::size_t>(a) * nb + b + 1]));
      if (r <= cfg.slack || r < out.best.residual) {
        const auto [angle, offset, u] = make_u(a, b);
        SweepCell c{angle, offset, r, u};
        if (r < out.best.residual) out.best = c;
        if (r <= cfg.slack) out.solutions.push_back(c);
      }
    }
  return out;
}

}  // namespace equibu
