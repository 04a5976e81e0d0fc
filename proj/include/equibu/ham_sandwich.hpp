// Measure-partition solvers on smoothed point clouds: colorful and
// equalizing ham sandwich cuts, prescribed fractions, well-separation checks
// and the naive two-family scan.
#pragma once

#include "equibu/matrix_bu.hpp"

#include <optional>
#include <random>

namespace equibu {

/// Weighted points whose halfspace masses use a linear ramp of width delta
/// across the boundary. An empty measure has total mass 0.
struct SmoothedPointMeasure {
  std::vector<Vec> points;
  std::vector<double> weights;
  double delta = 1e-3;

  double total() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }
  int dimension() const { return points.empty() ? -1 : static_cast<int>(points.front().size()); }
};

inline void check_measure(const SmoothedPointMeasure& m) {
  require(m.delta > 0, ErrorKind::InvalidParameter, "ramp width must be positive");
  require(m.points.size() == m.weights.size(), ErrorKind::InvalidInput, "points and weights differ in length");
  for (std::size_t k = 0; k < m.points.size(); ++k) {
    require(m.weights[k] > 0, ErrorKind::InvalidInput, "weights must be positive");
    require(m.points[k].size() == m.points.front().size(), ErrorKind::InvalidInput, "mixed point dimensions");
  }
}

/// Uniform weights summing to `mass`.
inline SmoothedPointMeasure uniform_measure(std::vector<Vec> points, double delta, double mass = 1.0) {
  SmoothedPointMeasure m;
  m.weights.assign(points.size(), points.empty() ? 0.0 : mass / static_cast<double>(points.size()));
  m.points = std::move(points);
  m.delta = delta;
  return m;
}

inline double cloud_diameter(const std::vector<SmoothedPointMeasure>& ms) {
  double diam = 0.0;
  std::vector<const Vec*> all;
  for (const auto& m : ms)
    for (const auto& p : m.points) all.push_back(&p);
  for (std::size_t a = 0; a < all.size(); ++a)
    for (std::size_t b = a + 1; b < all.size(); ++b) diam = std::max(diam, (*all[a] - *all[b]).norm());
  return diam;
}

/// 1e-3 times the diameter of all points (1e-3 for a single point).
inline double default_delta(const std::vector<SmoothedPointMeasure>& ms) {
  const double diam = cloud_diameter(ms);
  return 1e-3 * (diam > 0 ? diam : 1.0);
}

/// mu(H^+(u)) with H^+(u) = {x : <u_{1..d}, x> <= u_0}; the poles give the
/// full mass (u_0 > 0) or nothing.
inline double halfspace_value(const SmoothedPointMeasure& m, const Vec& u) {
  require(m.delta > 0, ErrorKind::InvalidParameter, "ramp width must be positive");
  if (m.points.empty()) return 0.0;
  const auto d = u.size() - 1;
  require(m.points.front().size() == d, ErrorKind::InvalidParameter, "hyperplane and measure dimensions differ");
  const Vec n = u.tail(d);
  const double nn = n.norm();
  if (nn <= 1e-12) return u[0] > 0 ? m.total() : 0.0;
  double s = 0.0;
  for (std::size_t k = 0; k < m.points.size(); ++k) {
    const double t = (u[0] - n.dot(m.points[k])) / (m.delta * nn) + 0.5;
    s += m.weights[k] * std::clamp(t, 0.0, 1.0);
  }
  return s;
}

/// u for H^+ = {x : <normal, x> <= offset}.
inline Vec hyperplane_from(const Vec& normal, double offset) {
  Vec u(normal.size() + 1);
  u[0] = offset;
  u.tail(normal.size()) = normal;
  return normalized(u);
}

/// families[j][i] is mu_i^{(j)}.
struct MeasureFamilySet {
  std::vector<std::vector<SmoothedPointMeasure>> families;

  int d() const {
    for (const auto& fam : families)
      for (const auto& m : fam)
        if (m.dimension() >= 0) return m.dimension();
    return -1;
  }
};

/// F_{ji}(u) = mu_i^{(j)}(H^+(u)) - mu_i^{(j)}(R^d) / 2, before odd symmetrization.
inline Mat hs_field_raw(const MeasureFamilySet& M, const Vec& u) {
  const auto rows = static_cast<Eigen::Index>(M.families.size());
  const auto cols = static_cast<Eigen::Index>(M.families.front().size());
  Mat f(rows, cols);
  for (Eigen::Index j = 0; j < rows; ++j)
    for (Eigen::Index i = 0; i < cols; ++i) {
      const auto& m = M.families[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
      f(j, i) = halfspace_value(m, u) - 0.5 * m.total();
    }
  return f;
}

/// pi[i] is the family in which measure i maximizes H^+; residuals(j, i) = F_{ji}(u).
struct HSWitness {
  Vec u;
  std::vector<int> pi;
  Mat residuals;
};

/// Measure i maximizes H^+(u) in family max_family and minimizes it in min_family.
struct OppositePairReport {
  int measure = 0;
  int max_family = 0;
  int min_family = 0;
  Vec u;
  Mat residuals;
};

using HSOutcome = std::variant<HSWitness, OppositePairReport, Inconclusive>;

inline bool validate_hs_witness(const MeasureFamilySet& M, const HSWitness& w, double tol) {
  return transversal_holds(hs_field_raw(M, w.u), w.pi, tol);
}

inline bool validate_opposite_pair(const MeasureFamilySet& M, const OppositePairReport& r, double tol) {
  const Mat f = hs_field_raw(M, r.u);
  if (r.max_family == r.min_family) return false;
  const double hi = f(r.max_family, r.measure), lo = f(r.min_family, r.measure);
  return hi >= f.row(r.max_family).maxCoeff() - tol && lo <= f.row(r.min_family).minCoeff() + tol;
}

namespace detail {

/// Affine frame that centers the points and scales them into the unit ball,
/// so hyperplane offsets stay away from the poles of the parameter sphere.
struct Frame {
  Vec center;
  double scale = 1.0;

  SmoothedPointMeasure apply(const SmoothedPointMeasure& m) const {
    SmoothedPointMeasure out = m;
    for (auto& p : out.points) p = (p - center) / scale;
    out.delta = m.delta / scale;
    return out;
  }
  Vec to_world(const Vec& u) const {
    const auto d = u.size() - 1;
    Vec w(u.size());
    w.tail(d) = u.tail(d);
    w[0] = u[0] * scale + u.tail(d).dot(center);
    return normalized(w);
  }
};

inline Frame frame_for(const std::vector<const SmoothedPointMeasure*>& ms, int d) {
  Frame fr;
  fr.center = Vec::Zero(d);
  std::size_t count = 0;
  for (const auto* m : ms)
    for (const auto& p : m->points) {
      fr.center += p;
      ++count;
    }
  if (count > 0) fr.center /= static_cast<double>(count);
  double r = 0.0;
  for (const auto* m : ms)
    for (const auto& p : m->points) r = std::max(r, (p - fr.center).norm());
  fr.scale = r > 0 ? r : 1.0;
  return fr;
}

inline void check_family_shapes(const MeasureFamilySet& M) {
  const int d = M.d();
  require(d >= 1, ErrorKind::InvalidInput, "measures need at least one point");
  require(static_cast<int>(M.families.size()) == d + 1, ErrorKind::InvalidInput, "need d+1 families");
  for (const auto& fam : M.families) {
    require(static_cast<int>(fam.size()) == d + 1, ErrorKind::InvalidInput, "each family needs d+1 measures");
    for (const auto& m : fam) {
      check_measure(m);
      require(m.dimension() < 0 || m.dimension() == d, ErrorKind::InvalidInput, "measures differ in dimension");
    }
  }
}

inline OppositePairReport opposite_pair_at(const Mat& f, const Vec& u, double tol) {
  const auto rep = rows_in_intersecting_cube_facets(f, tol);
  OppositePairReport r;
  r.measure = rep.column;
  r.max_family = rep.entry_a >= rep.entry_b ? rep.row_a : rep.row_b;
  r.min_family = rep.entry_a >= rep.entry_b ? rep.row_b : rep.row_a;
  r.u = u;
  r.residuals = f;
  return r;
}

}  // namespace detail

/// Colorful ham sandwich: a hyperplane and permutation pi such that
/// mu_i^{(pi(i))} maximizes H^+ for family pi(i), or a reported breach of the
/// cross condition.
inline HSOutcome solve_colorful_hs(const MeasureFamilySet& M, BUConfig cfg = {}) {
  detail::check_family_shapes(M);
  const int d = M.d();
  std::vector<const SmoothedPointMeasure*> all;
  for (const auto& fam : M.families)
    for (const auto& m : fam) all.push_back(&m);
  const auto frame = detail::frame_for(all, d);
  MeasureFamilySet local;
  for (const auto& fam : M.families) {
    local.families.emplace_back();
    for (const auto& m : fam) local.families.back().push_back(frame.apply(m));
  }
  OddMatrixField field(d, [&local](const Vec& u) { return hs_field_raw(local, u); });
  auto out = solve_colorful_bu(field, cfg);
  if (auto* inc = std::get_if<Inconclusive>(&out)) return *inc;
  const auto& w = std::get<BUWitness>(out);
  const Vec u = frame.to_world(w.x);
  const Mat f = hs_field_raw(M, u);
  if (const auto* t = std::get_if<Transversal>(&w.outcome)) return HSWitness{u, t->pi, f};
  return detail::opposite_pair_at(f, u, w.tol);
}

/// A hyperplane with (weighted) equal signed differences mu_i(H^+) - mu_i(H^-).
struct EqualizingCut {
  Vec u;
  std::vector<double> differences;  // mu_i(H^+) - mu_i(H^-)
  double residual = 0.0;            // max_{i,j} |differences_i - differences_j|
};

using EqualizingOutcome = std::variant<EqualizingCut, Inconclusive>;

namespace detail {

inline std::vector<double> signed_differences(const std::vector<SmoothedPointMeasure>& ms, const Vec& u) {
  std::vector<double> out;
  for (const auto& m : ms) out.push_back(2.0 * halfspace_value(m, u) - m.total());
  return out;
}

inline double spread(const std::vector<double>& v) {
  return *std::max_element(v.begin(), v.end()) - *std::min_element(v.begin(), v.end());
}

/// Equalizes scale_i * (mu_i(H^+) - mu_i(H^-)) through the all-families-equal
/// colorful field; `good` (world coordinates) decides acceptance.
inline std::variant<Vec, Inconclusive> equalize(const std::vector<SmoothedPointMeasure>& ms,
                                                const std::vector<double>& scales,
                                                const std::function<bool(const Vec&)>& good, BUConfig cfg) {
  const int d = static_cast<int>(ms.size()) - 1;
  std::vector<const SmoothedPointMeasure*> ptrs;
  for (const auto& m : ms) ptrs.push_back(&m);
  const auto frame = frame_for(ptrs, d);
  std::vector<SmoothedPointMeasure> local;
  for (const auto& m : ms) local.push_back(frame.apply(m));
  OddMatrixField field(d, [&local, &scales, d](const Vec& u) {
    Mat f(d + 1, d + 1);
    for (int i = 0; i <= d; ++i) {
      const auto& m = local[static_cast<std::size_t>(i)];
      f.col(i).setConstant(scales[static_cast<std::size_t>(i)] * (halfspace_value(m, u) - 0.5 * m.total()));
    }
    return f;
  });
  const double tol = cfg.refine.witness_tol;
  cfg.refine.witness_tol = tol / 4;
  cfg.refine.accept = [&](const Vec& u, const std::vector<int>&) { return good(frame.to_world(u)); };
  cfg.refine.accept_violation = [&](const Violation& v) { return good(frame.to_world(v.point)); };
  auto out = solve_colorful_bu(field, cfg);
  if (auto* inc = std::get_if<Inconclusive>(&out)) {
    if (inc->best_point.size() > 0) inc->best_point = frame.to_world(inc->best_point);
    return *inc;
  }
  const Vec u = frame.to_world(std::get<BUWitness>(out).x);
  if (!good(u)) return Inconclusive{"witness failed the acceptance check", 0.0, u};
  return u;
}

inline void check_measures(const std::vector<SmoothedPointMeasure>& ms, int expected_count) {
  require(static_cast<int>(ms.size()) == expected_count, ErrorKind::InvalidInput,
          "expected " + std::to_string(expected_count) + " measures");
  int d = -1;
  for (const auto& m : ms) {
    check_measure(m);
    if (m.dimension() >= 0) {
      require(d < 0 || m.dimension() == d, ErrorKind::InvalidInput, "measures differ in dimension");
      d = m.dimension();
    }
  }
  require(d >= 1, ErrorKind::InvalidInput, "measures need at least one point");
}

}  // namespace detail

/// d+1 measures in R^d: a hyperplane along which every mu_i(H^+) - mu_i(H^-)
/// agrees within tol.
inline EqualizingOutcome solve_equalizing_hs(const std::vector<SmoothedPointMeasure>& ms, BUConfig cfg = {}) {
  require(ms.size() >= 2, ErrorKind::InvalidInput, "need d+1 >= 2 measures");
  detail::check_measures(ms, static_cast<int>(ms.size()));
  require(ms.front().dimension() < 0 || ms.front().dimension() == static_cast<int>(ms.size()) - 1 ||
              std::any_of(ms.begin(), ms.end(), [&](const auto& m) { return m.dimension() == static_cast<int>(ms.size()) - 1; }),
          ErrorKind::InvalidInput, "need exactly d+1 measures in R^d");
  const double tol = cfg.refine.witness_tol;
  auto good = [&](const Vec& u) { return detail::spread(detail::signed_differences(ms, u)) <= tol; };
  auto out = detail::equalize(ms, std::vector<double>(ms.size(), 1.0), good, cfg);
  if (auto* inc = std::get_if<Inconclusive>(&out)) return *inc;
  EqualizingCut cut;
  cut.u = std::get<Vec>(out);
  cut.differences = detail::signed_differences(ms, cut.u);
  cut.residual = detail::spread(cut.differences);
  return cut;
}

/// Fractions mu_i(H^+) / mu_i(R^d) achieved by a cut.
struct FractionCut {
  Vec u;
  std::vector<double> fractions;
  double residual = 0.0;  // max_i |fractions_i - target_i|
  double epsilon = 0.0;   // anchor clearance (BHJ only)
};

using FractionOutcome = std::variant<FractionCut, Inconclusive>;

inline std::vector<double> halfspace_fractions(const std::vector<SmoothedPointMeasure>& ms, const Vec& u) {
  std::vector<double> out;
  for (const auto& m : ms) out.push_back(halfspace_value(m, u) / m.total());
  return out;
}

inline double fraction_residual(const std::vector<double>& got, const std::vector<double>& want) {
  double r = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) r = std::max(r, std::abs(got[i] - want[i]));
  return r;
}

/// Classical ham sandwich cut for d measures in R^d: the equalizing problem
/// with mass-normalized measures and an extra zero measure, whose signed
/// difference pins the common value to 0.
inline FractionOutcome solve_ham_sandwich(const std::vector<SmoothedPointMeasure>& ms, BUConfig cfg = {}) {
  detail::check_measures(ms, static_cast<int>(ms.size()));
  require(ms.front().dimension() == static_cast<int>(ms.size()), ErrorKind::InvalidInput, "need d measures in R^d");
  for (const auto& m : ms) require(m.total() > 0, ErrorKind::InvalidInput, "measures need positive mass");
  const double tol = cfg.refine.witness_tol;
  std::vector<SmoothedPointMeasure> all = ms;
  SmoothedPointMeasure zero;
  zero.delta = ms.front().delta;
  all.push_back(zero);
  std::vector<double> scales;
  for (const auto& m : ms) scales.push_back(1.0 / m.total());
  scales.push_back(1.0);
  const std::vector<double> half(ms.size(), 0.5);
  auto good = [&](const Vec& u) { return fraction_residual(halfspace_fractions(ms, u), half) <= tol; };
  auto out = detail::equalize(all, scales, good, cfg);
  if (auto* inc = std::get_if<Inconclusive>(&out)) return *inc;
  FractionCut cut;
  cut.u = std::get<Vec>(out);
  cut.fractions = halfspace_fractions(ms, cut.u);
  cut.residual = fraction_residual(cut.fractions, half);
  return cut;
}

namespace detail {

/// Sample normals: an even angular grid in the plane, otherwise the
/// coordinate axes plus fixed pseudo-random directions.
inline std::vector<Vec> sample_directions(int d, int count = 64) {
  std::vector<Vec> out;
  if (d == 1) return {Vec::Ones(1)};
  if (d == 2) {
    for (int k = 0; k < count; ++k) {
      const double a = M_PI * k / count;
      Vec n(2);
      n << std::cos(a), std::sin(a);
      out.push_back(n);
    }
    return out;
  }
  for (int k = 0; k < d && static_cast<int>(out.size()) < count; ++k) out.push_back(Vec::Unit(d, k));
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> g;
  while (static_cast<int>(out.size()) < count) {
    Vec n(d);
    for (int k = 0; k < d; ++k) n[k] = g(rng);
    out.push_back(n.normalized());
  }
  return out;
}

}  // namespace detail

/// Anchor clearance: the largest eps such that no sampled hyperplane within
/// eps of the anchor meets the (ramp-widened) supports of all measures.
/// Throws invalid-anchor when a sampled hyperplane through the anchor does.
inline double anchor_clearance(const std::vector<SmoothedPointMeasure>& ms, const Vec& anchor) {
  double eps = std::numeric_limits<double>::infinity();
  for (const Vec& n : detail::sample_directions(static_cast<int>(anchor.size()))) {
    double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
    for (const auto& m : ms) {
      double a = std::numeric_limits<double>::infinity(), b = -a;
      for (const auto& p : m.points) {
        a = std::min(a, n.dot(p));
        b = std::max(b, n.dot(p));
      }
      lo = std::max(lo, a - m.delta / 2);
      hi = std::min(hi, b + m.delta / 2);
    }
    if (lo > hi) continue;
    const double c = n.dot(anchor);
    const double dist = c < lo ? lo - c : c > hi ? c - hi : 0.0;
    if (dist <= 0) {
      std::string dir;
      for (int k = 0; k < n.size(); ++k) dir += (k ? "," : "") + std::to_string(n[k]);
      throw Error(ErrorKind::InvalidAnchor, "a hyperplane through the anchor with normal (" + dir +
                                                ") meets every support");
    }
    eps = std::min(eps, dist);
  }
  return eps;
}

/// mu_i(H^+) = alpha_i mu_i(R^d) for d measures in R^d, given an anchor no
/// hyperplane through which meets all supports. Measure i is scaled by
/// 1 / ((2 alpha_i - 1) mu_i(R^d)) and a unit point mass at the anchor is
/// added; equalizing forces the cut away from the anchor, where its signed
/// difference is +-1.
inline FractionOutcome solve_bhj_fractions(const std::vector<SmoothedPointMeasure>& ms,
                                           const std::vector<double>& alphas, const Vec& anchor, BUConfig cfg = {}) {
  detail::check_measures(ms, static_cast<int>(ms.size()));
  const int d = static_cast<int>(ms.size());
  require(ms.front().dimension() == d, ErrorKind::InvalidInput, "need d measures in R^d");
  require(static_cast<int>(alphas.size()) == d, ErrorKind::InvalidParameter, "need one fraction per measure");
  require(anchor.size() == d, ErrorKind::InvalidParameter, "anchor has the wrong dimension");
  for (double a : alphas) require(a > 0 && a < 1, ErrorKind::InvalidParameter, "fractions must lie in (0,1)");
  for (const auto& m : ms) require(m.total() > 0, ErrorKind::InvalidInput, "measures need positive mass");
  const double eps = anchor_clearance(ms, anchor);
  const double tol = cfg.refine.witness_tol;

  std::vector<SmoothedPointMeasure> all = ms;
  SmoothedPointMeasure aux;
  aux.points = {anchor};
  aux.weights = {1.0};
  aux.delta = std::isfinite(eps) ? eps : ms.front().delta;
  all.push_back(aux);
  std::vector<double> scales;
  for (int i = 0; i < d; ++i) {
    double c = 2 * alphas[static_cast<std::size_t>(i)] - 1;
    if (std::abs(c) < 1e-4) c = 1e-4;  // alpha = 1/2: target shifts by 5e-5
    scales.push_back(1.0 / (c * ms[static_cast<std::size_t>(i)].total()));
  }
  scales.push_back(1.0);
  auto good_oriented = [&](const Vec& u) { return fraction_residual(halfspace_fractions(ms, u), alphas) <= tol; };
  auto good = [&](const Vec& u) { return good_oriented(u) || good_oriented(-u); };
  auto out = detail::equalize(all, scales, good, cfg);
  if (auto* inc = std::get_if<Inconclusive>(&out)) return *inc;
  FractionCut cut;
  cut.u = std::get<Vec>(out);
  if (!good_oriented(cut.u)) cut.u = -cut.u;
  cut.fractions = halfspace_fractions(ms, cut.u);
  cut.residual = fraction_residual(cut.fractions, alphas);
  cut.epsilon = eps;
  return cut;
}

/// Outcome of a well-separation check. On failure `sets` are the offending
/// clouds (0-based), `transversal` holds one point of each hull lying in a
/// common (k-2)-flat, and for k = 3 `line` holds two points of the stabbing line.
struct SeparationReport {
  bool separated = true;
  std::vector<int> sets;
  std::vector<Vec> transversal;
  std::vector<Vec> line;
};

namespace detail {

inline double cross2(const Vec& o, const Vec& a, const Vec& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

/// Convex hull (counter-clockwise, no collinear points); degenerate inputs
/// give 1 or 2 points.
inline std::vector<Vec> convex_hull(std::vector<Vec> pts) {
  std::sort(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) { return lex_less(a, b); });
  pts.erase(std::unique(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) { return a == b; }), pts.end());
  if (pts.size() <= 2) return pts;
  std::vector<Vec> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross2(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross2(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

inline bool on_segment(const Vec& p, const Vec& a, const Vec& b, double eps) {
  if (std::abs(cross2(a, b, p)) > eps * std::max(1.0, (b - a).norm())) return false;
  return (p - a).dot(b - a) >= -eps && (p - b).dot(a - b) >= -eps;
}

inline bool in_hull(const Vec& p, const std::vector<Vec>& h, double eps) {
  if (h.size() == 1) return (p - h[0]).norm() <= eps;
  if (h.size() == 2) return on_segment(p, h[0], h[1], eps);
  for (std::size_t k = 0; k < h.size(); ++k)
    if (cross2(h[k], h[(k + 1) % h.size()], p) < -eps) return false;
  return true;
}

inline std::optional<Vec> segment_intersection(const Vec& a, const Vec& b, const Vec& c, const Vec& e, double eps) {
  const double d1 = cross2(c, e, a), d2 = cross2(c, e, b), d3 = cross2(a, b, c), d4 = cross2(a, b, e);
  if (((d1 > eps && d2 < -eps) || (d1 < -eps && d2 > eps)) && ((d3 > eps && d4 < -eps) || (d3 < -eps && d4 > eps)))
    return Vec(a + (b - a) * (d1 / (d1 - d2)));
  for (const Vec* p : {&a, &b})
    if (on_segment(*p, c, e, eps)) return *p;
  for (const Vec* p : {&c, &e})
    if (on_segment(*p, a, b, eps)) return *p;
  return std::nullopt;
}

inline std::optional<Vec> hull_common_point(const std::vector<Vec>& P, const std::vector<Vec>& Q, double eps) {
  const auto hp = convex_hull(P), hq = convex_hull(Q);
  for (const auto& p : hp)
    if (in_hull(p, hq, eps)) return p;
  for (const auto& q : hq)
    if (in_hull(q, hp, eps)) return q;
  auto edges = [](const std::vector<Vec>& h) {
    std::vector<std::pair<Vec, Vec>> out;
    if (h.size() == 2) out.emplace_back(h[0], h[1]);
    if (h.size() > 2)
      for (std::size_t k = 0; k < h.size(); ++k) out.emplace_back(h[k], h[(k + 1) % h.size()]);
    return out;
  };
  for (const auto& [a, b] : edges(hp))
    for (const auto& [c, e] : edges(hq))
      if (auto x = segment_intersection(a, b, c, e, eps)) return x;
  return std::nullopt;
}

/// A point of cloud P on the line through a, b, if the line meets its hull.
inline std::optional<Vec> line_hits(const std::vector<Vec>& P, const Vec& a, const Vec& b, double eps) {
  const Vec* neg = nullptr;
  const Vec* pos = nullptr;
  double sn = 0, sp = 0;
  for (const auto& p : P) {
    const double s = cross2(a, b, p);
    if (std::abs(s) <= eps) return p;
    if (s < 0 && !neg) neg = &p, sn = s;
    if (s > 0 && !pos) pos = &p, sp = s;
  }
  if (!neg || !pos) return std::nullopt;
  return Vec(*neg + (*pos - *neg) * (sn / (sn - sp)));
}

}  // namespace detail

/// Decides well-separation of up to d+1 point clouds (convex hulls implicit)
/// in R^1 or R^2: every pair of hulls disjoint and, in the plane, no line
/// meeting three hulls. Stabbing lines are searched through pairs of points,
/// which suffices since an extreme stabbing line touches two hull vertices.
inline SeparationReport well_separated_check(const std::vector<std::vector<Vec>>& clouds, double eps = 1e-12) {
  require(!clouds.empty(), ErrorKind::InvalidInput, "no clouds");
  for (const auto& c : clouds) require(!c.empty(), ErrorKind::InvalidInput, "empty cloud");
  const int d = static_cast<int>(clouds.front().front().size());
  require(static_cast<int>(clouds.size()) <= d + 1, ErrorKind::InvalidParameter, "at most d+1 clouds");
  require(d <= 2, ErrorKind::UnsupportedDimension, "well-separation is decided for d <= 2 only");
  const int k = static_cast<int>(clouds.size());
  SeparationReport rep;
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) {
      std::optional<Vec> common;
      if (d == 1) {
        auto range = [](const std::vector<Vec>& c) {
          double lo = c.front()[0], hi = lo;
          for (const auto& p : c) lo = std::min(lo, p[0]), hi = std::max(hi, p[0]);
          return std::make_pair(lo, hi);
        };
        const auto [la, ha] = range(clouds[static_cast<std::size_t>(a)]);
        const auto [lb, hb] = range(clouds[static_cast<std::size_t>(b)]);
        if (std::max(la, lb) <= std::min(ha, hb) + eps) common = Vec::Constant(1, std::max(la, lb));
      } else {
        common = detail::hull_common_point(clouds[static_cast<std::size_t>(a)], clouds[static_cast<std::size_t>(b)], eps);
      }
      if (common) {
        rep.separated = false;
        rep.sets = {a, b};
        rep.transversal = {*common, *common};
        return rep;
      }
    }
  if (d == 2 && k == 3) {
    std::vector<Vec> all;
    for (const auto& c : clouds) all.insert(all.end(), c.begin(), c.end());
    for (std::size_t x = 0; x < all.size(); ++x)
      for (std::size_t y = x + 1; y < all.size(); ++y) {
        if ((all[x] - all[y]).norm() <= eps) continue;
        std::vector<Vec> hits;
        for (const auto& c : clouds) {
          auto h = detail::line_hits(c, all[x], all[y], eps);
          if (!h) break;
          hits.push_back(*h);
        }
        if (hits.size() == 3) {
          rep.separated = false;
          rep.sets = {0, 1, 2};
          rep.transversal = hits;
          rep.line = {all[x], all[y]};
          return rep;
        }
      }
  }
  return rep;
}

/// r_1, g_1 form the first family and r_2, g_2 the second.
struct TwoFamilyConfiguration {
  SmoothedPointMeasure r1, g1, r2, g2;
};

/// Two families concentrated along the parabola y = x^2 - 1 over
/// x = (t - 2)/2, t in [0.1, 3.9]: r_1 on t in [0.1, 2], g_1 on [2, 3.9],
/// r_2 on [0.9, 2.9] and g_2 on [0.1, 0.9] u [2.9, 3.9]. The origin lies
/// inside the parabola, above every chord between support points.
inline TwoFamilyConfiguration figure2_configuration(int points_per_unit = 40) {
  auto arc = [points_per_unit](std::vector<std::pair<double, double>> pieces) {
    std::vector<Vec> pts;
    for (const auto& [a, b] : pieces) {
      const int n = std::max(2, static_cast<int>(std::lround((b - a) * points_per_unit)));
      for (int k = 0; k < n; ++k) {
        const double t = a + (b - a) * (k + 0.5) / n;
        const double x = (t - 2) / 2;
        Vec p(2);
        p << x, x * x - 1;
        pts.push_back(p);
      }
    }
    return pts;
  };
  TwoFamilyConfiguration c{uniform_measure(arc({{0.1, 2.0}}), 1.0),
                           uniform_measure(arc({{2.0, 3.9}}), 1.0),
                           uniform_measure(arc({{0.9, 2.9}}), 1.0),
                           uniform_measure(arc({{0.1, 0.9}, {2.9, 3.9}}), 1.0)};
  const double delta = default_delta({c.r1, c.g1, c.r2, c.g2});
  for (auto* m : {&c.r1, &c.g1, &c.r2, &c.g2}) m->delta = delta;
  return c;
}

/// The colorful instance built from two families: M_1 = (r_1, g_1, 0),
/// M_2 = (r_2, g_2, 0), M_3 = M_1, where 0 is the zero measure.
inline MeasureFamilySet two_family_instance(const TwoFamilyConfiguration& c) {
  SmoothedPointMeasure zero;
  zero.delta = c.r1.delta;
  return MeasureFamilySet{{{c.r1, c.g1, zero}, {c.r2, c.g2, zero}, {c.r1, c.g1, zero}}};
}

/// Whether some line satisfies r_1(H^+) >= 1/2, g_1(H^-) >= 1/2,
/// r_2(H^-) >= 1/2 and g_2(H^+) >= 1/2, each relaxed by `slack`, on a grid
/// over (u_0, angle) with spacing `step`. Hyperplanes carry the fixed
/// orientation in which H^+ is the side away from the origin (u_0 <= 0).
inline bool naive_conjecture_scan(const TwoFamilyConfiguration& c, double step, double slack,
                                  Vec* found = nullptr) {
  require(step > 0 && step < 1, ErrorKind::InvalidParameter, "step must lie in (0,1)");
  for (const auto* m : {&c.r1, &c.g1, &c.r2, &c.g2})
    require(m->dimension() == 2 && m->total() > 0, ErrorKind::InvalidInput, "the naive scan is two-dimensional");
  const int n0 = static_cast<int>(std::floor(1.0 / step));
  const int na = static_cast<int>(std::ceil(2 * M_PI / step));
  std::vector<char> hit(static_cast<std::size_t>(n0 + 1) * static_cast<std::size_t>(na), 0);
  parallel_for(hit.size(), [&](std::size_t idx) {
    const double u0 = -static_cast<double>(idx / static_cast<std::size_t>(na)) * step;
    const double angle = static_cast<double>(idx % static_cast<std::size_t>(na)) * step;
    const double r = std::sqrt(std::max(0.0, 1 - u0 * u0));
    Vec u(3);
    u << u0, r * std::cos(angle), r * std::sin(angle);
    auto plus = [&](const SmoothedPointMeasure& m) { return halfspace_value(m, u) / m.total(); };
    hit[idx] = plus(c.r1) >= 0.5 - slack && 1 - plus(c.g1) >= 0.5 - slack && 1 - plus(c.r2) >= 0.5 - slack &&
               plus(c.g2) >= 0.5 - slack;
  });
  for (std::size_t idx = 0; idx < hit.size(); ++idx)
    if (hit[idx]) {
      if (found) {
        const double u0 = -static_cast<double>(idx / static_cast<std::size_t>(na)) * step;
        const double angle = static_cast<double>(idx % static_cast<std::size_t>(na)) * step;
        const double r = std::sqrt(std::max(0.0, 1 - u0 * u0));
        *found = Vec(3);
        *found << u0, r * std::cos(angle), r * std::sin(angle);
      }
      return true;
    }
  return false;
}

}  // namespace equibu
