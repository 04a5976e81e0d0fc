// Simplex-side solvers: the Radon-or-KKM alternative, colorful KKM for maps
// and for covers, and colorful Brouwer. All run on the deleted join of the
// simplex, identified with the crosspolytope sphere.
#pragma once

#include "equibu/matrix_bu.hpp"

namespace equibu {

/// A map into the simplex Delta_d, given in barycentric coordinates.
using SimplexMap = std::function<Vec(const Vec&)>;
/// Signed depth of a closed set {g >= 0} of the simplex.
using DepthFunction = std::function<double(const Vec&)>;
/// x -> (d+1) x (d+1) matrix whose rows lie in Delta_d.
using StochasticMatrixField = std::function<Mat(const Vec&)>;

inline bool is_simplex_point(const Vec& x, double tol = 1e-12) {
  return x.size() >= 1 && x.minCoeff() >= -tol && std::abs(x.sum() - 1.0) <= tol;
}

inline std::vector<int> support_of(const Vec& x, double tol = 0.0) {
  std::vector<int> out;
  for (int i = 0; i < x.size(); ++i)
    if (x[i] > tol) out.push_back(i);
  return out;
}

/// lambda x + (1 - lambda) y in the deleted join; x (resp. y) is empty when
/// lambda = 0 (resp. 1).
struct DeletedJoinPoint {
  double lambda = 1.0;
  Vec x;
  Vec y;
};

/// Sphere point z in R^{d+1} -> deleted join: the positive part of z/|z|_1
/// has mass lambda and normalizes to x, the negative part gives y.
inline DeletedJoinPoint to_deleted_join(const Vec& z) {
  const double l1 = z.cwiseAbs().sum();
  require(l1 > 0, ErrorKind::DegenerateRealization, "zero vector has no deleted-join preimage");
  const Vec pos = z.cwiseMax(0.0), neg = (-z).cwiseMax(0.0);
  const double sp = pos.sum(), sn = neg.sum();
  DeletedJoinPoint p;
  p.lambda = sn == 0 ? 1.0 : sp == 0 ? 0.0 : sp / (sp + sn);
  if (sp > 0) p.x = pos / sp;
  if (sn > 0) p.y = neg / sn;
  return p;
}

inline Vec from_deleted_join(const DeletedJoinPoint& p) {
  const auto n = p.x.size() > 0 ? p.x.size() : p.y.size();
  Vec z = Vec::Zero(n);
  if (p.lambda > 0) z += p.lambda * p.x;
  if (p.lambda < 1) z -= (1.0 - p.lambda) * p.y;
  return normalized(z);
}

/// Supports are 0-based coordinate indices.
struct RadonPartition {
  std::vector<int> J, Jp;
  Vec x, y;
  double lambda = 0.5;
  double gap = 0.0;  // |alpha(x) - alpha(y)|_inf
};

/// pi[i] is the coordinate assigned to map (or row) i; values[i] is the
/// corresponding entry at x.
struct Intersection {
  Vec x;
  std::vector<int> pi;
  std::vector<double> values;
};

/// slacks[i] = x_{pi(i)} - f_{i pi(i)}(x), nonnegative up to tolerance.
struct BrouwerColorful {
  Vec x;
  std::vector<int> pi;
  std::vector<double> slacks;
};

using SimplexWitness = std::variant<RadonPartition, Intersection, BrouwerColorful>;
using SimplexOutcome = std::variant<SimplexWitness, Inconclusive>;

namespace detail {

inline Vec checked_simplex_value(const SimplexMap& a, const Vec& x, int dim) {
  const Vec v = a(x);
  require(v.size() == dim && is_simplex_point(v, 1e-9), ErrorKind::InvalidInput,
          "map value is not a point of the simplex");
  return v;
}

/// Deterministic sample of each face: vertices, edge midpoints, barycenter.
inline std::vector<std::pair<std::vector<int>, Vec>> face_samples(int dim) {
  std::vector<std::pair<std::vector<int>, Vec>> out;
  for (unsigned mask = 1; mask < (1u << dim); ++mask) {
    std::vector<int> J;
    for (int i = 0; i < dim; ++i)
      if (mask & (1u << i)) J.push_back(i);
    Vec bary = Vec::Zero(dim);
    for (int j : J) bary[j] = 1.0 / static_cast<double>(J.size());
    out.emplace_back(J, bary);
    if (J.size() > 2)
      for (std::size_t a = 0; a < J.size(); ++a)
        for (std::size_t b = a + 1; b < J.size(); ++b) {
          Vec mid = Vec::Zero(dim);
          mid[J[a]] = mid[J[b]] = 0.5;
          out.emplace_back(J, mid);
        }
  }
  return out;
}

inline std::string face_name(const std::vector<int>& J) {
  std::string s = "{";
  for (std::size_t k = 0; k < J.size(); ++k) s += (k ? "," : "") + std::to_string(J[k] + 1);
  return s + "}";
}

inline void check_face_preservation(const std::vector<SimplexMap>& maps, int dim) {
  for (const auto& [J, x] : face_samples(dim))
    for (std::size_t i = 0; i < maps.size(); ++i) {
      const Vec v = checked_simplex_value(maps[i], x, dim);
      for (int j = 0; j < dim; ++j)
        require(std::find(J.begin(), J.end(), j) != J.end() || v[j] <= 1e-9, ErrorKind::InvalidInput,
                "map " + std::to_string(i + 1) + " leaves face " + face_name(J) + " at a sample point");
    }
}

inline std::vector<int> invert(const std::vector<int>& pi) {
  std::vector<int> inv(pi.size());
  for (std::size_t k = 0; k < pi.size(); ++k) inv[static_cast<std::size_t>(pi[k])] = static_cast<int>(k);
  return inv;
}

}  // namespace detail

/// Re-validates a witness against alpha alone.
inline bool validate_radon_kkm(const SimplexMap& alpha, const SimplexWitness& w, double tol) {
  if (const auto* r = std::get_if<RadonPartition>(&w)) {
    const auto dim = r->x.size();
    if (dim == 0 || r->y.size() != dim || !is_simplex_point(r->x, 1e-9) || !is_simplex_point(r->y, 1e-9)) return false;
    std::vector<int> both = r->J;
    both.insert(both.end(), r->Jp.begin(), r->Jp.end());
    std::sort(both.begin(), both.end());
    for (std::size_t k = 0; k < both.size(); ++k)
      if (both[k] != static_cast<int>(k)) return false;
    if (static_cast<Eigen::Index>(both.size()) != dim) return false;
    for (int j : r->Jp)
      if (r->x[j] > 1e-12) return false;
    for (int j : r->J)
      if (r->y[j] > 1e-12) return false;
    return (alpha(r->x) - alpha(r->y)).cwiseAbs().maxCoeff() <= tol && std::abs(r->lambda - 0.5) <= tol;
  }
  if (const auto* in = std::get_if<Intersection>(&w))
    return is_simplex_point(in->x, 1e-9) && alpha(in->x).minCoeff() > 0;
  return false;
}

/// Either a Radon partition of alpha (alpha(x) = alpha(y) for x, y on
/// complementary faces) or a point where every alpha_i is positive.
inline SimplexOutcome radon_kkm_alternative(int d, const SimplexMap& alpha, BUConfig cfg = {}) {
  require(d >= 1, ErrorKind::InvalidParameter, "d must be >= 1");
  const int dim = d + 1;
  const double tol = cfg.refine.witness_tol;
  auto G = [&](const Vec& z) -> Vec {
    const auto p = to_deleted_join(z);
    Vec g = Vec::Zero(dim);
    if (p.lambda > 0) g += p.lambda * detail::checked_simplex_value(alpha, p.x, dim);
    if (p.lambda < 1) g -= (1.0 - p.lambda) * detail::checked_simplex_value(alpha, p.y, dim);
    return g;
  };
  const Mat B = sum_zero_basis(dim);
  BUConfig inner = cfg;
  inner.refine.witness_tol = tol / 10;
  auto out = classical_bu_zero(d, [&](const Vec& z) -> Vec { return B.transpose() * G(z); }, inner);
  if (auto* inc = std::get_if<Inconclusive>(&out)) return *inc;
  const Vec z = std::get<ZeroWitness>(out).x;
  const Vec g = G(z);
  const auto p = to_deleted_join(z);
  if (g.minCoeff() > 0 && p.lambda > 0) {
    const Vec a = alpha(p.x);
    return SimplexWitness{Intersection{p.x, {}, std::vector<double>(a.data(), a.data() + a.size())}};
  }
  if (g.maxCoeff() < 0 && p.lambda < 1) {
    const Vec a = alpha(p.y);
    return SimplexWitness{Intersection{p.y, {}, std::vector<double>(a.data(), a.data() + a.size())}};
  }
  // Diagonal hit at (nearly) zero. With x and y fixed, G is affine in lambda;
  // take the lambda that minimizes the off-diagonal part.
  if (p.lambda <= 0 || p.lambda >= 1) return Inconclusive{"diagonal hit at a join endpoint", g.norm(), z};
  RadonPartition r;
  r.x = p.x;
  r.y = p.y;
  r.J = support_of(r.x);
  for (int j = 0; j < dim; ++j)
    if (std::find(r.J.begin(), r.J.end(), j) == r.J.end()) r.Jp.push_back(j);
  const Vec ax = alpha(r.x), ay = alpha(r.y);
  const Vec u = B.transpose() * (ax + ay), v = B.transpose() * ay;
  r.lambda = u.squaredNorm() > 0 ? u.dot(v) / u.squaredNorm() : p.lambda;
  r.gap = (ax - ay).cwiseAbs().maxCoeff();
  return SimplexWitness{r};
}

/// Colorful KKM inequalities: alpha^{(i)}_{pi(i)}(x) >= alpha^{(i)}_j(x) - tol.
inline bool validate_colorful_kkm(const std::vector<SimplexMap>& maps, const Intersection& w, double tol) {
  if (!is_simplex_point(w.x, 1e-9) || w.pi.size() != maps.size()) return false;
  std::vector<int> sorted = w.pi;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 0; k < sorted.size(); ++k)
    if (sorted[k] != static_cast<int>(k)) return false;
  for (std::size_t i = 0; i < maps.size(); ++i) {
    const Vec a = maps[i](w.x);
    if (a[w.pi[i]] < a.maxCoeff() - tol) return false;
  }
  return true;
}

/// x and pi with alpha^{(i)}_{pi(i)}(x) maximal in alpha^{(i)}(x), through
/// the odd field lambda A(x) - (1 - lambda) A(y) on the deleted join.
inline SimplexOutcome solve_colorful_kkm(const std::vector<SimplexMap>& maps, BUConfig cfg = {}) {
  require(maps.size() >= 2, ErrorKind::InvalidParameter, "need d+1 >= 2 maps");
  const int dim = static_cast<int>(maps.size());
  const int d = dim - 1;
  const double tol = cfg.refine.witness_tol;
  detail::check_face_preservation(maps, dim);

  auto A = [&](const Vec& x) {
    Mat m(dim, dim);
    for (int i = 0; i < dim; ++i) m.row(i) = detail::checked_simplex_value(maps[static_cast<std::size_t>(i)], x, dim).transpose();
    return m;
  };
  OddMatrixField field(d, [&, dim](const Vec& z) {
    const auto p = to_deleted_join(z);
    Mat f = Mat::Zero(dim, dim);
    if (p.lambda > 0) f += p.lambda * A(p.x);
    if (p.lambda < 1) f -= (1.0 - p.lambda) * A(p.y);
    for (int j = 0; j < dim; ++j)
      require(f.col(j).minCoeff() >= -tol || f.col(j).maxCoeff() <= tol, ErrorKind::InvalidInput,
              "column " + std::to_string(j + 1) + " changes sign; a map leaves face " +
                  detail::face_name(support_of(p.lambda > 0 ? p.x : Vec::Zero(dim))));
    return f;
  });
  auto candidate = [&](const Vec& z, const std::vector<int>& pi_rows) -> std::optional<Intersection> {
    const auto p = to_deleted_join(z);
    if (p.lambda <= 0) return std::nullopt;
    Intersection w{p.x, detail::invert(pi_rows), {}};
    if (!validate_colorful_kkm(maps, w, tol)) return std::nullopt;
    for (int i = 0; i < dim; ++i) w.values.push_back(maps[static_cast<std::size_t>(i)](w.x)[w.pi[static_cast<std::size_t>(i)]]);
    return w;
  };
  auto user_accept = cfg.refine.accept;
  cfg.refine.accept = [&](const Vec& z, const std::vector<int>& pi_rows) {
    return candidate(z, pi_rows).has_value() && (!user_accept || user_accept(z, pi_rows));
  };
  cfg.refine.accept_violation = [](const Violation&) { return false; };
  auto out = solve_colorful_bu(field, cfg);
  if (auto* inc = std::get_if<Inconclusive>(&out)) return *inc;
  const auto& w = std::get<BUWitness>(out);
  const auto* t = std::get_if<Transversal>(&w.outcome);
  if (!t) return Inconclusive{"field reported rows outside intersecting cube facets", 0.0, w.x};
  auto c = candidate(w.x, t->pi);
  if (!c) return Inconclusive{"transversal does not lift to the simplex", 0.0, w.x};
  return SimplexWitness{*c};
}

/// covers[i][j] is the depth of A^{(i)}_j; memberships are rechecked at
/// tolerance tol.
inline bool validate_kkm_covers(const std::vector<std::vector<DepthFunction>>& covers, const Intersection& w,
                                double tol) {
  if (!is_simplex_point(w.x, 1e-9) || w.pi.size() != covers.size()) return false;
  for (std::size_t i = 0; i < covers.size(); ++i)
    if (covers[i][static_cast<std::size_t>(w.pi[i])](w.x) < -tol) return false;
  return true;
}

namespace detail {

inline void check_kkm_condition(const std::vector<std::vector<DepthFunction>>& covers, int dim) {
  for (std::size_t i = 0; i < covers.size(); ++i) {
    require(static_cast<int>(covers[i].size()) == dim, ErrorKind::InvalidParameter, "each cover needs d+1 sets");
    for (const auto& [J, x] : face_samples(dim)) {
      bool covered = false;
      for (int j : J) covered = covered || covers[i][static_cast<std::size_t>(j)](x) >= -1e-12;
      require(covered, ErrorKind::InvalidInput,
              "cover " + std::to_string(i + 1) + " fails the KKM condition on face " + face_name(J));
    }
  }
}

/// alpha_j proportional to x_j * max(0, g_j + m): subordinate to the open
/// m-neighbourhoods and face preserving.
inline SimplexMap kkm_partition(const std::vector<DepthFunction>& cover, double m) {
  return [cover, m](const Vec& x) -> Vec {
    Vec a(x.size());
    for (int j = 0; j < x.size(); ++j) a[j] = std::max(0.0, x[j]) * std::max(0.0, cover[static_cast<std::size_t>(j)](x) + m);
    const double s = a.sum();
    require(s > 0, ErrorKind::InvalidInput, "KKM cover leaves a point uncovered");
    return a / s;
  };
}

}  // namespace detail

/// A permutation pi and x in the intersection of A^{(i)}_{pi(i)} (closed
/// sets, within tol).
inline SimplexOutcome solve_colorful_kkm_covers(const std::vector<std::vector<DepthFunction>>& covers,
                                                BUConfig cfg = {}) {
  require(covers.size() >= 2, ErrorKind::InvalidParameter, "need d+1 >= 2 covers");
  const int dim = static_cast<int>(covers.size());
  detail::check_kkm_condition(covers, dim);
  const double tol = cfg.refine.witness_tol;
  Inconclusive last{"no margin produced a witness", 0.0, Vec()};
  for (int k = 0; k < 3; ++k) {
    const double m = tol * std::ldexp(1.0, -k);
    std::vector<SimplexMap> maps;
    for (const auto& c : covers) maps.push_back(detail::kkm_partition(c, m));
    BUConfig inner = cfg;
    auto user_accept = cfg.refine.accept;
    inner.refine.accept = [&](const Vec& z, const std::vector<int>& pi_rows) {
      const auto p = to_deleted_join(z);
      if (p.lambda <= 0) return false;
      return validate_kkm_covers(covers, Intersection{p.x, detail::invert(pi_rows), {}}, tol) &&
             (!user_accept || user_accept(z, pi_rows));
    };
    auto out = solve_colorful_kkm(maps, inner);
    if (auto* inc = std::get_if<Inconclusive>(&out)) {
      last = *inc;
      continue;
    }
    auto w = std::get<Intersection>(std::get<SimplexWitness>(out));
    if (!validate_kkm_covers(covers, w, tol)) continue;
    w.values.clear();
    for (int i = 0; i < dim; ++i) w.values.push_back(covers[static_cast<std::size_t>(i)][static_cast<std::size_t>(w.pi[static_cast<std::size_t>(i)])](w.x));
    return SimplexWitness{w};
  }
  return last;
}

inline void check_stochastic(const Mat& m, int dim) {
  require(m.rows() == dim && m.cols() == dim, ErrorKind::InvalidInput, "field has the wrong shape");
  require(m.minCoeff() >= -1e-12, ErrorKind::InvalidInput, "field has a negative entry");
  for (int r = 0; r < dim; ++r)
    require(std::abs(m.row(r).sum() - 1.0) <= 1e-9, ErrorKind::InvalidInput,
            "row " + std::to_string(r + 1) + " does not sum to 1");
}

/// f_{i pi(i)}(x) <= x_{pi(i)} + tol for all i.
inline bool validate_colorful_brouwer(const StochasticMatrixField& f, const BrouwerColorful& w, double tol) {
  if (!is_simplex_point(w.x, 1e-9)) return false;
  const Mat m = f(w.x);
  if (static_cast<Eigen::Index>(w.pi.size()) != m.rows()) return false;
  std::vector<int> sorted = w.pi;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 0; k < sorted.size(); ++k)
    if (sorted[k] != static_cast<int>(k)) return false;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    if (m(i, w.pi[static_cast<std::size_t>(i)]) > w.x[w.pi[static_cast<std::size_t>(i)]] + tol) return false;
  return true;
}

/// Colorful Brouwer via the closed covers A^{(i)}_j = {f_ij(x) <= x_j}.
/// Memberships are solved at half the witness tolerance so the all-rows-equal
/// case lands within (d+1) tol of a fixed point in l1.
inline SimplexOutcome solve_colorful_brouwer(int d, const StochasticMatrixField& f, BUConfig cfg = {}) {
  require(d >= 1, ErrorKind::InvalidParameter, "d must be >= 1");
  const int dim = d + 1;
  const double tol = cfg.refine.witness_tol;
  auto checked = [f, dim](const Vec& x) {
    const Mat m = f(x);
    check_stochastic(m, dim);
    return m;
  };
  std::vector<std::vector<DepthFunction>> covers(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) covers[static_cast<std::size_t>(i)].push_back([checked, i, j](const Vec& x) { return x[j] - checked(x)(i, j); });
  BUConfig inner = cfg;
  inner.refine.witness_tol = tol / 2;
  auto out = solve_colorful_kkm_covers(covers, inner);
  if (auto* inc = std::get_if<Inconclusive>(&out)) return *inc;
  const auto& w = std::get<Intersection>(std::get<SimplexWitness>(out));
  BrouwerColorful b{w.x, w.pi, w.values};
  return SimplexWitness{b};
}

}  // namespace equibu
