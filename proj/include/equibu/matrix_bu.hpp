// Matrix-field Borsuk-Ulam solvers: transversal-or-bad-rows for odd matrix
// fields, the zero-finding reduction, and Z/p orbit collapse.
#pragma once

#include "equibu/cover.hpp"

namespace equibu {

/// Oracle S^d -> R^{m x m}; evaluation returns the odd part
/// (F(x) - F(-x)) / 2, which is exactly odd in floating point.
class OddMatrixField {
 public:
  using Raw = std::function<Mat(const Vec&)>;

  OddMatrixField(int d, Raw raw) : d_(d), raw_(std::move(raw)) {
    require(d >= 0, ErrorKind::InvalidParameter, "d must be >= 0");
    require(static_cast<bool>(raw_), ErrorKind::InvalidParameter, "missing field oracle");
  }

  int d() const { return d_; }
  Mat operator()(const Vec& x) const {
    require(x.size() == d_ + 1, ErrorKind::InvalidParameter, "point has the wrong dimension");
    return 0.5 * (raw_(x) - raw_(-x));
  }

 private:
  int d_;
  Raw raw_;
};

/// Failure data refers to 0-based rows a < b and column j.
struct CubeFacetReport {
  bool verdict = true;
  int row_a = -1;
  int row_b = -1;
  int column = -1;
  double entry_a = 0.0;
  double entry_b = 0.0;
};

/// True iff every two rows whose maximal absolute entries (within tol) share
/// a column j satisfy a_j * b_j > tol^2. Rows are scanned in order; the
/// first failing (a, b, j) is reported.
inline CubeFacetReport rows_in_intersecting_cube_facets(const Mat& m, double tol) {
  require(m.rows() == m.cols(), ErrorKind::InvalidParameter, "matrix must be square");
  CubeFacetReport rep;
  const auto rows = m.rows();
  std::vector<double> row_max(static_cast<std::size_t>(rows));
  for (Eigen::Index r = 0; r < rows; ++r) row_max[static_cast<std::size_t>(r)] = m.row(r).cwiseAbs().maxCoeff();
  auto near_max = [&](Eigen::Index r, Eigen::Index j) {
    return std::abs(m(r, j)) >= row_max[static_cast<std::size_t>(r)] - tol;
  };
  for (Eigen::Index a = 0; a < rows; ++a)
    for (Eigen::Index b = a + 1; b < rows; ++b)
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        if (near_max(a, j) && near_max(b, j) && m(a, j) * m(b, j) <= tol * tol) {
          rep.verdict = false;
          rep.row_a = static_cast<int>(a);
          rep.row_b = static_cast<int>(b);
          rep.column = static_cast<int>(j);
          rep.entry_a = m(a, j);
          rep.entry_b = m(b, j);
          return rep;
        }
  return rep;
}

/// pi[i] is the row whose maximum sits in column i with a nonnegative entry.
struct Transversal {
  std::vector<int> pi;
  std::vector<double> row_maxima;  // f(x)_{pi(i) i}
};

struct BUWitness {
  Vec x;
  std::variant<CubeFacetReport, Transversal> outcome;
  double tol = 1e-3;
};

using BUOutcome = std::variant<BUWitness, Inconclusive>;

/// Checks f(x)_{pi(i) i} >= -tol and |f(x)_{pi(i) i}| >= |f(x)_{pi(i) j}| - tol.
inline bool transversal_holds(const Mat& m, const std::vector<int>& pi, double tol) {
  const auto n = m.rows();
  if (static_cast<Eigen::Index>(pi.size()) != n) return false;
  std::vector<int> sorted = pi;
  std::sort(sorted.begin(), sorted.end());
  for (Eigen::Index k = 0; k < n; ++k)
    if (sorted[static_cast<std::size_t>(k)] != k) return false;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index r = pi[static_cast<std::size_t>(i)];
    if (m(r, i) < -tol) return false;
    for (Eigen::Index j = 0; j < n; ++j)
      if (std::abs(m(r, i)) < std::abs(m(r, j)) - tol) return false;
  }
  return true;
}

/// Re-validates a BU witness from the field alone.
inline bool validate_bu_witness(const OddMatrixField& f, const BUWitness& w) {
  const Mat m = f(w.x);
  if (const auto* t = std::get_if<Transversal>(&w.outcome)) return transversal_holds(m, t->pi, w.tol);
  const auto& rep = std::get<CubeFacetReport>(w.outcome);
  if (rep.verdict || rep.row_a < 0 || rep.row_b < 0 || rep.column < 0) return false;
  const double a = m(rep.row_a, rep.column), b = m(rep.row_b, rep.column);
  return std::abs(a) >= m.row(rep.row_a).cwiseAbs().maxCoeff() - w.tol &&
         std::abs(b) >= m.row(rep.row_b).cwiseAbs().maxCoeff() - w.tol && a * b <= w.tol * w.tol;
}

struct BUConfig {
  RefinementConfig refine;
  double matrix_tol = 1e-9;  // ties in "largest absolute value" when building the covers
};

/// The cover A_i^{(j)} = {x : f(x)_{ji} >= 0 and |f(x)_{ji}| >= max_a |f(x)_{ja}| - matrix_tol}:
/// family j is row j, set i is column i.
inline CoverFamilySet bu_covers(const OddMatrixField& f, double matrix_tol) {
  const int m = f.d() + 1;
  CoverFamilySet fs;
  fs.p = 2;
  fs.action = -Mat::Identity(m, m);
  for (int j = 0; j < m; ++j) {
    std::vector<CoverOracle> sets;
    for (int i = 0; i < m; ++i) {
      CoverOracle o;
      o.membership = [f, j, i, matrix_tol](const Vec& x) {
        const Mat v = f(x);
        return v(j, i) >= 0 && std::abs(v(j, i)) >= v.row(j).cwiseAbs().maxCoeff() - matrix_tol;
      };
      o.margin = matrix_tol;
      o.description = "row " + std::to_string(j) + " attains its maximum at column " + std::to_string(i);
      sets.push_back(std::move(o));
    }
    fs.families.push_back(std::move(sets));
  }
  return fs;
}

/// Either x with rows in intersecting cube facets failing (BadRows), or x
/// and a permutation pi with f(x)_{pi(i) i} nonnegative and maximal in its
/// row, both within cfg.refine.witness_tol.
inline BUOutcome solve_colorful_bu(const OddMatrixField& f, BUConfig cfg = {}) {
  const int m = f.d() + 1;
  const double tol = cfg.refine.witness_tol;
  auto fs = bu_covers(f, cfg.matrix_tol);

  auto user_accept = cfg.refine.accept;
  cfg.refine.accept = [&, user_accept](const Vec& x, const std::vector<int>& pi) {
    return transversal_holds(f(x), pi, tol) && (!user_accept || user_accept(x, pi));
  };
  auto user_accept_violation = cfg.refine.accept_violation;
  cfg.refine.accept_violation = [&, user_accept_violation](const Violation& v) {
    return !rows_in_intersecting_cube_facets(f(v.point), tol).verdict &&
           (!user_accept_violation || user_accept_violation(v));
  };

  auto out = solve_colorful_fan_cover(fs, std::vector<int>(static_cast<std::size_t>(m), 1), cfg.refine);
  if (auto* inc = std::get_if<Inconclusive>(&out)) return *inc;
  BUWitness w;
  w.tol = tol;
  if (auto* v = std::get_if<Violation>(&out)) {
    require(v->kind != ViolationKind::CoverGap, ErrorKind::InvalidInput, "the induced cover has a gap");
    w.x = v->point;
    w.outcome = rows_in_intersecting_cube_facets(f(w.x), tol);
    if (std::get<CubeFacetReport>(w.outcome).verdict) {
      // vertex-level breach detected with matrix_tol; report at the claim point itself
      w.x = v->claims.front().point;
      w.outcome = rows_in_intersecting_cube_facets(f(w.x), tol);
    }
    return w;
  }
  const auto& cw = std::get<CoverWitness>(out);
  w.x = cw.point;
  Transversal t;
  t.pi.assign(static_cast<std::size_t>(m), 0);
  const Mat vals = f(w.x);
  for (std::size_t k = 0; k < cw.required.size(); ++k) {
    const int column = cw.required[k].block - 1;
    t.pi[static_cast<std::size_t>(column)] = cw.assignment[k];
  }
  for (int i = 0; i < m; ++i) t.row_maxima.push_back(vals(t.pi[static_cast<std::size_t>(i)], i));
  w.outcome = std::move(t);
  return w;
}

struct ZeroWitness {
  Vec x;
  Vec value;  // f(x), odd part
  double norm = 0.0;
};

using ZeroOutcome = std::variant<ZeroWitness, Inconclusive>;

/// Zero of an odd map S^d -> R^d through the all-rows-equal matrix field
/// whose rows are f with a zero appended.
inline ZeroOutcome classical_bu_zero(int d, const std::function<Vec(const Vec&)>& f, BUConfig cfg = {}) {
  require(d >= 1, ErrorKind::InvalidParameter, "d must be >= 1");
  auto odd = [f](const Vec& x) -> Vec { return 0.5 * (f(x) - f(-x)); };
  OddMatrixField field(d, [f, d](const Vec& x) {
    const Vec v = f(x);
    require(v.size() == d, ErrorKind::InvalidInput, "map has the wrong output dimension");
    Mat m = Mat::Zero(d + 1, d + 1);
    for (int r = 0; r <= d; ++r) m.row(r).head(d) = v.transpose();
    return m;
  });
  const double tol = cfg.refine.witness_tol;
  auto user_accept = cfg.refine.accept;
  cfg.refine.accept = [&](const Vec& x, const std::vector<int>& pi) {
    return odd(x).norm() <= tol && (!user_accept || user_accept(x, pi));
  };
  auto user_accept_violation = cfg.refine.accept_violation;
  cfg.refine.accept_violation = [&](const Violation& v) {
    return odd(v.point).norm() <= tol && (!user_accept_violation || user_accept_violation(v));
  };
  auto out = solve_colorful_bu(field, cfg);
  if (auto* inc = std::get_if<Inconclusive>(&out)) return *inc;
  const auto& w = std::get<BUWitness>(out);
  ZeroWitness z;
  z.x = w.x;
  z.value = odd(w.x);
  z.norm = z.value.norm();
  return z;
}

/// The orbit x, s.x, ..., s^{p-1}.x: f maps s^{-k}.x (k = 0..p-2) to y
/// and s.x to y - (alpha, ..., alpha).
struct OrbitCollapse {
  std::vector<Vec> orbit;  // orbit[k] = s^k . x
  int odd_index = 1;       // position of the remaining point in `orbit`
  Vec y;
  double alpha = 0.0;
  double residual = 0.0;   // max deviation from the claimed pattern
};

using CollapseOutcome = std::variant<OrbitCollapse, Inconclusive>;

/// Measures how far f on the orbit of x is from the collapse pattern with
/// the point at `odd_index` as the remaining one. alpha = 0 recovers a full
/// collapse.
inline OrbitCollapse collapse_at(const std::function<Vec(const Vec&)>& f, const Mat& action, int p, const Vec& x,
                                 int odd_index = 1) {
  OrbitCollapse c;
  c.odd_index = odd_index;
  c.orbit.push_back(x);
  for (int k = 1; k < p; ++k) c.orbit.push_back(action * c.orbit.back());
  std::vector<Vec> vals;
  for (const auto& q : c.orbit) vals.push_back(f(q));
  const auto d = vals.front().size();
  c.y = Vec::Zero(d);
  for (int k = 0; k < p; ++k)
    if (k != odd_index) c.y += vals[static_cast<std::size_t>(k)];
  c.y /= p - 1;
  const Vec drop = c.y - vals[static_cast<std::size_t>(odd_index)];
  c.alpha = drop.mean();
  c.residual = (drop.array() - c.alpha).abs().maxCoeff();
  for (int k = 0; k < p; ++k)
    if (k != odd_index) c.residual = std::max(c.residual, (vals[static_cast<std::size_t>(k)] - c.y).cwiseAbs().maxCoeff());
  return c;
}

/// Orbit collapse for f: S^n -> R^d, n = (p-1)d - 1, with the Z/p-action of
/// the join sphere (the antipode for p = 2). Built from the covers
/// A_i = {f_i fluctuates most on the orbit and f_i(x) is the orbit maximum}
/// with all excluded shifts equal to p-1.
inline CollapseOutcome orbit_collapse(int p, int d, const std::function<Vec(const Vec&)>& f, BUConfig cfg = {}) {
  require(is_prime(p), ErrorKind::InvalidParameter, "p must be prime");
  require(d >= 1, ErrorKind::InvalidParameter, "d must be >= 1");
  const Mat act = zp_action(p, d);
  const double mtol = cfg.matrix_tol;

  auto orbit_values = [f, act, p](const Vec& x) {
    std::vector<Vec> vals;
    Vec q = x;
    for (int k = 0; k < p; ++k) {
      vals.push_back(f(q));
      q = act * q;
    }
    return vals;
  };
  CoverFamilySet fs;
  fs.p = p;
  fs.action = act;
  std::vector<CoverOracle> sets;
  for (int i = 0; i < d; ++i) {
    CoverOracle o;
    o.membership = [orbit_values, i, d, mtol](const Vec& x) {
      const auto vals = orbit_values(x);
      require(vals.front().size() == d, ErrorKind::InvalidInput, "map has the wrong output dimension");
      std::vector<double> diam(static_cast<std::size_t>(d));
      for (int j = 0; j < d; ++j) {
        double lo = vals.front()[j], hi = lo;
        for (const auto& v : vals) {
          lo = std::min(lo, v[j]);
          hi = std::max(hi, v[j]);
        }
        diam[static_cast<std::size_t>(j)] = hi - lo;
      }
      const double top = *std::max_element(diam.begin(), diam.end());
      if (diam[static_cast<std::size_t>(i)] < top - mtol) return false;
      for (const auto& v : vals)
        if (vals.front()[i] < v[i] - mtol) return false;
      return true;
    };
    o.margin = mtol;
    o.description = "coordinate " + std::to_string(i) + " fluctuates most and peaks at x";
    sets.push_back(std::move(o));
  }
  fs.families = {sets};

  const double tol = cfg.refine.witness_tol;
  cfg.refine.accept = [&](const Vec& x, const std::vector<int>&) {
    // x lies in s^k A_i for k != p-1, so s^{-k} x peak; the remaining point is s.x
    return collapse_at(f, act, p, x, 1 % p).residual <= tol;
  };
  cfg.refine.accept_violation = [&](const Violation& v) {
    auto c = collapse_at(f, act, p, v.point, 1 % p);
    return c.residual <= tol && std::abs(c.alpha) <= tol;
  };
  auto out = solve_zp_cover(fs, std::vector<int>(static_cast<std::size_t>(d), p - 1), cfg.refine);
  if (auto* inc = std::get_if<Inconclusive>(&out)) return *inc;
  if (auto* v = std::get_if<Violation>(&out)) {
    require(v->kind != ViolationKind::CoverGap, ErrorKind::InvalidInput, "the induced cover has a gap");
    return collapse_at(f, act, p, v->point, 1 % p);
  }
  return collapse_at(f, act, p, std::get<CoverWitness>(out).point, 1 % p);
}

}  // namespace equibu
