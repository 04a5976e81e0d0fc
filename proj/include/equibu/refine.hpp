// Refinement engine shared by the cover solvers.
//
// Global phase: iterated barycentric subdivision of a symmetric sphere,
// equivariant vertex labelling, and a Fan search for facets carrying the
// target labels. Global subdivision alone cannot reach witness tolerances in
// reasonable time (facet counts grow like ((n+1)!)^depth), so candidates are
// then refined locally: a subdivided simplex patch centred at the current
// facet's barycenter is labelled with the same rule, and the smallest target
// facet inside it becomes the next candidate.
#pragma once

#include "equibu/fan.hpp"

#include <limits>
#include <optional>
#include <string>
#include <variant>

namespace equibu {

struct RefinementConfig {
  std::optional<SymmetricComplex> initial;  // defaults to the solver's base sphere
  int max_depth = 4;                        // global barycentric levels
  double witness_tol = 1e-3;
  double slack = 1e-3;                      // allowed spread of approximate violations
  int max_zoom = 80;
  int max_branches = 6;
  double zoom_factor = 2.0;
  std::size_t facet_budget = 200000;        // global levels stop before exceeding this
  /// Extra acceptance test on (point, assignment); the solver's own
  /// re-validation of its conclusion.
  std::function<bool(const Vec&, const std::vector<int>&)> accept;
  /// Extra acceptance test for approximate violations.
  std::function<bool(const Violation&)> accept_violation;

  void validate() const {
    require(max_depth >= 1, ErrorKind::InvalidParameter, "max_depth must be >= 1");
    require(witness_tol > 0 && slack > 0, ErrorKind::InvalidParameter, "tolerances must be positive");
    require(max_zoom >= 0 && max_branches >= 1, ErrorKind::InvalidParameter, "bad search budget");
  }
};

/// A point near the intersection of the required sets. support[k] is the
/// refinement vertex that carried target[k]; it lies in that label's set of
/// family assignment[k] (0-based).
struct EngineWitness {
  Vec point;
  std::vector<OrbitLabel> target;
  std::vector<int> assignment;
  std::vector<Vec> support;
  double residual = 0.0;
  std::vector<double> history;  // residual per accepted level
  int global_levels = 0;
  int zoom_steps = 0;
};

struct Inconclusive {
  std::string reason;
  double best_residual = std::numeric_limits<double>::infinity();
  Vec best_point;
};

using EngineOutcome = std::variant<EngineWitness, Violation, Inconclusive>;

/// A subdivided n-simplex with each vertex given by barycentric weights on
/// the corners, and the size of the face it subdivides.
struct PatchTemplate {
  std::vector<Vec> weights;
  std::vector<int> rank;
  std::vector<std::vector<std::size_t>> facets;
};

inline int patch_levels(int n) {
  switch (n) {
    case 1: return 4;
    case 2: return 3;
    case 3: return 2;
    default: return 1;
  }
}

inline PatchTemplate make_patch_template(int n, int levels) {
  SimplicialComplex cx = simplex_complex(n);
  std::map<VertexId, Vec> weight;
  std::map<VertexId, int> rank;
  for (VertexId v : cx.vertices()) weight[v] = Vec::Unit(n + 1, v);
  for (int level = 0; level < levels; ++level) {
    Subdivision sub = barycentric_subdivide(cx);
    std::map<VertexId, Vec> next;
    rank.clear();
    const auto& vs = sub.complex.vertices();
    for (std::size_t k = 0; k < vs.size(); ++k) {
      Vec w = Vec::Zero(n + 1);
      for (VertexId u : sub.origin[k]) w += weight.at(u);
      next[vs[k]] = w / static_cast<double>(sub.origin[k].size());
      rank[vs[k]] = static_cast<int>(sub.origin[k].size());
    }
    weight = std::move(next);
    cx = std::move(sub.complex);
  }
  PatchTemplate t;
  std::map<VertexId, std::size_t> index;
  for (VertexId v : cx.vertices()) {
    index[v] = t.weights.size();
    t.weights.push_back(weight.at(v));
    t.rank.push_back(levels == 0 ? 1 : rank.at(v));
  }
  for (const auto& f : cx.facets()) {
    std::vector<std::size_t> idx;
    for (VertexId v : f) idx.push_back(index.at(v));
    t.facets.push_back(std::move(idx));
  }
  return t;
}

namespace detail {

struct Cell {
  std::vector<Vec> points;
  std::vector<OrbitLabel> labels;
  std::vector<int> families;
};

struct TargetCandidate {
  Vec barycenter;
  double residual = 0.0;
  std::vector<int> assignment;  // family per target label
  std::vector<Vec> support;     // vertex per target label
};

struct DegenerateCandidate {
  int block = 1;
  std::vector<Vec> points;  // one per shift 0..p-1
  std::vector<int> families;
  double diameter = 0.0;
  Vec barycenter;
};

inline Vec normalized_mean(const std::vector<Vec>& pts) {
  Vec sum = Vec::Zero(pts.front().size());
  for (const auto& q : pts) sum += q;
  return normalized(sum);
}

inline std::optional<TargetCandidate> as_target(const Cell& c, const std::vector<OrbitLabel>& target) {
  if (c.labels.size() != target.size()) return std::nullopt;
  std::vector<std::size_t> order(c.labels.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return c.labels[a] < c.labels[b]; });
  std::vector<OrbitLabel> want = target;
  std::sort(want.begin(), want.end());
  for (std::size_t k = 0; k < want.size(); ++k)
    if (c.labels[order[k]] != want[k]) return std::nullopt;
  TargetCandidate t;
  t.barycenter = normalized_mean(c.points);
  for (const auto& q : c.points) t.residual = std::max(t.residual, (q - t.barycenter).norm());
  for (const auto& lab : target) {
    std::size_t k = 0;
    while (c.labels[k] != lab) ++k;
    t.assignment.push_back(c.families[k]);
    t.support.push_back(c.points[k]);
  }
  return t;
}

inline void degenerate_in(const Cell& c, int p, std::vector<DegenerateCandidate>& out) {
  std::map<int, std::vector<std::vector<std::size_t>>> by_block;
  for (std::size_t k = 0; k < c.labels.size(); ++k) {
    auto& slots = by_block[c.labels[k].block];
    slots.resize(static_cast<std::size_t>(p));
    slots[static_cast<std::size_t>(c.labels[k].shift)].push_back(k);
  }
  for (const auto& [block, slots] : by_block) {
    if (std::any_of(slots.begin(), slots.end(), [](const auto& s) { return s.empty(); })) continue;
    std::vector<std::size_t> pick(slots.size(), 0);
    while (true) {
      DegenerateCandidate d;
      d.block = block;
      for (std::size_t t = 0; t < slots.size(); ++t) {
        const std::size_t k = slots[t][pick[t]];
        d.points.push_back(c.points[k]);
        d.families.push_back(c.families[k]);
      }
      for (std::size_t a = 0; a < d.points.size(); ++a)
        for (std::size_t b = a + 1; b < d.points.size(); ++b)
          d.diameter = std::max(d.diameter, (d.points[a] - d.points[b]).norm());
      out.push_back(std::move(d));
      std::size_t pos = 0;
      while (pos < slots.size() && ++pick[pos] == slots[pos].size()) pick[pos++] = 0;
      if (pos == slots.size()) break;
    }
  }
}

}  // namespace detail

/// Searches a symmetric sphere for a point near the intersection of the sets
/// of `fs` named by `target`, labelling points with PointLabeler. When
/// `colorful`, a vertex subdividing a face with k vertices is labelled from
/// family k-1 (patch vertices likewise by their template rank); otherwise
/// from family 0.
///
/// Outcomes: a witness whose support facet has residual <= witness_tol and
/// passes `accept`, taken once the assignment repeats with barycenter
/// movement below witness_tol or once the branch stops improving; a violation (exact, at a vertex, or
/// approximate within `slack` from a shrinking orbit face); or inconclusive.
class RefinementEngine {
 public:
  RefinementEngine(SymmetricComplex base, const CoverFamilySet& fs, std::vector<OrbitLabel> target, bool colorful,
                   RefinementConfig cfg)
      : base_(std::move(base)), fs_(&fs), target_(std::move(target)), labeler_(fs, colorful), colorful_(colorful),
        cfg_(std::move(cfg)) {
    cfg_.validate();
    p_ = base_.order();
    require(fs.p == p_, ErrorKind::InvalidParameter, "group order mismatch");
    n_ = base_.dimension();
    require(static_cast<int>(target_.size()) == n_ + 1, ErrorKind::InvalidParameter,
            "target label count must equal the facet size");
    if (n_ >= 1) patch_ = make_patch_template(n_, patch_levels(n_));
  }

  EngineOutcome run() {
    SymmetricComplex sc = cfg_.initial ? *cfg_.initial : base_;
    int levels = 0;
    for (; levels < cfg_.max_depth; ++levels) {
      const std::size_t facets = sc.complex.facets().size();
      std::size_t growth = 1;
      for (int k = 2; k <= n_ + 1; ++k) growth *= static_cast<std::size_t>(k);
      if (levels > 0 && facets * growth > cfg_.facet_budget) break;
      sc = barycentric_subdivide(sc);
    }
    global_levels_ = levels;

    auto labelled = label_equivariantly(sc, [&](const Vec& x, int rank) {
      return labeler_(x, colorful_ ? rank - 1 : 0);
    });
    if (auto* v = std::get_if<Violation>(&labelled)) return finish_violation(*v);
    const auto& labels = std::get<OrbitLabeling>(labelled);

    std::vector<detail::TargetCandidate> targets;
    std::vector<detail::DegenerateCandidate> degenerate;
    for (const auto& f : sc.complex.facets()) {
      detail::Cell cell;
      for (VertexId v : f) {
        cell.points.push_back(sc.coord(v));
        cell.labels.push_back(labels.at(v));
        cell.families.push_back(colorful_ ? sc.rank_of(v) - 1 : 0);
      }
      if (auto t = detail::as_target(cell, target_)) targets.push_back(std::move(*t));
      detail::degenerate_in(cell, p_, degenerate);
    }

    int branches = 0;
    for (const auto& start : targets) {
      if (branches++ >= cfg_.max_branches) break;
      auto out = zoom_target(start);
      if (out) return *out;
    }

    std::stable_sort(degenerate.begin(), degenerate.end(),
                     [](const auto& a, const auto& b) { return a.diameter < b.diameter; });
    branches = 0;
    for (auto& start : degenerate) {
      if (branches++ >= cfg_.max_branches) break;
      auto out = zoom_degenerate(start);
      if (out) return *out;
    }

    Inconclusive inc;
    inc.reason = targets.empty() && degenerate.empty() ? "no certificate at the finest global level"
                                                       : "depth exhausted";
    inc.best_residual = best_residual_;
    inc.best_point = best_point_;
    return inc;
  }

 private:
  /// Patch cells around `center` with circumradius rho; nullopt plus a
  /// violation when a patch vertex breaches the hypotheses.
  std::variant<std::vector<detail::Cell>, Violation> patch_cells(const Vec& center, double rho) {
    const Mat tangent = tangent_basis(center);
    const Mat simplex = regular_simplex(n_);
    std::vector<Vec> corners;
    for (int k = 0; k <= n_; ++k) corners.push_back(normalized(center + rho * tangent * simplex.col(k)));
    std::vector<Vec> pts(patch_.weights.size());
    std::vector<PointLabel> labs(patch_.weights.size());
    parallel_for(pts.size(), [&](std::size_t k) {
      Vec q = Vec::Zero(center.size());
      for (int c = 0; c <= n_; ++c) q += patch_.weights[k][c] * corners[static_cast<std::size_t>(c)];
      pts[k] = normalized(q);
      labs[k] = labeler_(pts[k], colorful_ ? patch_.rank[k] - 1 : 0);
    });
    for (auto& l : labs)
      if (l.violation) return *l.violation;
    std::vector<detail::Cell> cells;
    cells.reserve(patch_.facets.size());
    for (const auto& f : patch_.facets) {
      detail::Cell cell;
      for (std::size_t k : f) {
        cell.points.push_back(pts[k]);
        cell.labels.push_back(*labs[k].label);
        cell.families.push_back(colorful_ ? patch_.rank[k] - 1 : 0);
      }
      cells.push_back(std::move(cell));
    }
    return cells;
  }

  void note_best(const Vec& x, double r) {
    if (r < best_residual_) {
      best_residual_ = r;
      best_point_ = x;
    }
  }

  bool accepted(const detail::TargetCandidate& cur) const {
    return !cfg_.accept || cfg_.accept(cur.barycenter, cur.assignment);
  }

  EngineWitness make_witness(const detail::TargetCandidate& cur, const std::vector<double>& history, int steps) const {
    EngineWitness w;
    w.point = cur.barycenter;
    w.target = target_;
    w.assignment = cur.assignment;
    w.support = cur.support;
    w.residual = cur.residual;
    w.history = history;
    w.global_levels = global_levels_;
    w.zoom_steps = steps;
    for (std::size_t k = 1; k < history.size(); ++k)
      if (history[k] > history[k - 1]) throw std::logic_error("refinement residuals increased on the accepted branch");
    return w;
  }

  std::optional<EngineOutcome> zoom_target(detail::TargetCandidate cur) {
    std::vector<double> history{cur.residual};
    note_best(cur.barycenter, cur.residual);
    if (n_ == 0 || cur.residual == 0.0) {
      if (accepted(cur)) return make_witness(cur, history, 0);
      return std::nullopt;
    }
    std::optional<detail::TargetCandidate> prev;
    for (int step = 0; step <= cfg_.max_zoom; ++step) {
      if (prev && cur.residual <= cfg_.witness_tol && prev->assignment == cur.assignment &&
          (prev->barycenter - cur.barycenter).norm() < cfg_.witness_tol && accepted(cur))
        return make_witness(cur, history, step);
      if (step == cfg_.max_zoom) break;
      bool advanced = false;
      for (int attempt = 0; attempt < 3 && !advanced; ++attempt) {
        const double rho = cfg_.zoom_factor * std::pow(2.0, attempt) * std::max(cur.residual, 1e-15);
        auto cells = patch_cells(cur.barycenter, rho);
        if (auto* v = std::get_if<Violation>(&cells)) return finish_violation(*v);
        std::optional<detail::TargetCandidate> best;
        bool best_same = false;
        for (const auto& cell : std::get<std::vector<detail::Cell>>(cells)) {
          auto t = detail::as_target(cell, target_);
          if (!t || t->residual > cur.residual) continue;
          const bool same = t->assignment == cur.assignment;
          if (!best || (same && !best_same) || (same == best_same && t->residual < best->residual)) {
            best = std::move(t);
            best_same = same;
          }
        }
        if (best) {
          prev = std::move(cur);
          cur = std::move(*best);
          history.push_back(cur.residual);
          note_best(cur.barycenter, cur.residual);
          advanced = true;
        }
      }
      if (!advanced || cur.residual < 1e-14) break;  // no further progress in double precision
    }
    // The support points certify the witness on their own; stability of the
    // assignment is only a stopping heuristic, and with equal families it may
    // flip forever.
    if (cur.residual <= cfg_.witness_tol && accepted(cur)) return make_witness(cur, history, static_cast<int>(history.size()) - 1);
    return std::nullopt;
  }

  /// Builds the claims of an orbit face: the vertex with shift g is pulled
  /// back by s^{-g} and checked against the untranslated set. Nullopt when
  /// the check fails (round-off at a set boundary).
  std::optional<Violation> degenerate_violation(const detail::DegenerateCandidate& d) const {
    Violation v;
    v.set = d.block - 1;
    const bool distinct = std::set<int>(d.families.begin(), d.families.end()).size() == d.families.size();
    if (colorful_ && distinct)
      v.kind = p_ == 2 ? ViolationKind::CrossDisjointness : ViolationKind::CrossOrbit;
    else
      v.kind = p_ == 2 ? ViolationKind::Disjointness : ViolationKind::OrbitIntersection;
    for (int g = 0; g < p_; ++g) {
      const int fam = d.families[static_cast<std::size_t>(g)];
      Vec pre = fs_->act(d.points[static_cast<std::size_t>(g)], -g);
      if (!fs_->families[static_cast<std::size_t>(fam)][static_cast<std::size_t>(v.set)](pre)) return std::nullopt;
      v.claims.push_back({fam, g, std::move(pre)});
    }
    v.point = d.barycenter;
    v.spread = d.diameter;
    return v;
  }

  std::optional<EngineOutcome> zoom_degenerate(detail::DegenerateCandidate cur) {
    cur.barycenter = detail::normalized_mean(cur.points);
    for (int step = 0; step <= cfg_.max_zoom; ++step) {
      if (cur.diameter <= cfg_.slack) {
        if (auto v = degenerate_violation(cur)) {
          if (!cfg_.accept_violation || cfg_.accept_violation(*v)) return EngineOutcome(*v);
        }
      }
      if (step == cfg_.max_zoom || n_ == 0) break;
      bool advanced = false;
      for (int attempt = 0; attempt < 3 && !advanced; ++attempt) {
        const double rho = cfg_.zoom_factor * std::pow(2.0, attempt) * std::max(cur.diameter, 1e-15);
        auto cells = patch_cells(cur.barycenter, rho);
        if (auto* v = std::get_if<Violation>(&cells)) return finish_violation(*v);
        std::vector<detail::DegenerateCandidate> found;
        for (const auto& cell : std::get<std::vector<detail::Cell>>(cells)) detail::degenerate_in(cell, p_, found);
        std::optional<detail::DegenerateCandidate> best;
        for (auto& d : found)
          if (d.diameter <= cur.diameter && (!best || d.diameter < best->diameter)) best = std::move(d);
        if (best) {
          cur = std::move(*best);
          cur.barycenter = detail::normalized_mean(cur.points);
          advanced = true;
        }
      }
      if (!advanced || cur.diameter < 1e-14) break;
    }
    return std::nullopt;
  }

  EngineOutcome finish_violation(Violation v) const {
    std::vector<Vec> located;
    for (const auto& c : v.claims) located.push_back(fs_->act(c.point, c.shift));
    if (!located.empty()) {
      if (v.point.size() == 0) v.point = detail::normalized_mean(located);
      double spread = 0;
      for (std::size_t a = 0; a < located.size(); ++a)
        for (std::size_t b = a + 1; b < located.size(); ++b) spread = std::max(spread, (located[a] - located[b]).norm());
      v.spread = spread;
    }
    return v;
  }

  SymmetricComplex base_;
  const CoverFamilySet* fs_;
  std::vector<OrbitLabel> target_;
  PointLabeler labeler_;
  bool colorful_;
  RefinementConfig cfg_;
  int p_ = 2;
  int n_ = 0;
  int global_levels_ = 0;
  PatchTemplate patch_;
  double best_residual_ = std::numeric_limits<double>::infinity();
  Vec best_point_;
};

}  // namespace equibu
