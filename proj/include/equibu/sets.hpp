// Closed sets on spheres given by membership oracles, orbit labels, and the
// equivariant point labeller that turns a family of covers into vertex
// labels.
#pragma once

#include "equibu/core.hpp"

#include <compare>
#include <numbers>
#include <optional>
#include <string>

namespace equibu {

/// A label (j, t) in [d] x Z/p. For p = 2, shift 0 is the label +j and
/// shift 1 is -j.
struct OrbitLabel {
  int block = 1;  // 1-based
  int shift = 0;  // in [0, p)
  auto operator<=>(const OrbitLabel&) const = default;
};

inline int to_signed(const OrbitLabel& l) { return l.shift == 0 ? l.block : -l.block; }
inline OrbitLabel from_signed(int label) { return {std::abs(label), label > 0 ? 0 : 1}; }

/// Membership oracle for one closed set A_i^{(j)}. The margin is the
/// distance slack already folded into `membership`; it is recorded so that
/// callers know how "closed" the set was treated.
struct CoverOracle {
  std::function<bool(const Vec&)> membership;
  double margin = 0.0;
  std::string description;

  bool operator()(const Vec& x) const { return membership(x); }
};

/// families[j][i] is A_i^{(j)}. The translate s.A is tested as
/// membership(s^{-1} x), with s acting by `action` (order p).
struct CoverFamilySet {
  int p = 2;
  Mat action;  // orthogonal generator on the ambient space
  std::vector<std::vector<CoverOracle>> families;

  int sets() const { return families.empty() ? 0 : static_cast<int>(families.front().size()); }
  /// Dimension n of the sphere: (p - 1) * sets - 1.
  int sphere_dimension() const { return (p - 1) * sets() - 1; }

  Vec act(const Vec& x, int power) const {
    power = mod(power, p);
    Vec y = x;
    for (int s = 0; s < power; ++s) y = action * y;
    return y;
  }
  /// Is x in shift . A_set^{(family)}? (0-based set and family.)
  bool contains(int family, int set, int shift, const Vec& x) const {
    return families[static_cast<std::size_t>(family)][static_cast<std::size_t>(set)](act(x, -shift));
  }
};

/// A membership claim: `point` lies in A_set^{(family)} itself, so
/// act(point, shift) lies in the translate shift . A_set^{(family)}. Storing
/// the evaluated pre-image keeps re-validation bit-exact.
struct MembershipClaim {
  int family = 0;  // 0-based
  int shift = 0;
  Vec point;
};

enum class ViolationKind {
  CoverGap,            // a point in no set of its family
  Disjointness,        // A_i meets -A_i  (uncolored, p = 2)
  CrossDisjointness,   // A_i^{(j)} meets -A_i^{(l)}, j != l
  OrbitIntersection,   // all translates of A_i share a point (uncolored, Z/p)
  CrossOrbit,          // translates of A_i^{(j_k)} share a point, j_k distinct
};

inline const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::CoverGap: return "cover-violation";
    case ViolationKind::Disjointness: return "disjointness-violation";
    case ViolationKind::CrossDisjointness: return "cross-disjointness-violation";
    case ViolationKind::OrbitIntersection: return "orbit-intersection-violation";
    case ViolationKind::CrossOrbit: return "cross-orbit-violation";
  }
  return "violation";
}

/// Hypothesis breach. Every claim is checkable with the oracles alone;
/// `spread` is the largest distance between claim points (0 when the breach
/// was found at a single point).
struct Violation {
  ViolationKind kind = ViolationKind::CoverGap;
  int set = 0;  // 0-based
  std::vector<MembershipClaim> claims;
  Vec point;
  double spread = 0.0;
};

/// Largest distance between the translated claim points.
inline double claims_spread(const CoverFamilySet& fs, const std::vector<MembershipClaim>& claims) {
  std::vector<Vec> located;
  for (const auto& c : claims) located.push_back(fs.act(c.point, c.shift));
  double s = 0;
  for (std::size_t a = 0; a < located.size(); ++a)
    for (std::size_t b = a + 1; b < located.size(); ++b) s = std::max(s, (located[a] - located[b]).norm());
  return s;
}

/// Re-checks a violation with the oracles: every claim holds and the claim
/// points lie within `slack` of each other.
inline bool validate_violation(const CoverFamilySet& fs, const Violation& v, double slack) {
  if (v.kind == ViolationKind::CoverGap) {
    if (v.claims.size() != 1) return false;
    const auto& c = v.claims.front();
    for (int i = 0; i < fs.sets(); ++i)
      for (int g = 0; g < fs.p; ++g)
        if (fs.contains(c.family, i, g, c.point)) return false;
    return true;
  }
  if (static_cast<int>(v.claims.size()) != fs.p) return false;
  std::vector<bool> shift_seen(static_cast<std::size_t>(fs.p), false);
  for (const auto& c : v.claims) {
    if (c.shift < 0 || c.shift >= fs.p) return false;
    if (!fs.families[static_cast<std::size_t>(c.family)][static_cast<std::size_t>(v.set)](c.point)) return false;
    shift_seen[static_cast<std::size_t>(c.shift)] = true;
  }
  for (bool b : shift_seen)
    if (!b) return false;
  if (v.kind == ViolationKind::CrossDisjointness || v.kind == ViolationKind::CrossOrbit) {
    for (std::size_t a = 0; a < v.claims.size(); ++a)
      for (std::size_t b = a + 1; b < v.claims.size(); ++b)
        if (v.claims[a].family == v.claims[b].family) return false;
  }
  return claims_spread(fs, v.claims) <= slack;
}

enum class TieRule { LowestIndex };

/// Outcome of labelling one point: a label, or a hypothesis breach at it.
struct PointLabel {
  std::optional<OrbitLabel> label;
  std::optional<Violation> violation;
};

/// Equivariant labelling rule on points. The representative of the orbit of
/// x is its lexicographically smallest translate r = s^m x; r gets the
/// lowest (set, shift) with r in shift . A_set^{(family)}, and x inherits
/// (set, shift - m). Before labelling, r is checked for the hypothesis breach
/// appropriate to the mode (uncolored: all translates of one set; colorful:
/// translates from pairwise distinct families).
class PointLabeler {
 public:
  PointLabeler(const CoverFamilySet& fs, bool colorful, bool check_violations = true)
      : fs_(&fs), colorful_(colorful), check_(check_violations) {}

  /// `family` is 0-based; ignored in uncolored mode.
  PointLabel operator()(const Vec& x, int family) const {
    const int p = fs_->p;
    std::vector<Vec> orbit;
    orbit.reserve(static_cast<std::size_t>(p));
    orbit.push_back(x);
    for (int s = 1; s < p; ++s) orbit.push_back(fs_->action * orbit.back());
    int m = 0;
    for (int s = 1; s < p; ++s)
      if (lex_less(orbit[static_cast<std::size_t>(s)], orbit[static_cast<std::size_t>(m)])) m = s;
    const Vec& rep = orbit[static_cast<std::size_t>(m)];
    // rep in g.A  <=>  s^{-g} rep = orbit[m - g] in A
    auto in = [&](int fam, int set, int g) {
      return fs_->families[static_cast<std::size_t>(fam)][static_cast<std::size_t>(set)](
          orbit[static_cast<std::size_t>(mod(m - g, p))]);
    };
    const int fam = colorful_ ? family : 0;

    auto preimage = [&](int g) { return orbit[static_cast<std::size_t>(mod(m - g, p))]; };

    PointLabel out;
    if (check_) {
      if (auto v = find_violation(in, preimage, rep)) {
        out.violation = std::move(v);
        return out;
      }
    }
    for (int i = 0; i < fs_->sets(); ++i)
      for (int g = 0; g < p; ++g)
        if (in(fam, i, g)) {
          out.label = OrbitLabel{i + 1, mod(g - m, p)};
          return out;
        }
    Violation gap;
    gap.kind = ViolationKind::CoverGap;
    gap.claims.push_back({fam, 0, x});
    gap.point = x;
    out.violation = std::move(gap);
    return out;
  }

 private:
  template <class In, class Pre>
  std::optional<Violation> find_violation(const In& in, const Pre& preimage, const Vec& rep) const {
    const int p = fs_->p;
    const int nfam = static_cast<int>(fs_->families.size());
    for (int i = 0; i < fs_->sets(); ++i) {
      if (!colorful_) {
        bool all = true;
        for (int g = 0; g < p && all; ++g) all = in(0, i, g);
        if (all) {
          Violation v;
          v.kind = p == 2 ? ViolationKind::Disjointness : ViolationKind::OrbitIntersection;
          v.set = i;
          for (int g = 0; g < p; ++g) v.claims.push_back({0, g, preimage(g)});
          v.point = rep;
          return v;
        }
        continue;
      }
      // members[g] = families j with rep in g.A_i^{(j)}
      std::vector<std::vector<int>> members(static_cast<std::size_t>(p));
      for (int g = 0; g < p; ++g)
        for (int j = 0; j < nfam; ++j)
          if (in(j, i, g)) members[static_cast<std::size_t>(g)].push_back(j);
      std::vector<int> pick(static_cast<std::size_t>(p), -1);
      std::function<bool(int)> dfs = [&](int g) {
        if (g == p) return true;
        for (int j : members[static_cast<std::size_t>(g)]) {
          if (std::find(pick.begin(), pick.begin() + g, j) != pick.begin() + g) continue;
          pick[static_cast<std::size_t>(g)] = j;
          if (dfs(g + 1)) return true;
        }
        return false;
      };
      if (dfs(0)) {
        Violation v;
        v.kind = p == 2 ? ViolationKind::CrossDisjointness : ViolationKind::CrossOrbit;
        v.set = i;
        for (int g = 0; g < p; ++g) v.claims.push_back({pick[static_cast<std::size_t>(g)], g, preimage(g)});
        v.point = rep;
        return v;
      }
    }
    return std::nullopt;
  }

  const CoverFamilySet* fs_;
  bool colorful_;
  bool check_;
};

// ---------------------------------------------------------------------------
// Named set primitives used by the JSON schema.

inline double angle_between(const Vec& a, const Vec& b) {
  const double c = std::clamp(a.normalized().dot(b.normalized()), -1.0, 1.0);
  return std::acos(c);
}

/// Spherical cap {x : angle(x, center) <= radius + margin}, angles in degrees.
inline CoverOracle cap_set(Vec center, double radius_deg, double margin_deg = 0.0) {
  const double limit = (radius_deg + margin_deg) * std::numbers::pi / 180.0;
  center.normalize();
  CoverOracle o;
  o.membership = [center, limit](const Vec& x) { return angle_between(x, center) <= limit; };
  o.margin = margin_deg;
  o.description = "cap";
  return o;
}

/// Closed arc of S^1 from `from_deg` counter-clockwise to `to_deg`.
inline CoverOracle arc_set(double from_deg, double to_deg, double margin_deg = 0.0) {
  const double lo = from_deg - margin_deg;
  const double span = (to_deg - from_deg) + 2 * margin_deg;
  CoverOracle o;
  o.membership = [lo, span](const Vec& x) {
    if (span >= 360.0) return true;
    double a = std::atan2(x[1], x[0]) * 180.0 / std::numbers::pi - lo;
    a = std::fmod(a, 360.0);
    if (a < 0) a += 360.0;
    // closed arc; absorb round-off at the endpoints
    return a <= span + 1e-12 || a >= 360.0 - 1e-12;
  };
  o.margin = margin_deg;
  o.description = "arc";
  return o;
}

/// Halfspace {x : <normal, x> >= offset - margin}.
inline CoverOracle halfspace_set(Vec normal, double offset, double margin = 0.0) {
  CoverOracle o;
  o.membership = [normal, offset, margin](const Vec& x) { return normal.dot(x) >= offset - margin; };
  o.margin = margin;
  o.description = "halfspace";
  return o;
}

}  // namespace equibu
