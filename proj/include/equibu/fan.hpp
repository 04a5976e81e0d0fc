// Discrete Fan-lemma searches on symmetric complexes: equivariant labelings,
// certificates, and the rainbow labelling induced by cover families.
#pragma once

#include "equibu/complexes.hpp"
#include "equibu/sets.hpp"

#include <map>
#include <optional>
#include <set>
#include <variant>

namespace equibu {

/// Z/2 labels: nonzero integers in +-[d+1].
using SignedLabeling = std::map<VertexId, int>;
/// Z/p labels: (block j in [d], shift t in Z/p).
using OrbitLabeling = std::map<VertexId, OrbitLabel>;

inline OrbitLabeling to_orbit_labeling(const SignedLabeling& l) {
  OrbitLabeling out;
  for (const auto& [v, lab] : l) out[v] = from_signed(lab);
  return out;
}

inline SignedLabeling to_signed_labeling(const OrbitLabeling& l) {
  SignedLabeling out;
  for (const auto& [v, lab] : l) out[v] = to_signed(lab);
  return out;
}

/// An edge carrying labels {+j, -j}.
struct ComplementaryEdge {
  Face edge;
  int label = 1;
};

/// A face of size p carrying all labels {j} x Z/p.
struct OrbitFace {
  Face face;
  int block = 1;
};

/// A facet carrying exactly the target labels; matching[k] is the vertex
/// carrying the k-th target label.
struct TargetFacet {
  Face facet;
  std::vector<OrbitLabel> labels;
  std::vector<VertexId> matching;
};

using FanCertificate = std::variant<ComplementaryEdge, OrbitFace, TargetFacet>;

/// Target label set {s_1 * 1, ..., s_{d+1} * (d+1)} in orbit-label form.
inline std::vector<OrbitLabel> z2_target(const std::vector<int>& signs) {
  std::vector<OrbitLabel> out;
  for (std::size_t i = 0; i < signs.size(); ++i) {
    require(signs[i] == 1 || signs[i] == -1, ErrorKind::InvalidParameter, "signs must be +1 or -1");
    out.push_back({static_cast<int>(i) + 1, signs[i] > 0 ? 0 : 1});
  }
  return out;
}

/// Target label set {(j, s) : j in [d], s != s_j}.
inline std::vector<OrbitLabel> zp_target(int p, const std::vector<int>& shifts) {
  std::vector<OrbitLabel> out;
  for (std::size_t j = 0; j < shifts.size(); ++j) {
    require(shifts[j] >= 0 && shifts[j] < p, ErrorKind::InvalidParameter, "shift out of range");
    for (int s = 0; s < p; ++s)
      if (s != shifts[j]) out.push_back({static_cast<int>(j) + 1, s});
  }
  return out;
}

/// Checks that every vertex carries a label in [blocks] x Z/p and that
/// l(s.v) = (j, t + 1).
inline void check_orbit_labeling(const SymmetricComplex& sc, const OrbitLabeling& l, int blocks) {
  const int p = sc.order();
  for (VertexId v : sc.complex.vertices()) {
    auto it = l.find(v);
    require(it != l.end(), ErrorKind::InvalidLabeling, "vertex " + std::to_string(v) + " is unlabelled");
    const OrbitLabel lab = it->second;
    require(lab.block >= 1 && lab.block <= blocks && lab.shift >= 0 && lab.shift < p,
            ErrorKind::InvalidLabeling, "label out of range at vertex " + std::to_string(v));
    const VertexId w = sc.action.apply(v);
    auto jt = l.find(w);
    require(jt != l.end() && jt->second == OrbitLabel{lab.block, mod(lab.shift + 1, p)},
            ErrorKind::InvalidLabeling, "labeling is not equivariant at vertex " + std::to_string(v));
  }
}

inline void check_signed_labeling(const SymmetricComplex& sc, const SignedLabeling& l, int d) {
  require(sc.order() == 2, ErrorKind::InvalidParameter, "signed labelings need p = 2");
  for (VertexId v : sc.complex.vertices()) {
    auto it = l.find(v);
    require(it != l.end(), ErrorKind::InvalidLabeling, "vertex " + std::to_string(v) + " is unlabelled");
    require(it->second != 0 && std::abs(it->second) <= d + 1, ErrorKind::InvalidLabeling,
            "label out of range at vertex " + std::to_string(v));
    auto jt = l.find(sc.action.apply(v));
    require(jt != l.end() && jt->second == -it->second, ErrorKind::InvalidLabeling,
            "labeling is not antipodal at vertex " + std::to_string(v));
  }
}

namespace detail {

/// Full-orbit subfaces of one facet: choose one vertex per shift within a
/// block that shows all p shifts.
inline void orbit_faces_in(const Face& facet, const OrbitLabeling& l, int p, std::vector<OrbitFace>& out) {
  std::map<int, std::vector<std::vector<VertexId>>> by_block;
  for (VertexId v : facet) {
    const OrbitLabel lab = l.at(v);
    auto& slots = by_block[lab.block];
    slots.resize(static_cast<std::size_t>(p));
    slots[static_cast<std::size_t>(lab.shift)].push_back(v);
  }
  for (const auto& [block, slots] : by_block) {
    if (std::any_of(slots.begin(), slots.end(), [](const auto& s) { return s.empty(); })) continue;
    std::vector<std::size_t> pick(slots.size(), 0);
    while (true) {
      Face f;
      for (std::size_t t = 0; t < slots.size(); ++t) f.push_back(slots[t][pick[t]]);
      std::sort(f.begin(), f.end());
      out.push_back({std::move(f), block});
      std::size_t pos = 0;
      while (pos < slots.size() && ++pick[pos] == slots[pos].size()) pick[pos++] = 0;
      if (pos == slots.size()) break;
    }
  }
}

/// Order for choosing among orbit faces: canonical order on absolute ids,
/// then the face with more positive ids. For p = 2 this picks {+1,+2} over
/// {-1,-2}; for odd p all ids are nonnegative and it is the canonical order.
inline bool orbit_face_less(const OrbitFace& a, const OrbitFace& b) {
  auto abs_sorted = [](Face f) {
    for (auto& v : f) v = std::abs(v);
    std::sort(f.begin(), f.end());
    return f;
  };
  const Face aa = abs_sorted(a.face), bb = abs_sorted(b.face);
  if (aa != bb) return canonical_less(aa, bb);
  return b.face < a.face;
}

inline std::optional<TargetFacet> match_target(const Face& facet, const OrbitLabeling& l,
                                               const std::vector<OrbitLabel>& target) {
  if (facet.size() != target.size()) return std::nullopt;
  std::vector<std::pair<OrbitLabel, VertexId>> got;
  for (VertexId v : facet) got.emplace_back(l.at(v), v);
  std::sort(got.begin(), got.end());
  std::vector<OrbitLabel> want = target;
  std::sort(want.begin(), want.end());
  for (std::size_t k = 0; k < want.size(); ++k)
    if (got[k].first != want[k]) return std::nullopt;
  TargetFacet tf{facet, target, {}};
  for (const auto& lab : target)
    tf.matching.push_back(std::lower_bound(got.begin(), got.end(), std::make_pair(lab, VertexId{}),
                                           [](const auto& a, const auto& b) { return a.first < b.first; })
                              ->second);
  return tf;
}

}  // namespace detail

/// Orbit faces are preferred (smallest by orbit_face_less); otherwise the
/// first facet in canonical order carrying the target labels.
inline std::optional<FanCertificate> find_fan_certificate(const SymmetricComplex& sc, const OrbitLabeling& l,
                                                          const std::vector<OrbitLabel>& target) {
  const int p = sc.order();
  std::vector<OrbitFace> orbit;
  for (const auto& f : sc.complex.facets()) detail::orbit_faces_in(f, l, p, orbit);
  if (!orbit.empty()) {
    auto best = std::min_element(orbit.begin(), orbit.end(), detail::orbit_face_less);
    if (p == 2) return ComplementaryEdge{best->face, best->block};
    return *best;
  }
  for (const auto& f : sc.complex.facets())
    if (auto tf = detail::match_target(f, l, target)) return *tf;
  return std::nullopt;
}

/// Z/2 search: a complementary edge or a facet labelled {s_i * i}.
inline FanCertificate solve_fan_z2(const SymmetricComplex& sc, const SignedLabeling& l, const std::vector<int>& signs) {
  const int d = sc.dimension();
  require(static_cast<int>(signs.size()) == d + 1, ErrorKind::InvalidParameter, "need d+1 signs");
  check_signed_labeling(sc, l, d);
  auto cert = find_fan_certificate(sc, to_orbit_labeling(l), z2_target(signs));
  if (!cert) throw std::logic_error("no Fan certificate found; the input is not a sphere triangulation");
  return *cert;
}

/// Z/p search on a sphere of dimension (p-1)d - 1: an orbit face
/// {j} x Z/p or a facet labelled {(j, s) : s != s_j}.
inline FanCertificate solve_fan_zp(const SymmetricComplex& sc, const OrbitLabeling& l, const std::vector<int>& shifts) {
  const int p = sc.order();
  const int d = static_cast<int>(shifts.size());
  require(is_prime(p), ErrorKind::InvalidParameter, "p must be prime");
  require(sc.dimension() == (p - 1) * d - 1, ErrorKind::InvalidParameter, "dimension must be (p-1)d - 1");
  check_orbit_labeling(sc, l, d);
  auto cert = find_fan_certificate(sc, l, zp_target(p, shifts));
  if (!cert) throw std::logic_error("no Fan certificate found; the input is not a sphere triangulation");
  return *cert;
}

/// On a sphere of dimension (p-1)d, labels in [d] x Z/p always produce a
/// full-orbit face.
inline OrbitFace forced_orbit_face(const SymmetricComplex& sc, const OrbitLabeling& l) {
  const int p = sc.order();
  require(sc.dimension() % (p - 1) == 0, ErrorKind::InvalidParameter, "dimension must be a multiple of p-1");
  const int d = sc.dimension() / (p - 1);
  check_orbit_labeling(sc, l, d);
  std::vector<OrbitFace> orbit;
  for (const auto& f : sc.complex.facets()) detail::orbit_faces_in(f, l, p, orbit);
  if (orbit.empty()) throw std::logic_error("no orbit face found; the input is not a sphere triangulation");
  return *std::min_element(orbit.begin(), orbit.end(), detail::orbit_face_less);
}

/// Re-reads the labeling on the certificate's face.
inline bool validate_certificate(const SymmetricComplex& sc, const OrbitLabeling& l,
                                 const std::vector<OrbitLabel>& target, const FanCertificate& cert) {
  const int p = sc.order();
  auto label_of = [&](VertexId v) -> std::optional<OrbitLabel> {
    auto it = l.find(v);
    if (it == l.end()) return std::nullopt;
    return it->second;
  };
  auto full_orbit = [&](const Face& face, int block) {
    if (static_cast<int>(face.size()) != p || !sc.complex.has_face(face)) return false;
    std::set<int> shifts;
    for (VertexId v : face) {
      auto lab = label_of(v);
      if (!lab || lab->block != block) return false;
      shifts.insert(lab->shift);
    }
    return static_cast<int>(shifts.size()) == p;
  };
  if (const auto* e = std::get_if<ComplementaryEdge>(&cert)) return p == 2 && full_orbit(e->edge, e->label);
  if (const auto* o = std::get_if<OrbitFace>(&cert)) return full_orbit(o->face, o->block);
  const auto& t = std::get<TargetFacet>(cert);
  if (!sc.complex.has_face(t.facet) || t.facet.size() != target.size()) return false;
  if (std::set<VertexId>(t.facet.begin(), t.facet.end()).size() != t.facet.size()) return false;
  std::vector<OrbitLabel> want = target, got;
  for (VertexId v : t.facet) {
    auto lab = label_of(v);
    if (!lab) return false;
    got.push_back(*lab);
  }
  std::sort(want.begin(), want.end());
  std::sort(got.begin(), got.end());
  if (want != got) return false;
  if (t.matching.size() != target.size()) return false;
  for (std::size_t k = 0; k < target.size(); ++k) {
    auto lab = label_of(t.matching[k]);
    if (!lab || *lab != target[k]) return false;
  }
  return true;
}

inline bool validate_certificate(const SymmetricComplex& sc, const SignedLabeling& l, const std::vector<int>& signs,
                                 const FanCertificate& cert) {
  return validate_certificate(sc, to_orbit_labeling(l), z2_target(signs), cert);
}

/// Labels every vertex by `rule(point, rank)` on one representative per
/// vertex orbit (the lexicographically smallest coordinates) and propagates
/// l(s^k v) = (j, t + k). Returns the first breach reported by the rule, in
/// vertex order.
template <class Rule>
std::variant<OrbitLabeling, Violation> label_equivariantly(const SymmetricComplex& sc, Rule&& rule) {
  const auto& vs = sc.complex.vertices();
  const int p = sc.order();
  std::vector<std::size_t> reps;
  std::vector<bool> seen(vs.size(), false);
  for (std::size_t k = 0; k < vs.size(); ++k) {
    if (seen[k]) continue;
    std::size_t best = k;
    VertexId w = vs[k];
    for (int s = 0; s < p; ++s) {
      const std::size_t idx = sc.index(w);
      seen[idx] = true;
      if (lex_less(sc.coords[idx], sc.coords[best])) best = idx;
      w = sc.action.apply(w);
    }
    reps.push_back(best);
  }
  std::sort(reps.begin(), reps.end());

  std::vector<PointLabel> results(reps.size());
  parallel_for(reps.size(), [&](std::size_t r) {
    const std::size_t idx = reps[r];
    results[r] = rule(sc.coords[idx], sc.face_rank.empty() ? 1 : sc.face_rank[idx]);
  });

  OrbitLabeling out;
  for (std::size_t r = 0; r < reps.size(); ++r) {
    if (results[r].violation) return *results[r].violation;
    OrbitLabel lab = *results[r].label;
    VertexId w = vs[reps[r]];
    for (int s = 0; s < p; ++s) {
      out[w] = lab;
      lab.shift = mod(lab.shift + 1, p);
      w = sc.action.apply(w);
    }
  }
  return out;
}

/// The colorful labelling: a vertex subdividing a face with k vertices is
/// labelled from family k (all from the single family when only one is
/// given). Cover gaps are reported as a Violation.
inline std::variant<OrbitLabeling, Violation> rainbow_labeling(const SymmetricComplex& sc, const CoverFamilySet& fs,
                                                               TieRule = TieRule::LowestIndex) {
  require(fs.p == sc.order(), ErrorKind::InvalidParameter, "group order mismatch");
  require(!fs.families.empty(), ErrorKind::InvalidParameter, "no families");
  const bool colorful = fs.families.size() > 1;
  if (colorful) {
    require(static_cast<int>(fs.families.size()) == sc.dimension() + 1, ErrorKind::InvalidParameter,
            "family count must equal the facet size");
    require(!sc.face_rank.empty(), ErrorKind::InvalidParameter, "colorful labelling needs a subdivided complex");
  }
  PointLabeler labeler(fs, colorful, /*check_violations=*/false);
  return label_equivariantly(sc, [&](const Vec& x, int rank) { return labeler(x, rank - 1); });
}

}  // namespace equibu
