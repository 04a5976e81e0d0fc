// Continuous covering solvers: the Z/2 and Z/p cover theorems, uncolored and
// colorful, on top of the refinement engine.
#pragma once

#include "equibu/refine.hpp"

namespace equibu {

/// assignment[k] is the (0-based) family whose set contains support[k];
/// residuals[k] = |point - support[k]|.
struct CoverWitness {
  Vec point;
  std::vector<OrbitLabel> required;
  std::vector<int> assignment;
  std::vector<Vec> support;
  std::vector<double> residuals;
  std::vector<double> history;
  int global_levels = 0;
  int zoom_steps = 0;

  double residual() const {
    return residuals.empty() ? 0.0 : *std::max_element(residuals.begin(), residuals.end());
  }
};

using CoverOutcome = std::variant<CoverWitness, Violation, Inconclusive>;

/// The geometric generator the Z/p solvers use on R^{(p-1)d}.
inline Mat zp_action(int p, int d) {
  if (p == 2) return -Mat::Identity(d, d);
  return zp_join_sphere(p, d).action.geometric;
}

/// Base sphere for a family set: the crosspolytope for p = 2, the join
/// sphere otherwise (the two agree combinatorially and geometrically at p = 2).
inline SymmetricComplex cover_base_sphere(int p, int sets) {
  return p == 2 ? crosspolytope(sets) : zp_join_sphere(p, sets);
}

/// Checks a witness with the oracles only: each support point lies in its
/// required set (translate) of the assigned family, and within `tol` of the
/// point.
inline bool validate_cover_witness(const CoverFamilySet& fs, const CoverWitness& w, double tol) {
  if (w.required.size() != w.assignment.size() || w.required.size() != w.support.size()) return false;
  for (std::size_t k = 0; k < w.required.size(); ++k) {
    const auto& lab = w.required[k];
    const int fam = w.assignment[k];
    if (fam < 0 || fam >= static_cast<int>(fs.families.size())) return false;
    if (!fs.contains(fam, lab.block - 1, lab.shift, w.support[k])) return false;
    if ((w.point - w.support[k]).norm() > tol) return false;
  }
  return true;
}

namespace detail {

inline void check_family_set(const CoverFamilySet& fs, std::size_t expected_families, const SymmetricComplex& base) {
  require(!fs.families.empty() && fs.sets() >= 1, ErrorKind::InvalidParameter, "empty family set");
  for (const auto& fam : fs.families)
    require(static_cast<int>(fam.size()) == fs.sets(), ErrorKind::InvalidParameter, "families differ in size");
  for (const auto& fam : fs.families)
    for (const auto& o : fam) require(static_cast<bool>(o.membership), ErrorKind::InvalidParameter, "missing oracle");
  require(fs.families.size() == expected_families, ErrorKind::InvalidParameter,
          "expected " + std::to_string(expected_families) + " families, got " + std::to_string(fs.families.size()));
  require(fs.action.rows() == base.ambient_dimension() && fs.action.cols() == base.ambient_dimension() &&
              (fs.action - base.action.geometric).norm() < 1e-9,
          ErrorKind::InvalidParameter, "family set action differs from the sphere's action");
}

inline CoverOutcome to_cover_outcome(EngineOutcome out, bool colorful) {
  if (auto* v = std::get_if<Violation>(&out)) return *v;
  if (auto* i = std::get_if<Inconclusive>(&out)) return *i;
  auto& e = std::get<EngineWitness>(out);
  CoverWitness w;
  w.point = e.point;
  w.required = e.target;
  w.assignment = e.assignment;
  if (!colorful) std::fill(w.assignment.begin(), w.assignment.end(), 0);
  w.support = e.support;
  for (const auto& q : e.support) w.residuals.push_back((q - e.point).norm());
  w.history = e.history;
  w.global_levels = e.global_levels;
  w.zoom_steps = e.zoom_steps;
  return w;
}

inline CoverOutcome run_cover(const CoverFamilySet& fs, std::vector<OrbitLabel> target, bool colorful,
                              RefinementConfig cfg) {
  const auto base = cover_base_sphere(fs.p, fs.sets());
  check_family_set(fs, colorful ? static_cast<std::size_t>(base.dimension() + 1) : 1, base);
  RefinementEngine engine(base, fs, std::move(target), colorful, std::move(cfg));
  return to_cover_outcome(engine.run(), colorful);
}

}  // namespace detail

/// One family A_1..A_{d+1} on S^d (p = 2). Returns a point near
/// the intersection of s_i A_i, or x in A_i and -A_i within slack.
inline CoverOutcome solve_fan_cover(const CoverFamilySet& fs, const std::vector<int>& signs, RefinementConfig cfg = {}) {
  require(fs.p == 2, ErrorKind::InvalidParameter, "solve_fan_cover needs p = 2");
  require(static_cast<int>(signs.size()) == fs.sets(), ErrorKind::InvalidParameter, "need one sign per set");
  return detail::run_cover(fs, z2_target(signs), false, std::move(cfg));
}

/// d+1 families on S^d. The witness assignment is the permutation pi:
/// support k lies in s_k A_k^{(pi(k))}.
inline CoverOutcome solve_colorful_fan_cover(const CoverFamilySet& fs, const std::vector<int>& signs,
                                             RefinementConfig cfg = {}) {
  require(fs.p == 2, ErrorKind::InvalidParameter, "solve_colorful_fan_cover needs p = 2");
  require(static_cast<int>(signs.size()) == fs.sets(), ErrorKind::InvalidParameter, "need one sign per set");
  return detail::run_cover(fs, z2_target(signs), true, std::move(cfg));
}

/// One family A_1..A_d on S^n, n = (p-1)d - 1. The witness lies near
/// the intersection over i of s.A_i for all s != s_i.
inline CoverOutcome solve_zp_cover(const CoverFamilySet& fs, const std::vector<int>& shifts, RefinementConfig cfg = {}) {
  require(is_prime(fs.p), ErrorKind::InvalidParameter, "p must be prime");
  require(static_cast<int>(shifts.size()) == fs.sets(), ErrorKind::InvalidParameter, "need one shift per set");
  return detail::run_cover(fs, zp_target(fs.p, shifts), false, std::move(cfg));
}

/// n+1 families; the assignment is the bijection (i, s) -> family.
inline CoverOutcome solve_colorful_zp_cover(const CoverFamilySet& fs, const std::vector<int>& shifts,
                                            RefinementConfig cfg = {}) {
  require(is_prime(fs.p), ErrorKind::InvalidParameter, "p must be prime");
  require(static_cast<int>(shifts.size()) == fs.sets(), ErrorKind::InvalidParameter, "need one shift per set");
  return detail::run_cover(fs, zp_target(fs.p, shifts), true, std::move(cfg));
}

}  // namespace equibu
