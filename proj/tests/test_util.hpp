// Random input generators shared by the test binaries.
#pragma once

#include "equibu/fan.hpp"

#include <random>

namespace equibu::testing {

inline SignedLabeling random_antipodal_labeling(const SymmetricComplex& sc, int max_label, std::mt19937& rng) {
  std::uniform_int_distribution<int> pick(1, max_label);
  std::bernoulli_distribution sign(0.5);
  SignedLabeling l;
  for (VertexId v : sc.complex.vertices()) {
    if (l.count(v)) continue;
    const int lab = pick(rng) * (sign(rng) ? 1 : -1);
    l[v] = lab;
    l[sc.action.apply(v)] = -lab;
  }
  return l;
}

inline OrbitLabeling random_equivariant_labeling(const SymmetricComplex& sc, int blocks, std::mt19937& rng) {
  const int p = sc.order();
  std::uniform_int_distribution<int> block(1, blocks);
  std::uniform_int_distribution<int> shift(0, p - 1);
  OrbitLabeling l;
  for (VertexId v : sc.complex.vertices()) {
    if (l.count(v)) continue;
    OrbitLabel lab{block(rng), shift(rng)};
    VertexId w = v;
    for (int s = 0; s < p; ++s) {
      l[w] = lab;
      lab.shift = mod(lab.shift + 1, p);
      w = sc.action.apply(w);
    }
  }
  return l;
}

/// All sign vectors in {+1,-1}^n, in binary order with + first.
inline std::vector<std::vector<int>> all_sign_vectors(int n) {
  std::vector<std::vector<int>> out;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    std::vector<int> s;
    for (int i = 0; i < n; ++i) s.push_back((mask >> i) & 1u ? -1 : 1);
    out.push_back(s);
  }
  return out;
}

/// The octahedron with Z/3 acting by cyclic rotation of the coordinates.
/// The action is free on vertices but fixes the triangles {+1,+2,+3} and
/// {-1,-2,-3}; no free Z/3-action on S^2 exists.
inline SymmetricComplex rotation_octahedron() {
  auto sc = crosspolytope(3);
  sc.action.order = 3;
  for (std::size_t k = 0; k < sc.action.domain.size(); ++k) {
    const VertexId v = sc.action.domain[k];
    sc.action.image[k] = (v > 0 ? 1 : -1) * (std::abs(v) % 3 + 1);
  }
  Mat rot = Mat::Zero(3, 3);
  rot(1, 0) = rot(2, 1) = rot(0, 2) = 1.0;
  sc.action.geometric = rot;
  return sc;
}

}  // namespace equibu::testing
