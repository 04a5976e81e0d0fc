// Symmetric simplicial spheres: crosspolytopes, deleted joins, Z/p join
// spheres and their barycentric subdivisions.
//
// Complexes store facets only; lower faces are enumerated on demand. Every
// facet is kept as a sorted vertex list and the facet list itself is sorted,
// which fixes the canonical facet order used by the searches.
#pragma once

#include "equibu/core.hpp"

#include <map>
#include <optional>
#include <set>
#include <span>

namespace equibu {

using VertexId = int;
using Face = std::vector<VertexId>;

/// Canonical face order: by size, then lexicographically.
inline bool canonical_less(const Face& a, const Face& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

class SimplicialComplex {
 public:
  SimplicialComplex() = default;

  explicit SimplicialComplex(std::vector<Face> facets) : facets_(std::move(facets)) {
    for (auto& f : facets_) {
      require(!f.empty(), ErrorKind::InvalidInput, "empty facet");
      std::sort(f.begin(), f.end());
      require(std::adjacent_find(f.begin(), f.end()) == f.end(), ErrorKind::InvalidInput,
              "facet with repeated vertex");
    }
    std::sort(facets_.begin(), facets_.end());
    facets_.erase(std::unique(facets_.begin(), facets_.end()), facets_.end());
    std::set<VertexId> vs;
    for (const auto& f : facets_) vs.insert(f.begin(), f.end());
    vertices_.assign(vs.begin(), vs.end());
  }

  const std::vector<Face>& facets() const { return facets_; }
  const std::vector<VertexId>& vertices() const { return vertices_; }

  int dimension() const {
    std::size_t m = 0;
    for (const auto& f : facets_) m = std::max(m, f.size());
    return static_cast<int>(m) - 1;
  }

  /// True if no facet is contained in another one. Quadratic; meant for tests
  /// and input validation of small complexes.
  bool facets_are_maximal() const {
    for (std::size_t a = 0; a < facets_.size(); ++a)
      for (std::size_t b = 0; b < facets_.size(); ++b)
        if (a != b && facets_[a].size() < facets_[b].size() &&
            std::includes(facets_[b].begin(), facets_[b].end(), facets_[a].begin(),
                          facets_[a].end()))
          return false;
    return true;
  }

  /// All nonempty faces in canonical order.
  std::vector<Face> faces() const {
    std::vector<Face> out;
    for (const auto& f : facets_) {
      require(f.size() < 20, ErrorKind::TooLarge, "facet too large to enumerate faces");
      const unsigned full = (1u << f.size());
      for (unsigned mask = 1; mask < full; ++mask) {
        Face sub;
        for (std::size_t k = 0; k < f.size(); ++k)
          if (mask & (1u << k)) sub.push_back(f[k]);
        out.push_back(std::move(sub));
      }
    }
    std::sort(out.begin(), out.end(), canonical_less);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  std::vector<Face> faces_of_size(std::size_t k) const {
    std::vector<Face> out;
    for (auto& f : faces())
      if (f.size() == k) out.push_back(std::move(f));
    return out;
  }

  bool has_face(Face face) const {
    std::sort(face.begin(), face.end());
    for (const auto& f : facets_)
      if (std::includes(f.begin(), f.end(), face.begin(), face.end())) return true;
    return false;
  }

  /// f_vector()[k] = number of faces with k+1 vertices.
  std::vector<long> f_vector() const {
    std::vector<long> out(static_cast<std::size_t>(dimension() + 1), 0);
    for (const auto& f : faces()) ++out[f.size() - 1];
    return out;
  }

  long euler_characteristic() const {
    long chi = 0;
    const auto fv = f_vector();
    for (std::size_t k = 0; k < fv.size(); ++k) chi += (k % 2 == 0 ? 1 : -1) * fv[k];
    return chi;
  }

 private:
  std::vector<Face> facets_;
  std::vector<VertexId> vertices_;
};

/// Euler characteristic of S^n.
inline long sphere_euler_characteristic(int n) { return n % 2 == 0 ? 2 : 0; }

/// A simplicial Z/p-action given by a vertex permutation, together with the
/// orthogonal map that realizes it on the ambient space of the coordinates.
struct SymmetryAction {
  int order = 2;
  std::vector<VertexId> domain;  // sorted, equals the complex's vertex list
  std::vector<VertexId> image;   // image[k] = action(domain[k])
  Mat geometric;                 // orthogonal, geometric^order = I

  VertexId apply(VertexId v, int power = 1) const {
    power = mod(power, order);
    for (int s = 0; s < power; ++s) {
      auto it = std::lower_bound(domain.begin(), domain.end(), v);
      require(it != domain.end() && *it == v, ErrorKind::InvalidInput,
              "vertex " + std::to_string(v) + " not in action domain");
      v = image[static_cast<std::size_t>(it - domain.begin())];
    }
    return v;
  }

  Vec apply_point(const Vec& x, int power = 1) const {
    power = mod(power, order);
    Vec y = x;
    for (int s = 0; s < power; ++s) y = geometric * y;
    return y;
  }
};

/// A simplicial complex with a Z/p-action and a realization on the unit
/// sphere. `face_rank[k]` is the size of the face of the previous complex
/// that vertex k subdivides (0 when the complex is not a subdivision).
struct SymmetricComplex {
  SimplicialComplex complex;
  SymmetryAction action;
  std::vector<Vec> coords;     // aligned with complex.vertices()
  std::vector<int> face_rank;  // aligned with complex.vertices()

  std::size_t index(VertexId v) const {
    const auto& vs = complex.vertices();
    auto it = std::lower_bound(vs.begin(), vs.end(), v);
    require(it != vs.end() && *it == v, ErrorKind::InvalidInput,
            "unknown vertex " + std::to_string(v));
    return static_cast<std::size_t>(it - vs.begin());
  }
  const Vec& coord(VertexId v) const { return coords[index(v)]; }
  int rank_of(VertexId v) const { return face_rank.empty() ? 0 : face_rank[index(v)]; }
  int order() const { return action.order; }
  int dimension() const { return complex.dimension(); }
  Eigen::Index ambient_dimension() const { return coords.empty() ? 0 : coords.front().size(); }
};

/// Boundary of the (k)-crosspolytope: vertices +-1..+-k, S^{k-1}.
inline SymmetricComplex crosspolytope(int k) {
  require(k >= 1, ErrorKind::InvalidParameter, "crosspolytope needs k >= 1");
  require(k <= 20, ErrorKind::TooLarge, "crosspolytope dimension too large");
  std::vector<Face> facets;
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    Face f;
    for (int i = 1; i <= k; ++i) f.push_back((mask & (1u << (i - 1))) ? -i : i);
    facets.push_back(std::move(f));
  }
  SymmetricComplex sc;
  sc.complex = SimplicialComplex(std::move(facets));
  sc.action.order = 2;
  sc.action.domain = sc.complex.vertices();
  sc.action.geometric = -Mat::Identity(k, k);
  for (VertexId v : sc.action.domain) {
    sc.action.image.push_back(-v);
    Vec c = Vec::Zero(k);
    c[std::abs(v) - 1] = v > 0 ? 1.0 : -1.0;
    sc.coords.push_back(c);
  }
  return sc;
}

/// The full n-simplex on vertices 0..n as a complex with a single facet.
inline SimplicialComplex simplex_complex(int n) {
  require(n >= 0, ErrorKind::InvalidParameter, "simplex needs n >= 0");
  Face f(static_cast<std::size_t>(n + 1));
  std::iota(f.begin(), f.end(), 0);
  return SimplicialComplex({f});
}

/// Result of subdividing a plain complex: the new complex and, for every new
/// vertex (aligned with complex.vertices()), the face it subdivides.
struct Subdivision {
  SimplicialComplex complex;
  std::vector<Face> origin;
};

inline Subdivision barycentric_subdivide(const SimplicialComplex& input) {
  const auto faces = input.faces();
  const VertexId next_base = input.vertices().empty() ? 0 : input.vertices().back() + 1;
  std::vector<VertexId> face_id(faces.size());
  VertexId next = next_base;
  for (std::size_t k = 0; k < faces.size(); ++k)
    face_id[k] = faces[k].size() == 1 ? faces[k][0] : next++;
  auto id_of = [&](const Face& f) {
    auto it = std::lower_bound(faces.begin(), faces.end(), f, canonical_less);
    return face_id[static_cast<std::size_t>(it - faces.begin())];
  };

  std::vector<Face> facets;
  for (const auto& facet : input.facets()) {
    Face perm = facet;
    do {
      Face chain;
      Face prefix;
      for (VertexId v : perm) {
        prefix.insert(std::upper_bound(prefix.begin(), prefix.end(), v), v);
        chain.push_back(id_of(prefix));
      }
      facets.push_back(std::move(chain));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }

  Subdivision out;
  out.complex = SimplicialComplex(std::move(facets));
  out.origin.resize(out.complex.vertices().size());
  for (std::size_t k = 0; k < faces.size(); ++k) {
    const auto& vs = out.complex.vertices();
    auto it = std::lower_bound(vs.begin(), vs.end(), face_id[k]);
    out.origin[static_cast<std::size_t>(it - vs.begin())] = faces[k];
  }
  return out;
}

/// Barycentric subdivision with the action lifted facewise and new vertices
/// placed at normalized barycenters. Original vertex ids are kept; new ids
/// are fresh and assigned in canonical face order.
inline SymmetricComplex barycentric_subdivide(const SymmetricComplex& sc) {
  Subdivision sub = barycentric_subdivide(sc.complex);
  const std::vector<VertexId> vs = sub.complex.vertices();

  // face (canonical) -> new id, for lifting the action
  std::map<Face, VertexId> id_of_face;
  for (std::size_t k = 0; k < vs.size(); ++k) id_of_face.emplace(sub.origin[k], vs[k]);

  SymmetricComplex out;
  out.complex = std::move(sub.complex);
  out.action.order = sc.action.order;
  out.action.geometric = sc.action.geometric;
  out.action.domain = vs;
  out.action.image.resize(vs.size());
  out.coords.resize(vs.size());
  out.face_rank.resize(vs.size());
  parallel_for(vs.size(), [&](std::size_t k) {
    const Face& f = sub.origin[k];
    Face img;
    Vec sum = Vec::Zero(sc.ambient_dimension());
    for (VertexId v : f) {
      img.push_back(sc.action.apply(v));
      sum += sc.coord(v);
    }
    std::sort(img.begin(), img.end());
    out.action.image[k] = id_of_face.at(img);
    out.coords[k] = normalized(sum);
    out.face_rank[k] = static_cast<int>(f.size());
  });
  return out;
}

inline SymmetricComplex subdivide(SymmetricComplex sc, int times) {
  require(times >= 0, ErrorKind::InvalidParameter, "negative subdivision depth");
  for (int t = 0; t < times; ++t) sc = barycentric_subdivide(sc);
  return sc;
}

/// The p-fold deleted join of the n-simplex. Vertex (i, c) with i in [0, n]
/// and copy c in [0, p) has id (n+1)*c + i. Facets assign every element of
/// [n+1] to exactly one copy.
inline SimplicialComplex deleted_join_simplex(int n, int p) {
  require(n >= 0, ErrorKind::InvalidParameter, "deleted join needs n >= 0");
  require(p >= 2, ErrorKind::InvalidParameter, "deleted join needs p >= 2");
  double total = std::pow(static_cast<double>(p), n + 1);
  require(total <= 1e6, ErrorKind::TooLarge, "deleted join too large");
  std::vector<Face> facets;
  std::vector<int> copy(static_cast<std::size_t>(n + 1), 0);
  while (true) {
    Face f;
    for (int i = 0; i <= n; ++i) f.push_back((n + 1) * copy[static_cast<std::size_t>(i)] + i);
    facets.push_back(std::move(f));
    int pos = 0;
    while (pos <= n && ++copy[static_cast<std::size_t>(pos)] == p) copy[static_cast<std::size_t>(pos++)] = 0;
    if (pos > n) break;
  }
  return SimplicialComplex(std::move(facets));
}

/// Orthogonal map of the sum-zero hyperplane of R^p induced by the cyclic
/// shift e_t -> e_{t+1}, written in sum_zero_basis(p) coordinates.
inline Mat cyclic_rotation(int p) {
  Mat shift = Mat::Zero(p, p);
  for (int t = 0; t < p; ++t) shift(mod(t + 1, p), t) = 1.0;
  Mat basis = sum_zero_basis(p);
  return basis.transpose() * shift * basis;
}

/// The d-fold join of the boundary of the (p-1)-simplex, a triangulated
/// S^n with n = (p-1)d - 1 and a free Z/p-action. Vertex (j, t) for block
/// j in [0, d) and t in Z/p has id j*p + t. Block j is realized as a regular
/// simplex in coordinates [(p-1)j, (p-1)(j+1)).
inline SymmetricComplex zp_join_sphere(int p, int d) {
  require(is_prime(p), ErrorKind::InvalidParameter, "p must be prime");
  require(d >= 1, ErrorKind::InvalidParameter, "d must be >= 1");
  require(std::pow(static_cast<double>(p), d) <= 1e6, ErrorKind::TooLarge, "join sphere too large");
  std::vector<Face> facets;
  std::vector<int> omit(static_cast<std::size_t>(d), 0);
  while (true) {
    Face f;
    for (int j = 0; j < d; ++j)
      for (int t = 0; t < p; ++t)
        if (t != omit[static_cast<std::size_t>(j)]) f.push_back(j * p + t);
    facets.push_back(std::move(f));
    int pos = 0;
    while (pos < d && ++omit[static_cast<std::size_t>(pos)] == p) omit[static_cast<std::size_t>(pos++)] = 0;
    if (pos == d) break;
  }
  const int block = p - 1;
  const int m = block * d;
  Mat basis = sum_zero_basis(p);
  Mat rot = cyclic_rotation(p);

  SymmetricComplex sc;
  sc.complex = SimplicialComplex(std::move(facets));
  sc.action.order = p;
  sc.action.domain = sc.complex.vertices();
  sc.action.geometric = Mat::Zero(m, m);
  for (int j = 0; j < d; ++j) sc.action.geometric.block(j * block, j * block, block, block) = rot;
  for (VertexId v : sc.action.domain) {
    const int j = v / p;
    const int t = v % p;
    sc.action.image.push_back(j * p + mod(t + 1, p));
    Vec e = -Vec::Ones(p) / p;
    e[t] += 1.0;
    Vec c = Vec::Zero(m);
    c.segment(j * block, block) = (basis.transpose() * e).normalized();
    sc.coords.push_back(c);
  }
  return sc;
}

/// Point of the realization: normalized convex combination of face vertices.
inline Vec realize_point(const SymmetricComplex& sc, const Face& face, std::span<const double> weights) {
  require(face.size() == weights.size(), ErrorKind::InvalidParameter, "weights/face size mismatch");
  require(sc.complex.has_face(face), ErrorKind::InvalidInput, "not a face of the complex");
  double total = 0;
  Vec sum = Vec::Zero(sc.ambient_dimension());
  for (std::size_t k = 0; k < face.size(); ++k) {
    require(weights[k] >= 0, ErrorKind::InvalidParameter, "negative barycentric weight");
    total += weights[k];
    sum += weights[k] * sc.coord(face[k]);
  }
  require(std::abs(total - 1.0) < 1e-9, ErrorKind::InvalidParameter, "weights must sum to 1");
  require(sum.norm() > 1e-12, ErrorKind::DegenerateRealization, "convex combination is zero");
  return sum.normalized();
}

inline Vec face_barycenter(const SymmetricComplex& sc, const Face& face) {
  Vec sum = Vec::Zero(sc.ambient_dimension());
  for (VertexId v : face) sum += sc.coord(v);
  return normalized(sum);
}

inline double max_facet_diameter(const SymmetricComplex& sc) {
  double best = 0;
  for (const auto& f : sc.complex.facets())
    for (std::size_t a = 0; a < f.size(); ++a)
      for (std::size_t b = a + 1; b < f.size(); ++b)
        best = std::max(best, (sc.coord(f[a]) - sc.coord(f[b])).norm());
  return best;
}

/// Checks permutation^p = id, that faces map to faces, and freeness: no
/// face is setwise fixed by a non-identity power (such a face would fix its
/// barycenter).
inline bool action_is_valid(const SymmetricComplex& sc, bool require_free = true) {
  const auto& act = sc.action;
  if (act.domain != sc.complex.vertices() || act.image.size() != act.domain.size()) return false;
  for (VertexId v : act.domain)
    if (act.apply(v, act.order) != v) return false;
  for (const auto& f : sc.complex.facets()) {
    Face img;
    for (VertexId v : f) img.push_back(act.apply(v));
    if (!sc.complex.has_face(img)) return false;
    if (!require_free) continue;
    for (int s = 1; s < act.order; ++s) {
      // union of full <g^s>-orbits inside f
      for (VertexId v : f) {
        bool orbit_inside = true;
        VertexId w = v;
        for (int k = 0; k < act.order; ++k) {
          if (!std::binary_search(f.begin(), f.end(), w)) { orbit_inside = false; break; }
          w = act.apply(w, s);
        }
        if (orbit_inside) return false;
      }
    }
  }
  return true;
}

/// Maximum deviation between coords(action(v)) and the geometric action
/// applied to coords(v).
inline double coords_equivariance_error(const SymmetricComplex& sc) {
  double err = 0;
  for (std::size_t k = 0; k < sc.coords.size(); ++k) {
    const Vec& img = sc.coord(sc.action.image[k]);
    err = std::max(err, (img - sc.action.geometric * sc.coords[k]).cwiseAbs().maxCoeff());
  }
  return err;
}

/// Searches for a vertex bijection a -> b that maps the facet set of a onto
/// the facet set of b. Backtracking with partial-face pruning; meant for
/// small complexes.
inline std::optional<std::map<VertexId, VertexId>> find_isomorphism(const SimplicialComplex& a,
                                                                    const SimplicialComplex& b) {
  const auto& va = a.vertices();
  const auto& vb = b.vertices();
  if (va.size() != vb.size() || a.facets().size() != b.facets().size()) return std::nullopt;
  std::vector<std::size_t> sa, sb;
  for (const auto& f : a.facets()) sa.push_back(f.size());
  for (const auto& f : b.facets()) sb.push_back(f.size());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  if (sa != sb) return std::nullopt;

  auto degree = [](const SimplicialComplex& c, VertexId v) {
    int deg = 0;
    for (const auto& f : c.facets()) deg += std::binary_search(f.begin(), f.end(), v) ? 1 : 0;
    return deg;
  };
  std::map<VertexId, int> da, db;
  for (VertexId v : va) da[v] = degree(a, v);
  for (VertexId v : vb) db[v] = degree(b, v);

  std::set<Face> target(b.facets().begin(), b.facets().end());
  std::map<VertexId, VertexId> assign;
  std::set<VertexId> used;

  std::function<bool(std::size_t)> extend = [&](std::size_t pos) -> bool {
    if (pos == va.size()) {
      for (const auto& f : a.facets()) {
        Face img;
        for (VertexId v : f) img.push_back(assign.at(v));
        std::sort(img.begin(), img.end());
        if (!target.count(img)) return false;
      }
      return true;
    }
    const VertexId v = va[pos];
    for (VertexId w : vb) {
      if (used.count(w) || da[v] != db[w]) continue;
      assign[v] = w;
      used.insert(w);
      bool ok = true;
      for (const auto& f : a.facets()) {
        if (!std::binary_search(f.begin(), f.end(), v)) continue;
        Face img;
        bool complete = true;
        for (VertexId u : f) {
          auto it = assign.find(u);
          if (it == assign.end()) { complete = false; continue; }
          img.push_back(it->second);
        }
        std::sort(img.begin(), img.end());
        if (!b.has_face(img) || (complete && !target.count(img))) {
          ok = false;
          break;
        }
      }
      if (ok && extend(pos + 1)) return true;
      assign.erase(v);
      used.erase(w);
    }
    return false;
  };
  if (!extend(0)) return std::nullopt;
  return assign;
}

}  // namespace equibu
