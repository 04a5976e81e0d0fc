// JSON schemas for inputs and witnesses. Indices of sets, families,
// measures, rows and columns are 1-based in JSON and 0-based in C++; vertex
// ids and orbit-label blocks are written as they are.
#pragma once

#include "equibu/cover.hpp"
#include "equibu/fan.hpp"
#include "equibu/ham_sandwich.hpp"
#include "equibu/kkm.hpp"
#include "equibu/matrix_bu.hpp"

#include <json.hpp>  // vendored nlohmann/json

#include <fstream>
#include <sstream>

namespace equibu {

using json = nlohmann::json;

namespace io {

inline json vec_to_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) a.push_back(v[k]);
  return a;
}

inline Vec vec_from_json(const json& j) {
  require(j.is_array(), ErrorKind::InvalidInput, "expected an array of numbers");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) {
    require(j[k].is_number(), ErrorKind::InvalidInput, "expected a number at index " + std::to_string(k));
    v[static_cast<Eigen::Index>(k)] = j[k].get<double>();
  }
  return v;
}

inline json mat_to_json(const Mat& m) {
  json a = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) a.push_back(vec_to_json(m.row(r).transpose()));
  return a;
}

inline Mat mat_from_json(const json& j) {
  require(j.is_array() && !j.empty(), ErrorKind::InvalidInput, "expected a nonempty matrix");
  Mat m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(j[0].size()));
  for (std::size_t r = 0; r < j.size(); ++r) {
    const Vec row = vec_from_json(j[r]);
    require(row.size() == m.cols(), ErrorKind::InvalidInput, "ragged matrix at row " + std::to_string(r + 1));
    m.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return m;
}

inline json one_based(const std::vector<int>& v) {
  json a = json::array();
  for (int k : v) a.push_back(k + 1);
  return a;
}

inline std::vector<int> zero_based(const json& j) {
  require(j.is_array(), ErrorKind::InvalidInput, "expected an array of indices");
  std::vector<int> out;
  for (const auto& k : j) {
    require(k.is_number_integer() && k.get<int>() >= 1, ErrorKind::InvalidInput, "indices are 1-based integers");
    out.push_back(k.get<int>() - 1);
  }
  return out;
}

inline const json& field(const json& j, const char* key) {
  require(j.is_object() && j.contains(key), ErrorKind::InvalidInput, std::string("missing field \"") + key + "\"");
  return j.at(key);
}

inline VertexId vertex_key(const std::string& s) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  require(used == s.size() && !s.empty(), ErrorKind::InvalidInput, "bad vertex id \"" + s + "\"");
  return v;
}

/// Reads a file, reporting parse errors with line and column.
inline json load_json(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::InvalidInput, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t at = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(at), '\n');
    const auto last_nl = text.rfind('\n', at == 0 ? 0 : at - 1);
    const auto col = at - (last_nl == std::string::npos ? 0 : last_nl + 1) + 1;
    throw Error(ErrorKind::InvalidInput,
                path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON");
  }
}

}  // namespace io

// --- complexes ---------------------------------------------------------------

inline json complex_to_json(const SymmetricComplex& sc) {
  json j;
  j["vertices"] = sc.complex.vertices();
  j["facets"] = sc.complex.facets();
  json perm = json::object();
  for (std::size_t k = 0; k < sc.action.domain.size(); ++k)
    perm[std::to_string(sc.action.domain[k])] = sc.action.image[k];
  j["action"] = {{"p", sc.action.order}, {"perm", perm}};
  if (sc.action.geometric.size() > 0) j["action"]["geometric"] = io::mat_to_json(sc.action.geometric);
  json coords = json::object();
  for (std::size_t k = 0; k < sc.coords.size(); ++k) coords[std::to_string(sc.complex.vertices()[k])] = io::vec_to_json(sc.coords[k]);
  j["coords"] = coords;
  if (!sc.face_rank.empty()) {
    json ranks = json::object();
    for (std::size_t k = 0; k < sc.face_rank.size(); ++k) ranks[std::to_string(sc.complex.vertices()[k])] = sc.face_rank[k];
    j["ranks"] = ranks;
  }
  return j;
}

/// Without "geometric" the action matrix is fitted to the coordinates by
/// least squares.
inline SymmetricComplex complex_from_json(const json& j) {
  std::vector<Face> facets;
  for (const auto& f : io::field(j, "facets")) facets.push_back(f.get<Face>());
  SymmetricComplex sc;
  sc.complex = SimplicialComplex(std::move(facets));
  if (j.contains("vertices")) {
    auto vs = j.at("vertices").get<std::vector<VertexId>>();
    std::sort(vs.begin(), vs.end());
    require(vs == sc.complex.vertices(), ErrorKind::InvalidInput, "vertex list differs from the facets' vertices");
  }
  const auto& action = io::field(j, "action");
  sc.action.order = io::field(action, "p").get<int>();
  std::map<VertexId, VertexId> perm;
  for (const auto& [k, v] : io::field(action, "perm").items()) perm[io::vertex_key(k)] = v.get<VertexId>();
  sc.action.domain = sc.complex.vertices();
  for (VertexId v : sc.action.domain) {
    auto it = perm.find(v);
    require(it != perm.end(), ErrorKind::InvalidInput, "action misses vertex " + std::to_string(v));
    sc.action.image.push_back(it->second);
  }
  std::map<VertexId, Vec> coords;
  for (const auto& [k, v] : io::field(j, "coords").items()) coords[io::vertex_key(k)] = io::vec_from_json(v);
  for (VertexId v : sc.complex.vertices()) {
    auto it = coords.find(v);
    require(it != coords.end(), ErrorKind::InvalidInput, "no coordinates for vertex " + std::to_string(v));
    require(sc.coords.empty() || it->second.size() == sc.coords.front().size(), ErrorKind::InvalidInput,
            "coordinates differ in dimension");
    sc.coords.push_back(it->second);
  }
  if (j.contains("ranks")) {
    std::map<VertexId, int> ranks;
    for (const auto& [k, v] : j.at("ranks").items()) ranks[io::vertex_key(k)] = v.get<int>();
    for (VertexId v : sc.complex.vertices()) sc.face_rank.push_back(ranks.count(v) ? ranks[v] : 0);
  }
  if (action.contains("geometric")) {
    sc.action.geometric = io::mat_from_json(action.at("geometric"));
  } else {
    const auto n = static_cast<Eigen::Index>(sc.coords.size());
    Mat X(sc.ambient_dimension(), n), Y(sc.ambient_dimension(), n);
    for (Eigen::Index k = 0; k < n; ++k) {
      X.col(k) = sc.coords[static_cast<std::size_t>(k)];
      Y.col(k) = sc.coord(sc.action.image[static_cast<std::size_t>(k)]);
    }
    // G X = Y  <=>  X^T G^T = Y^T
    sc.action.geometric = X.transpose().colPivHouseholderQr().solve(Y.transpose()).transpose();
  }
  return sc;
}

// --- labelings ---------------------------------------------------------------

inline json labeling_to_json(const SignedLabeling& l) {
  json j = json::object();
  for (const auto& [v, lab] : l) j[std::to_string(v)] = lab;
  return j;
}

inline json labeling_to_json(const OrbitLabeling& l) {
  json j = json::object();
  for (const auto& [v, lab] : l) j[std::to_string(v)] = json::array({lab.block, lab.shift});
  return j;
}

/// Accepts signed integers (Z/2) and [j, t] pairs.
inline OrbitLabeling orbit_labeling_from_json(const json& j) {
  require(j.is_object(), ErrorKind::InvalidInput, "a labeling is an object {id: label}");
  OrbitLabeling l;
  for (const auto& [k, v] : j.items()) {
    if (v.is_number_integer()) {
      require(v.get<int>() != 0, ErrorKind::InvalidInput, "label 0 at vertex " + k);
      l[io::vertex_key(k)] = from_signed(v.get<int>());
    } else {
      require(v.is_array() && v.size() == 2, ErrorKind::InvalidInput, "bad label at vertex " + k);
      l[io::vertex_key(k)] = OrbitLabel{v[0].get<int>(), v[1].get<int>()};
    }
  }
  return l;
}

inline SignedLabeling signed_labeling_from_json(const json& j) {
  return to_signed_labeling(orbit_labeling_from_json(j));
}

/// "++-" or "+1,-1" to a sign vector.
inline std::vector<int> parse_signs(const std::string& s) {
  std::vector<int> out;
  if (s.find(',') == std::string::npos) {
    for (char c : s) {
      require(c == '+' || c == '-', ErrorKind::InvalidInput, "signs are written as + and -");
      out.push_back(c == '+' ? 1 : -1);
    }
  } else {
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      const int v = std::stoi(tok);
      require(v == 1 || v == -1, ErrorKind::InvalidInput, "signs must be +1 or -1");
      out.push_back(v);
    }
  }
  require(!out.empty(), ErrorKind::InvalidInput, "empty sign vector");
  return out;
}

inline std::string signs_to_string(const std::vector<int>& s) {
  std::string out;
  for (int v : s) out += v > 0 ? '+' : '-';
  return out;
}

inline std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidInput, "not a number: \"" + tok + "\"");
    }
  }
  return out;
}

// --- certificates ------------------------------------------------------------

inline json certificate_to_json(const FanCertificate& c) {
  if (const auto* e = std::get_if<ComplementaryEdge>(&c)) return {{"type", "complementary_edge"}, {"edge", e->edge}, {"label", e->label}};
  if (const auto* o = std::get_if<OrbitFace>(&c)) return {{"type", "orbit_face"}, {"face", o->face}, {"block", o->block}};
  const auto& t = std::get<TargetFacet>(c);
  json labels = json::array();
  for (const auto& l : t.labels) labels.push_back(json::array({l.block, l.shift}));
  return {{"type", "target_facet"}, {"facet", t.facet}, {"labels", labels}, {"matching", t.matching}};
}

inline FanCertificate certificate_from_json(const json& j) {
  const auto type = io::field(j, "type").get<std::string>();
  if (type == "complementary_edge") return ComplementaryEdge{io::field(j, "edge").get<Face>(), io::field(j, "label").get<int>()};
  if (type == "orbit_face") return OrbitFace{io::field(j, "face").get<Face>(), io::field(j, "block").get<int>()};
  require(type == "target_facet", ErrorKind::InvalidInput, "unknown certificate type " + type);
  TargetFacet t;
  t.facet = io::field(j, "facet").get<Face>();
  for (const auto& l : io::field(j, "labels")) t.labels.push_back({l[0].get<int>(), l[1].get<int>()});
  t.matching = io::field(j, "matching").get<std::vector<VertexId>>();
  return t;
}

// --- covers ------------------------------------------------------------------

/// {"type":"cap","center":[..],"radius":deg,"margin":deg},
/// {"type":"arc","from":deg,"to":deg,"margin":deg},
/// {"type":"halfspace","normal":[..],"offset":b,"margin":m}  (<normal,x> >= b).
inline CoverOracle cover_set_from_json(const json& j) {
  const auto type = io::field(j, "type").get<std::string>();
  const double margin = j.value("margin", 0.0);
  if (type == "cap") return cap_set(io::vec_from_json(io::field(j, "center")), io::field(j, "radius").get<double>(), margin);
  if (type == "arc") return arc_set(io::field(j, "from").get<double>(), io::field(j, "to").get<double>(), margin);
  if (type == "halfspace")
    return halfspace_set(io::vec_from_json(io::field(j, "normal")), io::field(j, "offset").get<double>(), margin);
  throw Error(ErrorKind::InvalidInput, "unknown set type \"" + type + "\"; external oracles need the library API");
}

/// {"p": 2, "families": [[set, ...], ...]}; the action is the standard one
/// of zp_action.
inline CoverFamilySet cover_from_json(const json& j) {
  CoverFamilySet fs;
  fs.p = j.value("p", 2);
  require(is_prime(fs.p), ErrorKind::InvalidParameter, "p must be prime");
  for (const auto& fam : io::field(j, "families")) {
    fs.families.emplace_back();
    for (const auto& s : fam) fs.families.back().push_back(cover_set_from_json(s));
  }
  require(fs.sets() >= 1, ErrorKind::InvalidInput, "empty cover");
  fs.action = zp_action(fs.p, fs.sets());
  return fs;
}

inline json claim_to_json(const MembershipClaim& c) {
  return {{"family", c.family + 1}, {"shift", c.shift}, {"point", io::vec_to_json(c.point)}};
}

inline json violation_to_json(const Violation& v) {
  json claims = json::array();
  for (const auto& c : v.claims) claims.push_back(claim_to_json(c));
  return {{"type", to_string(v.kind)}, {"set", v.set + 1}, {"claims", claims}, {"point", io::vec_to_json(v.point)}, {"spread", v.spread}};
}

inline Violation violation_from_json(const json& j) {
  Violation v;
  const auto type = io::field(j, "type").get<std::string>();
  bool known = false;
  for (auto k : {ViolationKind::CoverGap, ViolationKind::Disjointness, ViolationKind::CrossDisjointness,
                 ViolationKind::OrbitIntersection, ViolationKind::CrossOrbit})
    if (type == to_string(k)) v.kind = k, known = true;
  require(known, ErrorKind::InvalidInput, "unknown violation type " + type);
  v.set = io::field(j, "set").get<int>() - 1;
  for (const auto& c : io::field(j, "claims"))
    v.claims.push_back({io::field(c, "family").get<int>() - 1, io::field(c, "shift").get<int>(), io::vec_from_json(io::field(c, "point"))});
  v.point = io::vec_from_json(io::field(j, "point"));
  v.spread = io::field(j, "spread").get<double>();
  return v;
}

inline json cover_witness_to_json(const CoverWitness& w) {
  json req = json::array(), sup = json::array();
  for (const auto& l : w.required) req.push_back(json::array({l.block, l.shift}));
  for (const auto& s : w.support) sup.push_back(io::vec_to_json(s));
  return {{"type", "cover_witness"},     {"point", io::vec_to_json(w.point)}, {"required", req},
          {"assignment", io::one_based(w.assignment)}, {"support", sup}, {"residuals", w.residuals},
          {"history", w.history},        {"global_levels", w.global_levels},  {"zoom_steps", w.zoom_steps}};
}

inline CoverWitness cover_witness_from_json(const json& j) {
  CoverWitness w;
  w.point = io::vec_from_json(io::field(j, "point"));
  for (const auto& l : io::field(j, "required")) w.required.push_back({l[0].get<int>(), l[1].get<int>()});
  w.assignment = io::zero_based(io::field(j, "assignment"));
  for (const auto& s : io::field(j, "support")) w.support.push_back(io::vec_from_json(s));
  w.residuals = io::field(j, "residuals").get<std::vector<double>>();
  w.history = j.value("history", std::vector<double>{});
  w.global_levels = j.value("global_levels", 0);
  w.zoom_steps = j.value("zoom_steps", 0);
  return w;
}

inline json inconclusive_to_json(const Inconclusive& i) {
  json j = {{"type", "inconclusive"}, {"reason", i.reason}};
  j["best_residual"] = std::isfinite(i.best_residual) ? json(i.best_residual) : json(nullptr);
  j["best_point"] = io::vec_to_json(i.best_point);
  return j;
}

inline Inconclusive inconclusive_from_json(const json& j) {
  Inconclusive i;
  i.reason = j.value("reason", "");
  const auto& b = io::field(j, "best_residual");
  i.best_residual = b.is_null() ? std::numeric_limits<double>::infinity() : b.get<double>();
  i.best_point = io::vec_from_json(io::field(j, "best_point"));
  return i;
}

// --- polynomial fields -------------------------------------------------------

/// Sum of coef * prod x_k^{pow_k}. JSON: a number (constant) or a list of
/// terms [coef, [pow_0, pow_1, ...]].
struct Polynomial {
  std::vector<std::pair<double, std::vector<int>>> terms;

  double operator()(const Vec& x) const {
    double s = 0.0;
    for (const auto& [c, pw] : terms) {
      double t = c;
      for (std::size_t k = 0; k < pw.size(); ++k) {
        require(static_cast<Eigen::Index>(k) < x.size() || pw[k] == 0, ErrorKind::InvalidInput,
                "polynomial uses more variables than the point has");
        if (pw[k] != 0) t *= std::pow(x[static_cast<Eigen::Index>(k)], pw[k]);
      }
      s += t;
    }
    return s;
  }
};

inline Polynomial polynomial_from_json(const json& j) {
  Polynomial p;
  if (j.is_number()) {
    p.terms.push_back({j.get<double>(), {}});
    return p;
  }
  require(j.is_array(), ErrorKind::InvalidInput, "a polynomial is a number or a list of [coef, [powers]]");
  for (const auto& t : j) {
    require(t.is_array() && t.size() == 2 && t[0].is_number() && t[1].is_array(), ErrorKind::InvalidInput,
            "a term is [coef, [powers]]");
    auto pw = t[1].get<std::vector<int>>();
    for (int e : pw) require(e >= 0, ErrorKind::InvalidInput, "negative power");
    p.terms.push_back({t[0].get<double>(), std::move(pw)});
  }
  return p;
}

inline json polynomial_to_json(const Polynomial& p) {
  json a = json::array();
  for (const auto& [c, pw] : p.terms) a.push_back(json::array({c, pw}));
  return a;
}

/// entries[r][c] polynomials in the point's coordinates.
struct PolynomialMatrix {
  std::vector<std::vector<Polynomial>> entries;

  Mat operator()(const Vec& x) const {
    const auto rows = static_cast<Eigen::Index>(entries.size());
    const auto cols = static_cast<Eigen::Index>(entries.front().size());
    Mat m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = entries[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)](x);
    return m;
  }
};

inline PolynomialMatrix polynomial_matrix_from_json(const json& j) {
  require(j.is_array() && !j.empty(), ErrorKind::InvalidInput, "a matrix field is a nonempty list of rows");
  PolynomialMatrix m;
  for (const auto& row : j) {
    require(row.is_array() && row.size() == j[0].size() && !row.empty(), ErrorKind::InvalidInput, "ragged matrix field");
    m.entries.emplace_back();
    for (const auto& e : row) m.entries.back().push_back(polynomial_from_json(e));
  }
  return m;
}

/// components[k] polynomials: a map R^n -> R^m.
struct PolynomialMap {
  std::vector<Polynomial> components;

  Vec operator()(const Vec& x) const {
    Vec v(static_cast<Eigen::Index>(components.size()));
    for (std::size_t k = 0; k < components.size(); ++k) v[static_cast<Eigen::Index>(k)] = components[k](x);
    return v;
  }
};

inline PolynomialMap polynomial_map_from_json(const json& j) {
  require(j.is_array() && !j.empty(), ErrorKind::InvalidInput, "a map is a nonempty list of components");
  PolynomialMap m;
  for (const auto& c : j) m.components.push_back(polynomial_from_json(c));
  return m;
}

/// {"d": d, "entries": [[poly]]}: the (d+1) x (d+1) field of `bu` and `brouwer`.
inline std::pair<int, PolynomialMatrix> matrix_field_from_json(const json& j) {
  const int d = io::field(j, "d").get<int>();
  require(d >= 1, ErrorKind::InvalidParameter, "d must be >= 1");
  auto m = polynomial_matrix_from_json(io::field(j, "entries"));
  require(static_cast<int>(m.entries.size()) == d + 1 && static_cast<int>(m.entries.front().size()) == d + 1,
          ErrorKind::InvalidInput, "field must be (d+1) x (d+1)");
  return {d, m};
}

/// {"maps": [[poly components], ...]}: one map for Radon-KKM, d+1 for colorful KKM.
inline std::vector<PolynomialMap> simplex_maps_from_json(const json& j) {
  std::vector<PolynomialMap> out;
  for (const auto& m : io::field(j, "maps")) out.push_back(polynomial_map_from_json(m));
  require(!out.empty(), ErrorKind::InvalidInput, "no maps");
  return out;
}

// --- measures ----------------------------------------------------------------

inline json measure_to_json(const SmoothedPointMeasure& m) {
  json pts = json::array();
  for (const auto& p : m.points) pts.push_back(io::vec_to_json(p));
  return {{"points", pts}, {"weights", m.weights}, {"delta", m.delta}};
}

/// Weights default to 1 per point.
inline SmoothedPointMeasure measure_from_json(const json& j) {
  SmoothedPointMeasure m;
  for (const auto& p : io::field(j, "points")) m.points.push_back(io::vec_from_json(p));
  m.weights = j.contains("weights") ? j.at("weights").get<std::vector<double>>() : std::vector<double>(m.points.size(), 1.0);
  m.delta = io::field(j, "delta").get<double>();
  check_measure(m);
  return m;
}

/// {"measures": [...]} or a bare list.
inline std::vector<SmoothedPointMeasure> measures_from_json(const json& j) {
  const json& list = j.is_object() ? io::field(j, "measures") : j;
  require(list.is_array(), ErrorKind::InvalidInput, "expected a list of measures");
  std::vector<SmoothedPointMeasure> out;
  for (const auto& m : list) out.push_back(measure_from_json(m));
  return out;
}

inline json measures_to_json(const std::vector<SmoothedPointMeasure>& ms) {
  json a = json::array();
  for (const auto& m : ms) a.push_back(measure_to_json(m));
  return {{"measures", a}};
}

/// {"families": [[measure, ...], ...]}; family j, measure i.
inline MeasureFamilySet families_from_json(const json& j) {
  MeasureFamilySet M;
  for (const auto& fam : io::field(j, "families")) M.families.push_back(measures_from_json(fam));
  return M;
}

inline json families_to_json(const MeasureFamilySet& M) {
  json a = json::array();
  for (const auto& fam : M.families) a.push_back(measures_to_json(fam).at("measures"));
  return {{"families", a}};
}

// --- witnesses ---------------------------------------------------------------

inline json bu_witness_to_json(const BUWitness& w) {
  json j = {{"x", io::vec_to_json(w.x)}, {"tol", w.tol}};
  if (const auto* t = std::get_if<Transversal>(&w.outcome)) {
    j["type"] = "transversal";
    j["pi"] = io::one_based(t->pi);
    j["row_maxima"] = t->row_maxima;
  } else {
    const auto& c = std::get<CubeFacetReport>(w.outcome);
    j["type"] = "bad_rows";
    j["row_a"] = c.row_a + 1;
    j["row_b"] = c.row_b + 1;
    j["column"] = c.column + 1;
    j["entry_a"] = c.entry_a;
    j["entry_b"] = c.entry_b;
  }
  return j;
}

inline BUWitness bu_witness_from_json(const json& j) {
  BUWitness w;
  w.x = io::vec_from_json(io::field(j, "x"));
  w.tol = io::field(j, "tol").get<double>();
  if (io::field(j, "type") == "transversal") {
    w.outcome = Transversal{io::zero_based(io::field(j, "pi")), io::field(j, "row_maxima").get<std::vector<double>>()};
  } else {
    CubeFacetReport c;
    c.verdict = false;
    c.row_a = io::field(j, "row_a").get<int>() - 1;
    c.row_b = io::field(j, "row_b").get<int>() - 1;
    c.column = io::field(j, "column").get<int>() - 1;
    c.entry_a = io::field(j, "entry_a").get<double>();
    c.entry_b = io::field(j, "entry_b").get<double>();
    w.outcome = c;
  }
  return w;
}

inline json simplex_witness_to_json(const SimplexWitness& w) {
  if (const auto* r = std::get_if<RadonPartition>(&w))
    return {{"type", "radon_partition"}, {"J", io::one_based(r->J)}, {"Jp", io::one_based(r->Jp)}, {"x", io::vec_to_json(r->x)},
            {"y", io::vec_to_json(r->y)}, {"lambda", r->lambda}, {"gap", r->gap}};
  if (const auto* i = std::get_if<Intersection>(&w))
    return {{"type", "intersection"}, {"x", io::vec_to_json(i->x)}, {"pi", io::one_based(i->pi)}, {"values", i->values}};
  const auto& b = std::get<BrouwerColorful>(w);
  return {{"type", "brouwer"}, {"x", io::vec_to_json(b.x)}, {"pi", io::one_based(b.pi)}, {"slacks", b.slacks}};
}

inline SimplexWitness simplex_witness_from_json(const json& j) {
  const auto type = io::field(j, "type").get<std::string>();
  if (type == "radon_partition") {
    RadonPartition r;
    r.J = io::zero_based(io::field(j, "J"));
    r.Jp = io::zero_based(io::field(j, "Jp"));
    r.x = io::vec_from_json(io::field(j, "x"));
    r.y = io::vec_from_json(io::field(j, "y"));
    r.lambda = io::field(j, "lambda").get<double>();
    r.gap = io::field(j, "gap").get<double>();
    return r;
  }
  if (type == "intersection")
    return Intersection{io::vec_from_json(io::field(j, "x")), io::zero_based(io::field(j, "pi")),
                        io::field(j, "values").get<std::vector<double>>()};
  require(type == "brouwer", ErrorKind::InvalidInput, "unknown simplex witness " + type);
  return BrouwerColorful{io::vec_from_json(io::field(j, "x")), io::zero_based(io::field(j, "pi")),
                         io::field(j, "slacks").get<std::vector<double>>()};
}

inline json hs_outcome_to_json(const HSWitness& w) {
  return {{"type", "hs_witness"}, {"u", io::vec_to_json(w.u)}, {"pi", io::one_based(w.pi)}, {"residuals", io::mat_to_json(w.residuals)}};
}

inline json hs_outcome_to_json(const OppositePairReport& r) {
  return {{"type", "opposite_pair"},     {"measure", r.measure + 1}, {"max_family", r.max_family + 1},
          {"min_family", r.min_family + 1}, {"u", io::vec_to_json(r.u)}, {"residuals", io::mat_to_json(r.residuals)}};
}

inline HSWitness hs_witness_from_json(const json& j) {
  return HSWitness{io::vec_from_json(io::field(j, "u")), io::zero_based(io::field(j, "pi")), io::mat_from_json(io::field(j, "residuals"))};
}

inline OppositePairReport opposite_pair_from_json(const json& j) {
  OppositePairReport r;
  r.measure = io::field(j, "measure").get<int>() - 1;
  r.max_family = io::field(j, "max_family").get<int>() - 1;
  r.min_family = io::field(j, "min_family").get<int>() - 1;
  r.u = io::vec_from_json(io::field(j, "u"));
  r.residuals = io::mat_from_json(io::field(j, "residuals"));
  return r;
}

inline json equalizing_to_json(const EqualizingCut& c) {
  return {{"type", "equalizing_cut"}, {"u", io::vec_to_json(c.u)}, {"differences", c.differences}, {"residual", c.residual}};
}

inline EqualizingCut equalizing_from_json(const json& j) {
  EqualizingCut c;
  c.u = io::vec_from_json(io::field(j, "u"));
  c.differences = io::field(j, "differences").get<std::vector<double>>();
  c.residual = io::field(j, "residual").get<double>();
  return c;
}

inline json fraction_cut_to_json(const FractionCut& c) {
  json j = {{"type", "fraction_cut"}, {"u", io::vec_to_json(c.u)}, {"fractions", c.fractions}, {"residual", c.residual}};
  j["epsilon"] = std::isfinite(c.epsilon) ? json(c.epsilon) : json(nullptr);
  return j;
}

inline FractionCut fraction_cut_from_json(const json& j) {
  FractionCut c;
  c.u = io::vec_from_json(io::field(j, "u"));
  c.fractions = io::field(j, "fractions").get<std::vector<double>>();
  c.residual = io::field(j, "residual").get<double>();
  const auto& e = io::field(j, "epsilon");
  c.epsilon = e.is_null() ? std::numeric_limits<double>::infinity() : e.get<double>();
  return c;
}

/// odd_index is an orbit position (a shift), not a 1-based index.
inline json collapse_to_json(const OrbitCollapse& c) {
  json orbit = json::array();
  for (const auto& p : c.orbit) orbit.push_back(io::vec_to_json(p));
  return {{"type", "orbit_collapse"}, {"orbit", orbit}, {"odd_index", c.odd_index}, {"y", io::vec_to_json(c.y)},
          {"alpha", c.alpha}, {"residual", c.residual}};
}

inline OrbitCollapse collapse_from_json(const json& j) {
  OrbitCollapse c;
  for (const auto& p : io::field(j, "orbit")) c.orbit.push_back(io::vec_from_json(p));
  c.odd_index = io::field(j, "odd_index").get<int>();
  c.y = io::vec_from_json(io::field(j, "y"));
  c.alpha = io::field(j, "alpha").get<double>();
  c.residual = io::field(j, "residual").get<double>();
  return c;
}

}  // namespace equibu
