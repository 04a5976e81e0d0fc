// Run reports: the re-validation block recomputed from a report's embedded
// inputs, and SVG pictures of planar ham-sandwich runs.
#pragma once

#include "equibu/io.hpp"
#include "equibu/oracles.hpp"

#include <chrono>
#include <iomanip>

namespace equibu {

/// Exit codes of the command-line tool.
enum class RunStatus { Witness = 0, InputError = 1, Violation = 2, Inconclusive = 3 };

/// command: argv echo; config: subcommand, mode and tolerances; inputs: every
/// input embedded verbatim; result: {"status", "witness"}; revalidation:
/// {"tol", "checks": [{"name", "value", "bound"}], "pass"}.
struct RunReport {
  std::vector<std::string> command;
  json config = json::object();
  json inputs = json::object();
  json result = json::object();
  json revalidation = json::object();
  double seconds = 0.0;

  json to_json() const {
    return {{"command", command}, {"config", config},       {"inputs", inputs},
            {"result", result},   {"revalidation", revalidation}, {"timing", {{"seconds", seconds}}}};
  }
};

namespace detail {

struct CheckList {
  json checks = json::array();

  void add(const std::string& name, double value, double bound) {
    checks.push_back({{"name", name}, {"value", std::isfinite(value) ? json(value) : json(nullptr)}, {"bound", bound}});
  }
  void flag(const std::string& name, bool ok) { add(name, ok ? 0.0 : 1.0, 0.0); }
};

inline const json& input(const json& report, const char* key) {
  require(report.contains("inputs") && report.at("inputs").contains(key), ErrorKind::InvalidReport,
          std::string("report lacks input \"") + key + "\"");
  return report.at("inputs").at(key);
}

inline std::vector<OrbitLabel> fan_target(const json& report, int p) {
  const auto& in = report.at("inputs");
  if (in.contains("signs")) return z2_target(parse_signs(in.at("signs").get<std::string>()));
  require(in.contains("shifts"), ErrorKind::InvalidReport, "report lacks signs or shifts");
  auto shifts = in.at("shifts").get<std::vector<int>>();
  return zp_target(p, shifts);
}

inline void check_fan(const json& report, const json& w, CheckList& out) {
  const auto sc = complex_from_json(input(report, "complex"));
  const auto l = orbit_labeling_from_json(input(report, "labels"));
  out.flag("certificate", validate_certificate(sc, l, fan_target(report, sc.order()), certificate_from_json(w)));
}

inline void check_cover(const json& report, const json& w, double tol, CheckList& out) {
  const auto fs = cover_from_json(input(report, "cover"));
  if (w.at("type") != "cover_witness") {
    const auto v = violation_from_json(w);
    out.flag("violation_claims", validate_violation(fs, v, tol));
    out.add("claims_spread", claims_spread(fs, v.claims), tol);
    return;
  }
  const auto cw = cover_witness_from_json(w);
  out.flag("support_membership", validate_cover_witness(fs, cw, tol));
  out.add("support_distance", cw.residual(), tol);
  out.flag("required_labels", cw.required == fan_target(report, fs.p));
  if (fs.families.size() > 1) {
    std::set<int> fams(cw.assignment.begin(), cw.assignment.end());
    out.flag("assignment_bijective", fams.size() == cw.assignment.size() && fams.size() == fs.families.size());
  }
}

inline void check_bu(const json& report, const json& w, double tol, CheckList& out) {
  const auto [d, poly] = matrix_field_from_json(input(report, "field"));
  const OddMatrixField f(d, [p = poly](const Vec& x) { return p(x); });
  const auto bw = bu_witness_from_json(w);
  out.add("unit_sphere", std::abs(bw.x.norm() - 1.0), 1e-9);
  const Mat m = f(bw.x);
  if (const auto* t = std::get_if<Transversal>(&bw.outcome)) {
    out.flag("permutation", std::set<int>(t->pi.begin(), t->pi.end()).size() == static_cast<std::size_t>(m.cols()) &&
                                std::all_of(t->pi.begin(), t->pi.end(), [&](int r) { return r >= 0 && r < m.rows(); }));
    for (Eigen::Index i = 0; i < m.cols() && i < static_cast<Eigen::Index>(t->pi.size()); ++i) {
      const Eigen::Index r = t->pi[static_cast<std::size_t>(i)];
      if (r < 0 || r >= m.rows()) continue;
      const std::string tag = "(" + std::to_string(r + 1) + "," + std::to_string(i + 1) + ")";
      out.add("nonnegative" + tag, -m(r, i), tol);
      out.add("row_maximal" + tag, m.row(r).cwiseAbs().maxCoeff() - std::abs(m(r, i)), tol);
    }
    return;
  }
  const auto& c = std::get<CubeFacetReport>(bw.outcome);
  const bool in_range = c.row_a >= 0 && c.row_b >= 0 && c.row_a < m.rows() && c.row_b < m.rows() && c.row_a != c.row_b &&
                        c.column >= 0 && c.column < m.cols();
  out.flag("indices", in_range);
  if (!in_range) return;
  const double a = m(c.row_a, c.column), b = m(c.row_b, c.column);
  out.add("row_a_maximal", m.row(c.row_a).cwiseAbs().maxCoeff() - std::abs(a), tol);
  out.add("row_b_maximal", m.row(c.row_b).cwiseAbs().maxCoeff() - std::abs(b), tol);
  out.add("opposite_signs", a * b, tol * tol);
}

inline void check_simplex(const json& report, const json& w, double tol, CheckList& out) {
  const auto sw = simplex_witness_from_json(w);
  if (report.at("inputs").contains("maps")) {
    std::vector<SimplexMap> maps;
    for (const auto& m : simplex_maps_from_json(input(report, "maps"))) maps.push_back([m](const Vec& x) { return m(x); });
    if (maps.size() == 1) {
      out.flag("radon_kkm", validate_radon_kkm(maps.front(), sw, tol));
      if (const auto* r = std::get_if<RadonPartition>(&sw)) out.add("image_gap", (maps.front()(r->x) - maps.front()(r->y)).cwiseAbs().maxCoeff(), tol);
    } else {
      const auto* i = std::get_if<Intersection>(&sw);
      out.flag("intersection", i != nullptr && validate_colorful_kkm(maps, *i, tol));
    }
    return;
  }
  const auto [d, poly] = matrix_field_from_json(input(report, "field"));
  const auto* b = std::get_if<BrouwerColorful>(&sw);
  out.flag("colorful_brouwer", b != nullptr && validate_colorful_brouwer([p = poly](const Vec& x) { return p(x); }, *b, tol));
  if (b) {
    const Mat m = poly(b->x);
    for (std::size_t i = 0; i < b->pi.size(); ++i) {
      const int c = b->pi[i];
      if (c < 0 || c >= m.cols()) continue;
      out.add("slack(" + std::to_string(i + 1) + ")", m(static_cast<Eigen::Index>(i), c) - b->x[c], tol);
    }
  }
}

inline void check_hs(const json& report, const json& w, double tol, CheckList& out) {
  const auto type = w.at("type").get<std::string>();
  if (type == "hs_witness" || type == "opposite_pair") {
    const auto M = families_from_json(input(report, "measures"));
    if (type == "hs_witness") {
      out.flag("transversal", validate_hs_witness(M, hs_witness_from_json(w), tol));
    } else {
      out.flag("opposite_pair", validate_opposite_pair(M, opposite_pair_from_json(w), tol));
    }
    return;
  }
  const auto ms = measures_from_json(input(report, "measures"));
  if (type == "equalizing_cut") {
    const auto cut = equalizing_from_json(w);
    out.add("spread", detail::spread(detail::signed_differences(ms, cut.u)), tol);
    return;
  }
  const auto cut = fraction_cut_from_json(w);
  std::vector<double> alphas(ms.size(), 0.5);
  if (report.at("inputs").contains("alphas")) alphas = report.at("inputs").at("alphas").get<std::vector<double>>();
  const auto fr = halfspace_fractions(ms, cut.u);
  for (std::size_t i = 0; i < ms.size() && i < alphas.size(); ++i)
    out.add("fraction(" + std::to_string(i + 1) + ")", std::abs(fr[i] - alphas[i]), tol);
}

inline void check_zp(const json& report, const json& w, double tol, CheckList& out) {
  if (w.at("type") != "orbit_collapse") {
    check_fan(report, w, out);
    return;
  }
  const int p = report.at("config").at("p").get<int>();
  const int d = report.at("config").at("d").get<int>();
  const auto map = polynomial_map_from_json(input(report, "map"));
  const auto c = collapse_from_json(w);
  require(!c.orbit.empty(), ErrorKind::InvalidReport, "empty orbit");
  const Mat act = zp_action(p, d);
  const auto again = collapse_at([&](const Vec& x) { return map(x); }, act, p, c.orbit.front(), c.odd_index);
  out.add("unit_sphere", std::abs(c.orbit.front().norm() - 1.0), 1e-9);
  out.add("collapse", again.residual, tol);
  double drift = 0.0;
  for (std::size_t k = 0; k < c.orbit.size() && k < again.orbit.size(); ++k) drift = std::max(drift, (c.orbit[k] - again.orbit[k]).norm());
  out.add("orbit_matches_action", drift, 1e-9);
}

inline void check_oracle(const json& report, const json& w, double tol, CheckList& out) {
  const auto type = w.at("type").get<std::string>();
  if (type == "fan_scan") {
    const auto sc = complex_from_json(input(report, "complex"));
    const auto l = orbit_labeling_from_json(input(report, "labels"));
    const auto target = fan_target(report, sc.order());
    bool all = true;
    for (const auto& c : w.at("certificates")) all = all && validate_certificate(sc, l, target, certificate_from_json(c));
    out.flag("every_listed_certificate", all);
    out.flag("nonempty", !w.at("certificates").empty());
    return;
  }
  require(type == "line_sweep", ErrorKind::InvalidReport, "unknown oracle result " + type);
  const auto ms = measures_from_json(input(report, "measures"));
  std::vector<double> alphas(ms.size(), 0.5);
  if (report.at("inputs").contains("alphas")) alphas = report.at("inputs").at("alphas").get<std::vector<double>>();
  const Vec u = io::vec_from_json(w.at("best_u"));
  out.add("best_residual", fraction_residual(halfspace_fractions(ms, u), alphas), w.at("best_residual").get<double>() + tol);
}

}  // namespace detail

/// Recomputes the re-validation block of a report from its embedded inputs
/// with the library's validators; never reads solver-internal fields.
inline json revalidate(const json& report) {
  require(report.is_object() && report.contains("config") && report.contains("result") && report.contains("inputs"),
          ErrorKind::InvalidReport, "report lacks config, inputs or result");
  const auto& cfg = report.at("config");
  const auto& res = report.at("result");
  require(cfg.contains("subcommand") && res.contains("status"), ErrorKind::InvalidReport, "report lacks subcommand or status");
  double tol = cfg.value("tol", 1e-3);
  if (report.contains("revalidation") && report.at("revalidation").contains("tol")) tol = report.at("revalidation").at("tol").get<double>();
  detail::CheckList out;
  const auto status = res.at("status").get<std::string>();
  if (status != "inconclusive") {
    require(res.contains("witness"), ErrorKind::InvalidReport, "report lacks its witness");
    const auto& w = res.at("witness");
    const auto sub = cfg.at("subcommand").get<std::string>();
    try {
      if (sub == "complex") {
        const auto sc = complex_from_json(detail::input(report, "complex"));
        out.flag("action_free", action_is_valid(sc));
        out.add("euler_characteristic", std::abs(sc.complex.euler_characteristic() - sphere_euler_characteristic(sc.dimension())), 0.0);
        out.add("equivariant_coords", coords_equivariance_error(sc), 1e-9);
      } else if (sub == "fan") {
        detail::check_fan(report, w, out);
      } else if (sub == "cover") {
        detail::check_cover(report, w, tol, out);
      } else if (sub == "bu") {
        detail::check_bu(report, w, tol, out);
      } else if (sub == "kkm" || sub == "brouwer") {
        detail::check_simplex(report, w, tol, out);
      } else if (sub == "hs") {
        detail::check_hs(report, w, tol, out);
      } else if (sub == "zp") {
        detail::check_zp(report, w, tol, out);
      } else if (sub == "oracle") {
        detail::check_oracle(report, w, tol, out);
      } else {
        throw Error(ErrorKind::InvalidReport, "unknown subcommand " + sub);
      }
    } catch (const json::exception& e) {
      throw Error(ErrorKind::InvalidReport, std::string("malformed report: ") + e.what());
    }
  }
  bool pass = !out.checks.empty();
  for (const auto& c : out.checks) pass = pass && !c.at("value").is_null() && c.at("value").get<double>() <= c.at("bound").get<double>();
  return {{"tol", tol}, {"checks", out.checks}, {"pass", pass}};
}

/// True iff every recomputed inequality holds at the report's stated tolerance.
inline bool validate_report(const json& report) { return revalidate(report).at("pass").get<bool>(); }

// --- SVG ---------------------------------------------------------------------

namespace detail {

inline std::vector<Vec> clip_halfplane(const std::vector<Vec>& poly, const Vec& n, double b) {
  // Sutherland-Hodgman against <n, x> <= b
  std::vector<Vec> out;
  for (std::size_t k = 0; k < poly.size(); ++k) {
    const Vec& a = poly[k];
    const Vec& c = poly[(k + 1) % poly.size()];
    const double fa = n.dot(a) - b, fc = n.dot(c) - b;
    if (fa <= 0) out.push_back(a);
    if ((fa < 0 && fc > 0) || (fa > 0 && fc < 0)) out.push_back(a + (c - a) * (fa / (fa - fc)));
  }
  return out;
}

}  // namespace detail

/// Points colored per measure, the cut line and the shaded H^+, from a
/// planar hs report (or any report whose inputs hold planar measures and
/// whose witness has a hyperplane "u" or "best_u").
inline void emit_svg(const json& report, const std::string& path) {
  const json& in = detail::input(report, "measures");
  std::vector<std::vector<SmoothedPointMeasure>> groups;
  if (in.is_object() && in.contains("families")) {
    for (const auto& fam : families_from_json(in).families) groups.push_back(fam);
  } else {
    groups.push_back(measures_from_json(in));
  }
  std::vector<Vec> all;
  for (const auto& g : groups)
    for (const auto& m : g) {
      require(m.dimension() == 2 || m.points.empty(), ErrorKind::UnsupportedDimension, "SVG output needs planar measures");
      all.insert(all.end(), m.points.begin(), m.points.end());
    }
  require(!all.empty(), ErrorKind::UnsupportedDimension, "SVG output needs planar measures");
  Vec lo = all.front(), hi = all.front();
  for (const auto& p : all) lo = lo.cwiseMin(p), hi = hi.cwiseMax(p);
  const double pad = 0.1 * std::max({hi[0] - lo[0], hi[1] - lo[1], 1e-6});
  lo.array() -= pad;
  hi.array() += pad;
  const double W = 600.0, scale = W / std::max(hi[0] - lo[0], hi[1] - lo[1]);
  const double H = scale * (hi[1] - lo[1]), Wd = scale * (hi[0] - lo[0]);
  auto sx = [&](const Vec& p) { return (p[0] - lo[0]) * scale; };
  auto sy = [&](const Vec& p) { return (hi[1] - p[1]) * scale; };

  std::ostringstream s;
  s << std::fixed << std::setprecision(3);
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << Wd << "\" height=\"" << H << "\" viewBox=\"0 0 " << Wd << " "
    << H << "\">\n";
  s << "<rect x=\"0\" y=\"0\" width=\"" << Wd << "\" height=\"" << H << "\" fill=\"white\"/>\n";

  std::optional<Vec> u;
  if (report.contains("result") && report.at("result").contains("witness")) {
    const auto& w = report.at("result").at("witness");
    if (w.contains("u")) u = io::vec_from_json(w.at("u"));
    if (w.contains("best_u")) u = io::vec_from_json(w.at("best_u"));
  }
  if (u && u->size() == 3 && u->tail(2).norm() > 1e-12) {
    const Vec n = u->tail(2);
    const double b = (*u)[0];
    std::vector<Vec> box;
    for (auto [x, y] : {std::pair{lo[0], lo[1]}, {hi[0], lo[1]}, {hi[0], hi[1]}, {lo[0], hi[1]}}) {
      Vec c(2);
      c << x, y;
      box.push_back(c);
    }
    const auto shade = detail::clip_halfplane(box, n, b);
    if (!shade.empty()) {
      s << "<polygon class=\"halfspace\" fill=\"#4a7bd0\" fill-opacity=\"0.12\" points=\"";
      for (const auto& p : shade) s << sx(p) << "," << sy(p) << " ";
      s << "\"/>\n";
    }
    // The cut line is the boundary edge of the shaded polygon.
    std::vector<Vec> on;
    for (const auto& p : shade)
      if (std::abs(n.dot(p) - b) <= 1e-9 * (1 + std::abs(b))) on.push_back(p);
    if (on.size() >= 2)
      s << "<line class=\"cut\" x1=\"" << sx(on[0]) << "\" y1=\"" << sy(on[0]) << "\" x2=\"" << sx(on[1]) << "\" y2=\""
        << sy(on[1]) << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
  }
  static const char* palette[] = {"#d62728", "#2ca02c", "#1f77b4", "#ff7f0e", "#9467bd", "#8c564b"};
  const double r = 3.0;
  for (std::size_t g = 0; g < groups.size(); ++g)
    for (std::size_t i = 0; i < groups[g].size(); ++i) {
      const auto& m = groups[g][i];
      if (m.points.empty()) continue;
      s << "<g class=\"measure\" data-family=\"" << g + 1 << "\" data-measure=\"" << i + 1 << "\" fill=\"" << palette[i % 6]
        << "\"" << (g > 0 ? " fill-opacity=\"0.6\"" : "") << ">\n";
      for (const auto& p : m.points) {
        if (g % 2 == 0)
          s << "  <circle cx=\"" << sx(p) << "\" cy=\"" << sy(p) << "\" r=\"" << r << "\"/>\n";
        else
          s << "  <rect x=\"" << sx(p) - r << "\" y=\"" << sy(p) - r << "\" width=\"" << 2 * r << "\" height=\"" << 2 * r << "\"/>\n";
      }
      s << "</g>\n";
    }
  s << "</svg>\n";
  std::ofstream f(path);
  require(static_cast<bool>(f), ErrorKind::InvalidInput, "cannot write " + path);
  f << s.str();
}

}  // namespace equibu
