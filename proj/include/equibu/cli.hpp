// The `equibu` command-line tool. Every subcommand prints a RunReport as
// JSON on the output stream and returns the exit code.
#pragma once

#include "equibu/report.hpp"

#include <CLI11.hpp>

#include <random>

namespace equibu::cli {

struct Common {
  double tol = 1e-3;
  int max_depth = 4;
  std::uint64_t seed = 1;

  BUConfig bu() const {
    BUConfig c;
    c.refine.witness_tol = tol;
    c.refine.slack = tol;
    c.refine.max_depth = max_depth;
    return c;
  }
  RefinementConfig refine() const { return bu().refine; }
};

inline void add_common(CLI::App* app, Common& c) {
  app->add_option("--tol", c.tol, "witness tolerance")->check(CLI::PositiveNumber);
  app->add_option("--max-depth", c.max_depth, "global refinement levels")->check(CLI::Range(1, 12));
  app->add_option("--seed", c.seed, "seed for randomly generated inputs");
}

/// Fills status, witness and the re-validation block. A witness whose
/// re-validation fails is reported with exit 3.
template <class W>
int finish(RunReport& r, const char* status, const W& witness) {
  r.result = {{"status", status}, {"witness", witness}};
  if (std::string(status) == "inconclusive") {
    r.revalidation = {{"tol", r.config.value("tol", 1e-3)}, {"checks", json::array()}, {"pass", false}};
    return static_cast<int>(RunStatus::Inconclusive);
  }
  r.revalidation = revalidate(r.to_json());
  if (!r.revalidation.at("pass").get<bool>()) return static_cast<int>(RunStatus::Inconclusive);
  return static_cast<int>(std::string(status) == "violation" ? RunStatus::Violation : RunStatus::Witness);
}

inline SignedLabeling random_signed_labeling(const SymmetricComplex& sc, int max_label, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
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

inline OrbitLabeling random_orbit_labeling(const SymmetricComplex& sc, int blocks, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int p = sc.order();
  std::uniform_int_distribution<int> block(1, blocks), shift(0, p - 1);
  OrbitLabeling l;
  for (VertexId v : sc.complex.vertices()) {
    if (l.count(v)) continue;
    OrbitLabel lab{block(rng), shift(rng)};
    for (int s = 0; s < p; ++s, v = sc.action.apply(v)) {
      l[v] = lab;
      lab.shift = mod(lab.shift + 1, p);
    }
  }
  return l;
}

inline std::vector<int> parse_ints(const std::string& s) {
  std::vector<int> out;
  for (double v : parse_list(s)) {
    require(v == std::floor(v), ErrorKind::InvalidInput, "expected integers in \"" + s + "\"");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

/// Shared by `fan`, `zp` and `oracle fan`: loads or draws the labeling and
/// records the complex, labels and signs/shifts as inputs.
struct FanInputs {
  SymmetricComplex sc;
  OrbitLabeling labels;
  std::vector<OrbitLabel> target;
};

inline FanInputs load_fan_inputs(RunReport& r, const std::string& complex_path, const std::string& labels_path,
                                 const std::string& signs, const std::string& shifts, const Common& c) {
  FanInputs f;
  f.sc = complex_from_json(io::load_json(complex_path));
  const int p = f.sc.order();
  if (p == 2 && shifts.empty()) {
    require(!signs.empty(), ErrorKind::InvalidParameter, "--signs is required");
    const auto s = parse_signs(signs);
    f.target = z2_target(s);
    r.inputs["signs"] = signs_to_string(s);
  } else {
    require(!shifts.empty(), ErrorKind::InvalidParameter, "--shifts is required for p > 2");
    const auto s = parse_ints(shifts);
    f.target = zp_target(p, s);
    r.inputs["shifts"] = s;
  }
  const int blocks = p == 2 ? static_cast<int>(f.target.size()) : static_cast<int>(f.target.size()) / (p - 1);
  if (!labels_path.empty()) {
    f.labels = orbit_labeling_from_json(io::load_json(labels_path));
  } else if (p == 2) {
    f.labels = to_orbit_labeling(random_signed_labeling(f.sc, blocks, c.seed));
  } else {
    f.labels = random_orbit_labeling(f.sc, blocks, c.seed);
  }
  check_orbit_labeling(f.sc, f.labels, blocks);
  r.inputs["complex"] = complex_to_json(f.sc);
  r.inputs["labels"] = p == 2 ? labeling_to_json(to_signed_labeling(f.labels)) : labeling_to_json(f.labels);
  return f;
}

inline int cmd_complex(RunReport& r, const std::string& kind, int k, int p, int d, int n, int times, const std::string& out) {
  SymmetricComplex sc;
  if (kind == "crosspolytope") {
    sc = crosspolytope(k);
  } else if (kind == "zp") {
    sc = zp_join_sphere(p, d);
  } else if (kind == "deleted-join") {
    require(p == 2, ErrorKind::InvalidParameter, "deleted joins are realized for p = 2 only; use --kind zp");
    sc = crosspolytope(n + 1);
  } else {
    throw Error(ErrorKind::InvalidParameter, "unknown complex kind " + kind);
  }
  sc = subdivide(sc, times);
  const json cj = complex_to_json(sc);
  if (!out.empty()) {
    std::ofstream f(out);
    require(static_cast<bool>(f), ErrorKind::InvalidInput, "cannot write " + out);
    f << cj.dump() << "\n";
  }
  r.inputs["complex"] = cj;
  return finish(r, "witness", json{{"type", "complex"}, {"facets", sc.complex.facets().size()},
                                   {"f_vector", sc.complex.f_vector()}, {"euler_characteristic", sc.complex.euler_characteristic()}});
}

inline int cmd_fan(RunReport& r, const FanInputs& f) {
  const auto cert = find_fan_certificate(f.sc, f.labels, f.target);
  require(cert.has_value(), ErrorKind::InvalidInput, "no certificate found; the complex is not a sphere triangulation");
  FanCertificate c = *cert;
  return finish(r, "witness", certificate_to_json(c));
}

inline int cmd_cover(RunReport& r, const std::string& path, int p, int d, const std::string& signs,
                     const std::string& shifts, const Common& c) {
  json cj = io::load_json(path);
  if (!cj.contains("p")) cj["p"] = p;
  const auto fs = cover_from_json(cj);
  require(fs.p == p, ErrorKind::InvalidParameter, "--p disagrees with the cover file");
  require(fs.sphere_dimension() == d, ErrorKind::InvalidParameter,
          "--d " + std::to_string(d) + " but the cover lives on S^" + std::to_string(fs.sphere_dimension()));
  r.inputs["cover"] = cj;
  CoverOutcome out;
  if (p == 2) {
    const auto s = parse_signs(signs.empty() ? std::string(static_cast<std::size_t>(fs.sets()), '+') : signs);
    r.inputs["signs"] = signs_to_string(s);
    out = fs.families.size() == 1 ? solve_fan_cover(fs, s, c.refine()) : solve_colorful_fan_cover(fs, s, c.refine());
  } else {
    const auto s = shifts.empty() ? std::vector<int>(static_cast<std::size_t>(fs.sets()), p - 1) : parse_ints(shifts);
    r.inputs["shifts"] = s;
    out = fs.families.size() == 1 ? solve_zp_cover(fs, s, c.refine()) : solve_colorful_zp_cover(fs, s, c.refine());
  }
  if (const auto* w = std::get_if<CoverWitness>(&out)) return finish(r, "witness", cover_witness_to_json(*w));
  if (const auto* v = std::get_if<Violation>(&out)) return finish(r, "violation", violation_to_json(*v));
  return finish(r, "inconclusive", inconclusive_to_json(std::get<Inconclusive>(out)));
}

inline int cmd_bu(RunReport& r, const std::string& path, int d, const Common& c) {
  const json fj = io::load_json(path);
  const auto [fd, poly] = matrix_field_from_json(fj);
  require(fd == d, ErrorKind::InvalidParameter, "--d disagrees with the field file");
  r.inputs["field"] = fj;
  const OddMatrixField f(d, [p = poly](const Vec& x) { return p(x); });
  const auto out = solve_colorful_bu(f, c.bu());
  if (const auto* w = std::get_if<BUWitness>(&out)) return finish(r, "witness", bu_witness_to_json(*w));
  return finish(r, "inconclusive", inconclusive_to_json(std::get<Inconclusive>(out)));
}

inline int finish_simplex(RunReport& r, const SimplexOutcome& out) {
  if (const auto* w = std::get_if<SimplexWitness>(&out)) return finish(r, "witness", simplex_witness_to_json(*w));
  return finish(r, "inconclusive", inconclusive_to_json(std::get<Inconclusive>(out)));
}

inline int cmd_kkm(RunReport& r, const std::string& path, int d, const Common& c) {
  const json mj = io::load_json(path);
  const auto polys = simplex_maps_from_json(mj);
  r.inputs["maps"] = mj;
  std::vector<SimplexMap> maps;
  for (const auto& m : polys) maps.push_back([m](const Vec& x) { return m(x); });
  if (maps.size() == 1) return finish_simplex(r, radon_kkm_alternative(d, maps.front(), c.bu()));
  require(static_cast<int>(maps.size()) == d + 1, ErrorKind::InvalidParameter, "give one map or d+1 maps");
  return finish_simplex(r, solve_colorful_kkm(maps, c.bu()));
}

inline int cmd_brouwer(RunReport& r, const std::string& path, int d, const Common& c) {
  const json fj = io::load_json(path);
  const auto [fd, poly] = matrix_field_from_json(fj);
  require(fd == d, ErrorKind::InvalidParameter, "--d disagrees with the field file");
  r.inputs["field"] = fj;
  return finish_simplex(r, solve_colorful_brouwer(d, [p = poly](const Vec& x) { return p(x); }, c.bu()));
}

inline int cmd_hs(RunReport& r, const std::string& mode, const std::string& path, const std::string& alphas_s,
                  const std::string& anchor_s, const Common& c) {
  const json mj = io::load_json(path);
  r.inputs["measures"] = mj;
  if (mode == "colorful") {
    const auto M = families_from_json(mj);
    const auto out = solve_colorful_hs(M, c.bu());
    if (const auto* w = std::get_if<HSWitness>(&out)) return finish(r, "witness", hs_outcome_to_json(*w));
    if (const auto* v = std::get_if<OppositePairReport>(&out)) return finish(r, "violation", hs_outcome_to_json(*v));
    return finish(r, "inconclusive", inconclusive_to_json(std::get<Inconclusive>(out)));
  }
  const auto ms = measures_from_json(mj);
  if (mode == "equalize") {
    const auto out = solve_equalizing_hs(ms, c.bu());
    if (const auto* w = std::get_if<EqualizingCut>(&out)) return finish(r, "witness", equalizing_to_json(*w));
    return finish(r, "inconclusive", inconclusive_to_json(std::get<Inconclusive>(out)));
  }
  require(mode == "fractions", ErrorKind::InvalidParameter, "--mode is colorful, equalize or fractions");
  std::vector<double> alphas = alphas_s.empty() ? std::vector<double>(ms.size(), 0.5) : parse_list(alphas_s);
  r.inputs["alphas"] = alphas;
  FractionOutcome out;
  const bool halves = std::all_of(alphas.begin(), alphas.end(), [](double a) { return a == 0.5; });
  if (anchor_s.empty()) {
    require(halves, ErrorKind::InvalidParameter, "fractions other than 1/2 need --anchor");
    out = solve_ham_sandwich(ms, c.bu());
  } else {
    const auto a = parse_list(anchor_s);
    const Vec anchor = Eigen::Map<const Vec>(a.data(), static_cast<Eigen::Index>(a.size()));
    r.inputs["anchor"] = a;
    out = solve_bhj_fractions(ms, alphas, anchor, c.bu());
  }
  if (const auto* w = std::get_if<FractionCut>(&out)) return finish(r, "witness", fraction_cut_to_json(*w));
  return finish(r, "inconclusive", inconclusive_to_json(std::get<Inconclusive>(out)));
}

inline int cmd_collapse(RunReport& r, const std::string& path, int p, int d, const Common& c) {
  const json mj = io::load_json(path);
  const auto map = polynomial_map_from_json(io::field(mj, "components"));
  require(static_cast<int>(map.components.size()) == d, ErrorKind::InvalidParameter, "the map needs d components");
  r.inputs["map"] = mj.at("components");
  const auto out = orbit_collapse(p, d, [&](const Vec& x) { return map(x); }, c.bu());
  if (const auto* w = std::get_if<OrbitCollapse>(&out)) return finish(r, "witness", collapse_to_json(*w));
  return finish(r, "inconclusive", inconclusive_to_json(std::get<Inconclusive>(out)));
}

inline int cmd_oracle_fan(RunReport& r, const FanInputs& f) {
  const auto scan = exhaustive_fan_scan(f.sc, f.labels, f.target);
  json certs = json::array();
  for (const auto& o : scan.orbit_faces)
    certs.push_back(certificate_to_json(f.sc.order() == 2 ? FanCertificate{ComplementaryEdge{o.face, o.block}} : FanCertificate{o}));
  for (const auto& t : scan.target_facets) certs.push_back(certificate_to_json(t));
  return finish(r, "witness", json{{"type", "fan_scan"}, {"certificates", certs}});
}

inline int cmd_oracle_sweep(RunReport& r, const std::string& path, const std::string& alphas_s, SweepConfig sc) {
  const json mj = io::load_json(path);
  const auto ms = measures_from_json(mj);
  r.inputs["measures"] = mj;
  const std::vector<double> alphas = alphas_s.empty() ? std::vector<double>(ms.size(), 0.5) : parse_list(alphas_s);
  require(alphas.size() == ms.size(), ErrorKind::InvalidParameter, "need one fraction per measure");
  r.inputs["alphas"] = alphas;
  const auto sweep = line_sweep_2d(ms, [&](const std::vector<double>& fr) { return fraction_residual(fr, alphas); }, sc);
  json sols = json::array();
  for (const auto& cell : sweep.solutions) sols.push_back(json::array({cell.angle, cell.offset, cell.residual}));
  return finish(r, "witness", json{{"type", "line_sweep"},       {"best_u", io::vec_to_json(sweep.best.u)},
                                   {"best_residual", sweep.best.residual}, {"modulus", sweep.modulus},
                                   {"solutions", sols}});
}

/// Parses argv, runs the subcommand and writes the report to `out`.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"equibu: colorful Borsuk-Ulam solvers"};
  app.require_subcommand(1);
  Common c;
  std::string svg;

  auto* complex = app.add_subcommand("complex", "build a symmetric sphere triangulation");
  std::string kind = "crosspolytope", out_path;
  int k = 3, p = 2, d = 1, n = 2, times = 0;
  complex->add_option("--kind", kind, "crosspolytope | zp | deleted-join");
  complex->add_option("--k", k, "crosspolytope size");
  complex->add_option("--p", p);
  complex->add_option("--d", d);
  complex->add_option("--n", n, "simplex dimension for deleted-join");
  complex->add_option("--subdivide", times, "barycentric subdivisions");
  complex->add_option("--out", out_path, "also write the complex JSON here");

  auto* fan = app.add_subcommand("fan", "Fan certificate for an antipodal labeling");
  std::string complex_path, labels_path, signs, shifts;
  for (auto* sub : {fan}) {
    sub->add_option("--complex", complex_path)->required();
    sub->add_option("--labels", labels_path, "labeling JSON; random from --seed when absent");
    sub->add_option("--signs", signs, "e.g. ++-");
    sub->add_option("--shifts", shifts);
  }

  auto* cover = app.add_subcommand("cover", "cover theorems on spheres");
  std::string families_path;
  cover->add_option("--families", families_path)->required();
  cover->add_option("--p", p);
  cover->add_option("--d", d)->required();
  cover->add_option("--signs", signs);
  cover->add_option("--shifts", shifts);

  auto* bu = app.add_subcommand("bu", "colorful Borsuk-Ulam for an odd matrix field");
  std::string field_path;
  bu->add_option("--d", d)->required();
  bu->add_option("--field", field_path)->required();

  auto* kkm = app.add_subcommand("kkm", "Radon-KKM alternative (one map) or colorful KKM (d+1 maps)");
  std::string maps_path;
  kkm->add_option("--d", d)->required();
  kkm->add_option("--maps", maps_path)->required();

  auto* brouwer = app.add_subcommand("brouwer", "colorful Brouwer for a stochastic matrix field");
  brouwer->add_option("--d", d)->required();
  brouwer->add_option("--field", field_path)->required();

  auto* hs = app.add_subcommand("hs", "ham sandwich variants");
  std::string mode = "equalize", measures_path, alphas, anchor;
  hs->add_option("--mode", mode, "colorful | equalize | fractions");
  hs->add_option("--measures", measures_path)->required();
  hs->add_option("--alphas", alphas, "e.g. 0.25,0.75");
  hs->add_option("--anchor", anchor, "e.g. 0,5");
  hs->add_option("--svg", svg, "write a picture of a planar run");

  auto* zp = app.add_subcommand("zp", "Z/p Fan certificate or orbit collapse");
  std::string map_path;
  zp->add_option("--p", p)->required();
  zp->add_option("--d", d)->required();
  zp->add_option("--complex", complex_path);
  zp->add_option("--labels", labels_path);
  zp->add_option("--shifts", shifts);
  zp->add_option("--map", map_path, "map JSON {\"components\": [...]} for orbit collapse");

  auto* oracle = app.add_subcommand("oracle", "brute-force references");
  oracle->require_subcommand(1);
  auto* ofan = oracle->add_subcommand("fan", "all Fan certificates by enumeration");
  ofan->add_option("--complex", complex_path)->required();
  ofan->add_option("--labels", labels_path);
  ofan->add_option("--signs", signs);
  ofan->add_option("--shifts", shifts);
  auto* osweep = oracle->add_subcommand("sweep", "line sweep for planar fraction constraints");
  SweepConfig sweep_cfg;
  osweep->add_option("--measures", measures_path)->required();
  osweep->add_option("--alphas", alphas);
  osweep->add_option("--angles", sweep_cfg.angles);
  osweep->add_option("--offsets", sweep_cfg.offsets);
  osweep->add_option("--slack", sweep_cfg.slack);
  osweep->add_option("--svg", svg);

  auto* validate = app.add_subcommand("validate", "re-check a saved report");
  std::string report_path;
  validate->add_option("--report", report_path)->required();

  for (auto* sub : {complex, fan, cover, bu, kkm, brouwer, hs, zp, ofan, osweep}) add_common(sub, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : static_cast<int>(RunStatus::InputError);
  }

  RunReport r;
  for (int a = 0; a < argc; ++a) r.command.emplace_back(argv[a]);
  const auto start = std::chrono::steady_clock::now();
  int code = 0;
  try {
    if (validate->parsed()) {
      const json rep = io::load_json(report_path);
      const json again = revalidate(rep);
      out << again.dump(2) << "\n";
      return again.at("pass").get<bool>() ? 0 : static_cast<int>(RunStatus::Inconclusive);
    }
    CLI::App* sub = app.get_subcommands().front();
    std::string name = sub->get_name();
    r.config = {{"subcommand", name}, {"tol", c.tol}, {"max_depth", c.max_depth}, {"seed", c.seed}};
    if (name == "complex") {
      code = cmd_complex(r, kind, k, p, d, n, times, out_path);
    } else if (name == "fan") {
      code = cmd_fan(r, load_fan_inputs(r, complex_path, labels_path, signs, shifts, c));
    } else if (name == "cover") {
      r.config["p"] = p;
      r.config["d"] = d;
      code = cmd_cover(r, families_path, p, d, signs, shifts, c);
    } else if (name == "bu") {
      r.config["d"] = d;
      code = cmd_bu(r, field_path, d, c);
    } else if (name == "kkm") {
      r.config["d"] = d;
      code = cmd_kkm(r, maps_path, d, c);
    } else if (name == "brouwer") {
      r.config["d"] = d;
      code = cmd_brouwer(r, field_path, d, c);
    } else if (name == "hs") {
      r.config["mode"] = mode;
      code = cmd_hs(r, mode, measures_path, alphas, anchor, c);
    } else if (name == "zp") {
      r.config["p"] = p;
      r.config["d"] = d;
      if (!map_path.empty()) {
        code = cmd_collapse(r, map_path, p, d, c);
      } else {
        require(!complex_path.empty(), ErrorKind::InvalidParameter, "zp needs --complex or --map");
        auto f = load_fan_inputs(r, complex_path, labels_path, signs, shifts, c);
        require(f.sc.order() == p, ErrorKind::InvalidParameter, "--p disagrees with the complex's action");
        code = cmd_fan(r, f);
      }
    } else {
      CLI::App* leaf = sub->get_subcommands().front();
      r.config["oracle"] = leaf->get_name();
      if (leaf == ofan) {
        code = cmd_oracle_fan(r, load_fan_inputs(r, complex_path, labels_path, signs, shifts, c));
      } else {
        sweep_cfg.validate();
        r.config["angles"] = sweep_cfg.angles;
        r.config["offsets"] = sweep_cfg.offsets;
        r.config["slack"] = sweep_cfg.slack;
        code = cmd_oracle_sweep(r, measures_path, alphas, sweep_cfg);
      }
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const json report = r.to_json();
    if (!svg.empty()) emit_svg(report, svg);
    out << report.dump(2) << "\n";
    return code;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(RunStatus::InputError);
  } catch (const json::exception& e) {
    err << "error: invalid-input: " << e.what() << "\n";
    return static_cast<int>(RunStatus::InputError);
  }
}

}  // namespace equibu::cli
