// hyperideal: command-line front end. Every subcommand reads one input file
// and writes a JSON report (OBJ for export-obj). Exit codes: 0 pass or
// member, 1 fail or non-member, 2 bad input.

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "hyperideal/io.hpp"
#include "hyperideal/pogorelov.hpp"

using namespace hyperideal;

namespace {

struct Options {
  std::string input;
  std::string out;
  unsigned long long seed = 0;
  int budget_depth = FalsifierBudget{}.depth;
  int budget_shots = FalsifierBudget{}.shots;
  double tol_eq = kEqualityBand;
  int samples = 100;
};

struct Outcome {
  int code = 0;
  std::string text;
};

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

// Geometry that cannot be built from the input is an input error.
template <class F>
auto or_input_error(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const GeometryError& e) {
    throw InputError(e.what());
  }
}

Json header(const std::string& command, const std::string& bytes, const Options& o) {
  return {{"command", command}, {"input_sha256", sha256_hex(bytes)}, {"seed", o.seed}};
}

Outcome report(const Json& j, bool pass) { return {pass ? 0 : 1, j.dump(2) + "\n"}; }

Outcome cmd_validate(const Options& o) {
  const std::string bytes = read_file(o.input);
  const PolyhedronInput in = read_polyhedron(parse(bytes));
  Json j = header("validate", bytes, o);
  ProjectivePolyhedron p;
  try {
    p = build(in);
  } catch (const GeometryError& e) {
    j["pass"] = false;
    j["failures"] = Json::array({{{"check", "construction"}, {"item", ""}, {"detail", e.what()}}});
    return report(j, false);
  }
  const ValidationReport r = validate(p);
  j["pass"] = r.pass;
  Json fails = Json::array();
  for (const auto& f : r.failures) fails.push_back({{"check", f.check}, {"item", f.item}, {"detail", f.detail}});
  j["failures"] = fails;
  Json cls = Json::array();
  for (auto c : r.classification) cls.push_back(to_string(c));
  j["classification"] = cls;
  j["polyhedron"] = polyhedron_to_json(p);
  return report(j, r.pass);
}

Outcome cmd_dual(const Options& o) {
  const std::string bytes = read_file(o.input);
  const ProjectivePolyhedron p = or_input_error([&] { return build(read_polyhedron(parse(bytes))); });
  const DualPolyhedron d = or_input_error([&] { return dual(p); });
  const ConeSphericalMetric m = dual_metric(p);
  Json j = header("dual", bytes, o);
  j["dual"] = dual_to_json(d);
  j["metric"] = complex_to_json(m);
  const bool compact = !p.has_class(VertexClass::Ideal);
  Json cones = Json::array();
  for (int f = 0; f < static_cast<int>(p.planes.size()); ++f) {
    Json c = {{"face", f}, {"cone_angle", m.points[f].angle}};
    c["face_area"] = compact ? Json(face_area(p, f)) : Json(nullptr);
    cones.push_back(c);
  }
  j["cone_angles"] = cones;
  j["pass"] = true;
  return report(j, true);
}

Outcome cmd_truncate(const Options& o) {
  const std::string bytes = read_file(o.input);
  const ProjectivePolyhedron p = or_input_error([&] { return build(read_polyhedron(parse(bytes))); });
  Json j = header("truncate", bytes, o);
  TruncationResult t;
  try {
    t = truncate(p);
  } catch (const GeometryError& e) {
    j["pass"] = false;
    j["error"] = e.what();
    return report(j, false);
  }
  j["pass"] = true;
  j["planes"] = planes_to_json(t.poly.planes);
  j["original_faces"] = t.original_faces;
  std::vector<int> faces;
  for (int k = 0; k < static_cast<int>(t.truncated_vertices.size()); ++k) faces.push_back(t.original_faces + k);
  j["truncation_faces"] = faces;
  j["truncated_vertices"] = t.truncated_vertices;
  j["vertex_origin"] = t.vertex_origin;
  j["edge_origin"] = t.edge_origin;
  j["polyhedron"] = polyhedron_to_json(t.poly);
  return report(j, true);
}

Outcome cmd_untruncate(const Options& o) {
  const std::string bytes = read_file(o.input);
  const PolyhedronInput in = read_polyhedron(parse(bytes));
  if (in.truncation_faces.empty()) throw InputError("untruncate: missing \"truncation_faces\"");
  const ProjectivePolyhedron p = or_input_error([&] { return build(in); });
  Json j = header("untruncate", bytes, o);
  ProjectivePolyhedron q;
  try {
    q = untruncate(p, in.truncation_faces);
  } catch (const GeometryError& e) {
    j["pass"] = false;
    j["error"] = e.what();
    return report(j, false);
  }
  j["pass"] = true;
  j["planes"] = planes_to_json(q.planes);
  j["polyhedron"] = polyhedron_to_json(q);
  return report(j, true);
}

Outcome cmd_angles(const Options& o) {
  const std::string bytes = read_file(o.input);
  const ProjectivePolyhedron p = or_input_error([&] { return build(read_polyhedron(parse(bytes))); });
  const WeightedDualGraph g = or_input_error([&] { return angle_structure(p); });
  Json j = header("angles", bytes, o);
  j.update(graph_to_json(g));
  j["pass"] = true;
  return report(j, true);
}

Outcome cmd_check_angles(const Options& o) {
  const std::string bytes = read_file(o.input);
  const WeightedDualGraph g = read_graph(parse(bytes));
  const KGammaVerdict v = check_K_gamma(g, o.tol_eq);
  Json j = header("check-angles", bytes, o);
  j["tol_eq"] = o.tol_eq;
  j["verdict"] = verdict_to_json(v);
  j["pass"] = v.member;
  return report(j, v.member);
}

Outcome cmd_metric(const Options& o) {
  const std::string bytes = read_file(o.input);
  const WeightedDualGraph g = read_graph(parse(bytes));
  Json j = header("metric", bytes, o);
  ConeSphericalMetric m;
  try {
    m = build_Q_gamma(g);
  } catch (const GeometryError& e) {
    j["pass"] = false;
    j["error"] = e.what();
    return report(j, false);
  }
  j["metric"] = complex_to_json(m);
  j["lengths"] = metric_to_lengths(m, static_cast<int>(g.weights.size()));
  const bool ok = std::abs(m.gauss_bonnet_residual()) <= 1e-7;
  j["pass"] = ok;
  return report(j, ok);
}

Outcome cmd_geodesic_search(const Options& o) {
  const std::string bytes = read_file(o.input);
  const WeightedDualGraph g = read_graph(parse(bytes));
  FalsifierBudget budget;
  budget.depth = o.budget_depth;
  budget.shots = o.budget_shots;
  budget.seed = o.seed;
  Json j = header("geodesic-search", bytes, o);
  const bool member = check_K_gamma(g, o.tol_eq).member;
  ConeSphericalMetric m;
  bool relaxed = false;
  try {
    m = build_Q_gamma(g);
  } catch (const GeometryError&) {
    m = or_input_error([&] { return build_Q_gamma(g, true); });
    relaxed = true;
  }
  const FalsifierResult f = closed_geodesic_falsifier(m, budget);
  j["budget"] = {{"depth", budget.depth}, {"shots", budget.shots}, {"margin", budget.margin}};
  j["member"] = member;
  j["relaxed"] = relaxed;
  j["connections"] = f.connections;
  j["shots"] = f.shots;
  j["budget_exhausted"] = f.budget_exhausted;
  Json exempt = Json::array();
  for (const auto& c : f.exempt) exempt.push_back({{"length", c.length}, {"link_point", c.link_point}});
  j["exempt"] = exempt;
  if (f.witness) {
    Json w = closed_geodesic_to_json(*f.witness);
    const WitnessCheck chk = verify_witness(m, *f.witness);
    w["check"] = {{"closed", chk.closed}, {"geodesic", chk.geodesic}, {"length_error", chk.length_error},
                  {"min_angle_margin", chk.min_angle_margin}};
    j["witness"] = w;
  } else {
    j["witness"] = nullptr;
  }
  j["agree"] = member != f.witness.has_value();
  j["pass"] = !f.witness.has_value();
  return report(j, !f.witness.has_value());
}

Outcome cmd_pogorelov(const Options& o) {
  if (o.samples < 1) throw InputError("--samples must be positive");
  const SelfTestReport r = run_selftest(o.seed, o.samples);
  Json j = {{"command", "pogorelov-selftest"}, {"seed", o.seed}, {"samples", o.samples}};
  Json regimes = Json::array();
  bool ok = true;
  for (const auto& g : r.regimes) {
    regimes.push_back({{"eps", g.eps},
                       {"mu", g.mu},
                       {"samples", g.samples},
                       {"projective_roundtrip", g.projective_roundtrip},
                       {"projective_roundtrip_inv", g.projective_roundtrip_inv},
                       {"norm_difference", g.norm_difference},
                       {"equal_norm_difference", g.equal_norm_difference},
                       {"diagonal", g.diagonal},
                       {"isometry_commutation", g.isometry_commutation},
                       {"conjugation", g.conjugation},
                       {"infinitesimal_consistency", g.infinitesimal_consistency}});
    ok = ok && g.projective_roundtrip < 1e-12 && g.norm_difference < 1e-6 && g.diagonal == 0.0 &&
         g.isometry_commutation < 1e-8 && g.infinitesimal_consistency < 1e-5;
  }
  j["regimes"] = regimes;
  j["killing_residual"] = r.killing_residual;
  j["killing_pushforward"] = r.killing_pushforward;
  j["flex_residual"] = r.flex_residual;
  j["flex_pushforward"] = r.flex_pushforward;
  j["generic_min_residual"] = r.generic_min_residual;
  j["generic_min_pushforward"] = r.generic_min_pushforward;
  j["equivalence_mismatches"] = r.equivalence_mismatches;
  ok = ok && r.equivalence_mismatches == 0;
  j["pass"] = ok;
  return report(j, ok);
}

Outcome cmd_export_obj(const Options& o) {
  const std::string bytes = read_file(o.input);
  ProjectivePolyhedron p = or_input_error([&] { return build(read_polyhedron(parse(bytes))); });
  if (p.has_class(VertexClass::Hyperideal)) p = or_input_error([&] { return truncate(p).poly; });
  return {0, or_input_error([&] { return to_obj(p); })};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hyperideal polyhedra, dual metrics and angle structures"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--seed", o.seed, "Random seed");
  app.add_option("--budget-depth", o.budget_depth, "Corridor depth of the geodesic search")->check(CLI::PositiveNumber);
  app.add_option("--budget-shots", o.budget_shots, "Shots of the geodesic search")->check(CLI::NonNegativeNumber);
  app.add_option("--tol-eq", o.tol_eq, "Equality band for cycle sums at 2 pi")->check(CLI::NonNegativeNumber);
  app.add_option("--out", o.out, "Write the report here instead of standard output");

  std::function<Outcome(const Options&)> run;
  auto sub = [&](const std::string& name, const std::string& help, Outcome (*f)(const Options&)) {
    CLI::App* s = app.add_subcommand(name, help);
    s->add_option("input", o.input, "Input file")->required();
    s->callback([&run, f] { run = f; });
    return s;
  };
  sub("validate", "Check polyhedron invariants", cmd_validate);
  sub("dual", "Dual polyhedron and dual metric", cmd_dual);
  sub("truncate", "Truncate hyperideal vertices", cmd_truncate);
  sub("untruncate", "Undo a truncation", cmd_untruncate);
  sub("angles", "Exterior angles of a hyperideal polyhedron", cmd_angles);
  sub("check-angles", "Membership of an angle assignment", cmd_check_angles);
  sub("metric", "Cone metric of an angle assignment", cmd_metric);
  sub("geodesic-search", "Search for short closed geodesics", cmd_geodesic_search);
  sub("export-obj", "Klein-model OBJ export", cmd_export_obj);
  CLI::App* pog = app.add_subcommand("pogorelov-selftest", "Numerical identities of the Pogorelov map");
  pog->add_option("--samples", o.samples, "Configurations per regime");
  pog->callback([&run] { run = cmd_pogorelov; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  Outcome out;
  try {
    out = run(o);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const GeometryError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  if (o.out.empty()) {
    std::cout << out.text;
  } else {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) {
      std::cerr << "error: cannot write " << o.out << '\n';
      return 2;
    }
    f << out.text;
  }
  return out.code;
}
