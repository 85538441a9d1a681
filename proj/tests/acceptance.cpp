// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "hyperideal/angles.hpp"
#include "hyperideal/conemetric.hpp"
#include "hyperideal/duality.hpp"
#include "hyperideal/pogorelov.hpp"
#include "hyperideal/polyhedron.hpp"
#include "hyperideal/trunc.hpp"

using namespace hyperideal;
using fixtures::Solid;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double max_diff(const MVector& a, const MVector& b) { return max_abs(a - b); }

const std::vector<std::pair<int, int>> kRegimes = {{-1, -1}, {1, 1}, {-1, 1}, {1, -1}};

PogorelovContext context(int eps, int mu) {
  return {ProjectiveCenter(eps < 0 ? MVector(1, 0, 0, 0) : MVector(0, 0, 0, 1), mu)};
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// Worst Gauss-Bonnet defect over every metric built during the run, computed
// from the triangles alone.
double g_worst_gb = 0.0;
int g_metrics = 0;

void record_gauss_bonnet(const ConeSphericalMetric& m) {
  double area = 0.0;
  std::vector<double> angle(m.points.size(), 0.0);
  for (const auto& t : m.triangles) {
    area += t.angle[0] + t.angle[1] + t.angle[2] - M_PI;
    for (int c = 0; c < 3; ++c) angle[t.corner[c]] += t.angle[c];
  }
  double defect = 0.0;
  bool boundary = false;
  for (std::size_t i = 0; i < m.points.size(); ++i) {
    if (m.points[i].boundary) {
      boundary = true;
      defect += M_PI - angle[i];
    } else {
      defect += 2 * M_PI - angle[i];
    }
  }
  // Closed spheres: area - sum(angle - 2 pi) = 4 pi. Disk fragments with
  // geodesic boundary: the same sum equals 2 pi.
  const double target = boundary ? 2 * M_PI : 4 * M_PI;
  g_worst_gb = std::max(g_worst_gb, std::abs(area + defect - target));
  ++g_metrics;
}

Outcome c1_roundtrip() {
  std::mt19937_64 rng(101);
  double worst = 0.0;
  for (const auto& [eps, mu] : kRegimes) {
    const auto ctx = context(eps, mu);
    for (int i = 0; i < 1000; ++i) {
      const MVector x = sample_domain_point(ctx.center, rng);
      worst = std::max(worst, max_diff(projective_inverse(ctx.center, projective_map(ctx.center, x)), x));
    }
  }
  return {worst < 1e-12, fmt("max error %.3e over 4x1000 points", worst)};
}

Outcome c2_norm_difference() {
  std::mt19937_64 rng(202);
  double worst = 0.0;
  for (const auto& [eps, mu] : kRegimes) {
    const auto ctx = context(eps, mu);
    for (int i = 0; i < 100; ++i) {
      const MVector x = sample_domain_point(ctx.center, rng);
      const MVector xp = sample_domain_point(ctx.center, rng);
      const MVector tx = sample_tangent(x, mu, rng);
      const MVector txp = sample_tangent(xp, mu, rng);
      worst = std::max(worst, norm_difference_residual(ctx, x, xp, tx, txp));
    }
  }
  return {worst < 1e-6, fmt("max residual %.3e over 4x100 configurations", worst)};
}

Outcome c3_isometry_and_pushforward() {
  std::mt19937_64 rng(303);
  double commute = 0.0;
  double infinitesimal = 0.0;
  for (const auto& [eps, mu] : kRegimes) {
    const auto ctx = context(eps, mu);
    for (int i = 0; i < 100; ++i) {
      const MVector x = sample_domain_point(ctx.center, rng);
      const MVector xp = sample_domain_point(ctx.center, rng);
      const LinearMap rho = random_isotropy(ctx.center.x0(), rng);
      const auto lhs = global_map(ctx, apply(rho, x), apply(rho, xp));
      const auto rhs = global_map(ctx, x, xp);
      commute = std::max({commute, max_diff(lhs.first, apply(rho, rhs.first)),
                          max_diff(lhs.second, apply(rho, rhs.second))});
      infinitesimal = std::max(infinitesimal,
                               infinitesimal_consistency_residual(ctx, x, sample_tangent(x, mu, rng)));
    }
  }
  const SelfTestReport rep = run_selftest(303, 100);
  const double pushed = std::max(rep.killing_pushforward, rep.flex_pushforward);
  infinitesimal = std::max(infinitesimal, pushed);
  const bool pass = commute < 1e-8 && infinitesimal < 1e-5 && rep.equivalence_mismatches == 0;
  return {pass, fmt("commutation %.3e", commute) + fmt(", infinitesimal %.3e", infinitesimal) +
                    ", mismatches " + std::to_string(rep.equivalence_mismatches)};
}

Outcome c4_ideal_tetrahedron() {
  const auto p = from_planes(fixtures::ideal_tetrahedron());
  double dihedral = 0.0;
  for (int e = 0; e < static_cast<int>(p.comb.edges.size()); ++e) {
    dihedral = std::max(dihedral, std::abs(dihedral_angle(p, e) - M_PI / 3));
  }
  const auto d = dual(p);
  double lengths = 0.0;
  for (double l : d.edge_lengths) lengths = std::max(lengths, std::abs(l - 2 * M_PI / 3));
  record_gauss_bonnet(dual_metric(p));

  WeightedDualGraph g;
  g.gamma = p.comb;
  g.weights = hyperideal_angles(p);  // kinds left undeclared: the checker infers them
  const auto k = check_K_gamma(g);
  const bool all_ideal = std::all_of(k.vertex_kinds.begin(), k.vertex_kinds.end(),
                                     [](VertexKind v) { return v == VertexKind::Ideal; });
  const bool pass = p.comb.edges.size() == 6 && dihedral < 1e-9 && lengths < 1e-9 && k.member && all_ideal &&
                    k.inferred.size() == 4;
  return {pass, fmt("dihedral error %.3e", dihedral) + fmt(", dual length error %.3e", lengths) +
                    (k.member ? ", member" : ", NOT member") + (all_ideal ? ", all ideal" : ", not all ideal")};
}

Outcome c5_cone_angles() {
  std::mt19937_64 rng(505);
  double worst = 0.0;
  int faces = 0;
  for (int i = 0; i < 24; ++i) {
    const auto p = from_planes(fixtures::random_compact(rng, i));
    const auto m = dual_metric(p);
    record_gauss_bonnet(m);
    for (int f = 0; f < p.comb.num_faces; ++f) {
      worst = std::max(worst, std::abs(m.points[f].angle - 2 * M_PI - face_area(p, f)));
      ++faces;
    }
  }
  return {worst < 1e-8, fmt("max error %.3e", worst) + " over " + std::to_string(faces) + " faces of 24 polyhedra"};
}

Outcome c7_truncation() {
  std::mt19937_64 rng(707);
  double planes = 0.0;
  double perp = 0.0;
  bool disjoint = true;
  for (int i = 0; i < 24; ++i) {
    const auto p = from_planes(fixtures::random_hyperideal(rng, i));
    const auto t = truncate(p);
    const int n = t.original_faces;
    const auto& q = t.poly;
    for (int f = n; f < static_cast<int>(q.planes.size()); ++f) {
      for (const Edge& e : q.comb.edges) {
        if (e.face_a != f && e.face_b != f) continue;
        const int g = e.face_a == f ? e.face_b : e.face_a;
        perp = std::max(perp, std::abs(inner(q.planes[f].normal(), q.planes[g].normal())));
      }
      for (int h = f + 1; h < static_cast<int>(q.planes.size()); ++h) {
        disjoint = disjoint && std::abs(inner(q.planes[f].normal(), q.planes[h].normal())) > 1.0;
      }
    }
    std::vector<int> cut;
    for (int f = n; f < static_cast<int>(q.planes.size()); ++f) cut.push_back(f);
    const auto back = untruncate(q, cut);
    if (back.planes.size() != p.planes.size()) return {false, "plane count changed"};
    for (std::size_t f = 0; f < p.planes.size(); ++f) {
      planes = std::max(planes, max_diff(back.planes[f].normal(), p.planes[f].normal()));
    }
  }
  const bool pass = planes < 1e-9 && perp < 1e-8 && disjoint;
  return {pass, fmt("plane error %.3e", planes) + fmt(", perpendicularity %.3e", perp) +
                    (disjoint ? ", polars disjoint" : ", polars MEET")};
}

Outcome c8_caracmet() {
  std::mt19937_64 rng(808);
  int ok = 0;
  std::string why;
  const int total = 20;
  for (int i = 0; i < total; ++i) {
    std::vector<HPlane> planes = i == total - 1 ? fixtures::tetrahedron_with_radii({1.0, 1.3, 1.3, 1.3})
                                                : fixtures::random_hyperideal(rng, i);
    const auto p = from_planes(planes);
    const auto t = truncate(p);
    const auto a = dual_metric(t.poly, truncation_labels(t));
    const auto b = build_Q_gamma(angle_structure(p));
    record_gauss_bonnet(a);
    record_gauss_bonnet(b);
    std::string w;
    if (isomorphic(a, b, 1e-7, &w)) {
      ++ok;
    } else if (why.empty()) {
      why = "; first mismatch: " + w;
    }
  }
  return {ok == total, std::to_string(ok) + "/" + std::to_string(total) + " isomorphic" + why};
}

Outcome c9_lengths() {
  std::mt19937_64 rng(909);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  int instances = 0;
  for (Solid s : {Solid::Tetrahedron, Solid::Cube, Solid::Octahedron, Solid::Dodecahedron}) {
    const double lo = s == Solid::Octahedron ? 0.55 * M_PI : 0.7 * M_PI;
    for (int i = 0; i < 50; ++i) {
      auto g = fixtures::uniform_graph(s, 0.0);
      for (double& w : g.weights) w = lo + (0.99 * M_PI - lo) * u(rng);
      const auto m = build_Q_gamma(g);
      record_gauss_bonnet(m);
      const auto back = metric_to_lengths(m, static_cast<int>(g.weights.size()));
      for (std::size_t e = 0; e < g.weights.size(); ++e) worst = std::max(worst, std::abs(back[e] - g.weights[e]));
      ++instances;
    }
  }
  return {worst < 1e-10 && instances == 200, fmt("max error %.3e", worst) + " over " + std::to_string(instances)};
}

Outcome c10_agreement() {
  struct Case {
    std::string name;
    WeightedDualGraph g;
    bool expect_member;
  };
  std::vector<Case> cases;
  for (double t : {0.55, 2.0 / 3.0, 0.8, 0.95}) {
    cases.push_back({fmt("uniform %.4fpi", t), fixtures::uniform_graph(Solid::Tetrahedron, t * M_PI), t > 0.6});
  }
  auto low = fixtures::uniform_graph(Solid::Tetrahedron, 0.8 * M_PI);
  low.weights[0] = 0.3 * M_PI;
  cases.push_back({"face below 2pi", low, false});
  const auto c2 = fixtures::uniform_graph(Solid::Tetrahedron, 0.4 * M_PI);
  if (check_C2(c2).pass) return {false, "C2 control does not violate C2"};
  cases.push_back({"C2 path", c2, false});
  cases.push_back({"near-equality undeclared", fixtures::uniform_graph(Solid::Tetrahedron, 2 * M_PI / 3 - 2e-9), false});

  std::string detail;
  bool pass = true;
  for (const auto& c : cases) {
    const bool member = check_K_gamma(c.g).member;
    ConeSphericalMetric m;
    try {
      m = build_Q_gamma(c.g);
    } catch (const GeometryError&) {
      m = build_Q_gamma(c.g, true);
    }
    if (m.closed()) record_gauss_bonnet(m);
    const auto r = closed_geodesic_falsifier(m);
    bool verified = true;
    double err = 0.0;
    if (r.witness) {
      const auto w = verify_witness(m, *r.witness);
      err = w.length_error;
      verified = w.closed && w.geodesic && w.length_error < 1e-9;
    }
    const bool agree = member == !r.witness.has_value();
    const bool ok = agree && verified && member == c.expect_member;
    pass = pass && ok;
    detail += "\n    " + c.name + ": " + (member ? "member" : "non-member") + ", " +
              (r.witness ? fmt("witness %.6fpi", r.witness->length / M_PI) + fmt(" (error %.1e)", err)
                         : std::string("no witness")) +
              (ok ? "" : "  <-- FAIL");
  }
  return {pass, std::to_string(cases.size()) + " instances" + detail};
}

Outcome c11_chords() {
  std::mt19937_64 rng(1111);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  int good = 0;
  int chords = 0;
  while (chords < 100) {
    const double alpha = 2 * M_PI + 2 * M_PI * (0.001 + 0.998 * u(rng));
    const int n = static_cast<int>(std::ceil(alpha / (0.9 * M_PI))) + static_cast<int>(3 * u(rng));
    std::vector<double> part(n);
    double sum = 0.0;
    for (double& a : part) sum += (a = 0.8 + 0.4 * u(rng));
    for (double& a : part) a *= alpha / sum;
    if (*std::max_element(part.begin(), part.end()) >= M_PI) continue;
    const auto m = nega_hemisphere(alpha, part);
    record_gauss_bonnet(m);
    const SideStart st{static_cast<int>(u(rng) * n) % n, 0, 0.02 + 0.96 * u(rng), 0.02 + (M_PI - 0.04) * u(rng)};
    const auto path = geodesic_trace(m, st, 10.0);
    ++chords;
    const double err = std::abs(path.length - M_PI);
    worst = std::max(worst, err);
    if (path.end == TraceEnd::Boundary && err < 1e-8 && !self_intersects(m, path)) ++good;
  }
  return {good == chords, std::to_string(good) + "/" + std::to_string(chords) + fmt(" chords, max error %.3e", worst)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    double limit_s;  // 0: no time limit
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, 1.0, c1_roundtrip},         {2, 5.0, c2_norm_difference}, {3, 5.0, c3_isometry_and_pushforward},
      {4, 1.0, c4_ideal_tetrahedron}, {5, 10.0, c5_cone_angles},    {7, 0.0, c7_truncation},
      {8, 0.0, c8_caracmet},          {9, 0.0, c9_lengths},         {10, 60.0, c10_agreement},
      {11, 0.0, c11_chords},
  };
  int failures = 0;
  std::vector<std::string> lines(12);
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool pass = o.pass;
    std::string detail = o.detail;
    if (c.limit_s > 0.0 && secs >= c.limit_s) {
      pass = false;
      detail += fmt(" (over the %.0f s limit)", c.limit_s);
    }
    failures += !pass;
    lines[c.id] = std::string("criterion ") + std::to_string(c.id) + ": " + (pass ? "PASS" : "FAIL") +
                  fmt(" [%.2f s] ", secs) + detail;
  }
  const bool gb = g_worst_gb < 1e-7;
  failures += !gb;
  lines[6] = std::string("criterion 6: ") + (gb ? "PASS" : "FAIL") + fmt(" max defect %.3e", g_worst_gb) +
             " over " + std::to_string(g_metrics) + " metrics built by the other criteria";
  for (int i = 1; i <= 11; ++i) std::printf("%s\n", lines[i].c_str());
  std::printf("%s\n", failures == 0 ? "ALL PASS" : (std::to_string(failures) + " FAILED").c_str());
  return failures == 0 ? 0 : 1;
}
