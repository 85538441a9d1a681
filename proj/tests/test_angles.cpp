#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <numeric>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "hyperideal/angles.hpp"

using namespace hyperideal;
using fixtures::Solid;

namespace {

using EdgeSet = std::vector<int>;

// Brute force over edge subsets of bounded weight: a subset is a simple
// cycle when it is connected and every node has degree 2, a simple path
// when it is connected, acyclic and has maximum degree 2.
struct Oracle {
  std::set<EdgeSet> cycles;
  std::set<EdgeSet> paths;
};

Oracle brute_force(const WeightedDualGraph& g, double bound) {
  const auto& c = g.gamma;
  const int ne = static_cast<int>(c.edges.size());
  Oracle o;
  std::vector<int> pick;
  std::vector<int> degree(c.num_faces, 0);
  auto classify = [&]() {
    std::vector<int> parent(c.num_faces);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    std::set<int> nodes;
    bool acyclic = true;
    for (int e : pick) {
      const int a = c.edges[e].face_a, b = c.edges[e].face_b;
      nodes.insert(a);
      nodes.insert(b);
      const int ra = find(a), rb = find(b);
      if (ra == rb) acyclic = false;
      parent[ra] = rb;
    }
    std::set<int> roots;
    for (int n : nodes) roots.insert(find(n));
    if (roots.size() != 1) return;
    bool all_two = true;
    for (int n : nodes) all_two = all_two && degree[n] == 2;
    if (all_two && pick.size() >= 3) o.cycles.insert(pick);
    if (acyclic) o.paths.insert(pick);
  };
  std::function<void(int, double)> rec = [&](int e, double sum) {
    if (e == ne) {
      if (!pick.empty()) classify();
      return;
    }
    rec(e + 1, sum);
    const int a = c.edges[e].face_a, b = c.edges[e].face_b;
    if (sum + g.weights[e] > bound || degree[a] == 2 || degree[b] == 2) return;
    ++degree[a];
    ++degree[b];
    pick.push_back(e);
    rec(e + 1, sum + g.weights[e]);
    pick.pop_back();
    --degree[a];
    --degree[b];
  };
  rec(0, 0.0);
  return o;
}

std::set<EdgeSet> as_sets(const std::vector<std::vector<int>>& v) {
  std::set<EdgeSet> out;
  for (auto e : v) {
    std::sort(e.begin(), e.end());
    out.insert(e);
  }
  return out;
}

WeightedDualGraph random_weights(Solid s, double lo, double hi, std::mt19937_64& rng) {
  auto g = fixtures::uniform_graph(s, 0.0);
  std::uniform_real_distribution<double> u(lo, hi);
  for (double& w : g.weights) w = u(rng);
  return g;
}

bool has_reason(const std::vector<Violation>& v, const std::string& reason) {
  return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.reason == reason; });
}

}  // namespace

TEST_CASE("enumeration matches a brute-force oracle") {
  std::mt19937_64 rng(17);
  for (Solid s : {Solid::Tetrahedron, Solid::Cube, Solid::Octahedron, Solid::Dodecahedron}) {
    for (int k = 0; k < 3; ++k) {
      const auto g = random_weights(s, 0.2 * M_PI, 0.9 * M_PI, rng);
      const double bound = s == Solid::Dodecahedron ? 2.5 * M_PI : 4.0 * M_PI;
      const auto o = brute_force(g, bound);
      const auto cycles = simple_cycles(g, bound);
      const auto paths = simple_paths(g, bound);
      CHECK(cycles.size() == o.cycles.size());
      CHECK(paths.size() == o.paths.size());
      CHECK(as_sets(cycles) == o.cycles);
      CHECK(as_sets(paths) == o.paths);
    }
  }
}

TEST_CASE("ideal tetrahedron angles") {
  const auto g = fixtures::uniform_graph(Solid::Tetrahedron, 2 * M_PI / 3);
  const auto c1 = check_C1(g);
  CHECK(c1.pass);
  CHECK(c1.equality_faces == std::vector<int>{0, 1, 2, 3});
  CHECK(c1.inferred_ideal == std::vector<int>{0, 1, 2, 3});
  // K4 has 7 simple cycles; the three 4-cycles sum to 8 pi / 3 and are pruned.
  CHECK(c1.cycles_checked == 4);
  CHECK(check_C2(g).pass);
  const auto k = check_K_gamma(g);
  CHECK(k.member);
  for (auto v : k.vertex_kinds) CHECK(v == VertexKind::Ideal);
  CHECK(k.inferred.size() == 4);
}

TEST_CASE("hyperideal tetrahedron angles") {
  const auto g = fixtures::uniform_graph(Solid::Tetrahedron, 0.8 * M_PI);
  const auto c1 = check_C1(g);
  CHECK(c1.pass);
  CHECK(c1.equality_faces.empty());
  CHECK(check_C2(g).pass);
  const auto k = check_K_gamma(g);
  CHECK(k.member);
  for (auto v : k.vertex_kinds) CHECK(v == VertexKind::Hyperideal);
}

TEST_CASE("a face below 2 pi") {
  auto g = fixtures::uniform_graph(Solid::Tetrahedron, 0.8 * M_PI);
  g.weights[0] = 0.3 * M_PI;
  const auto c1 = check_C1(g);
  CHECK_FALSE(c1.pass);
  REQUIRE(c1.violations.size() == 2);
  for (const auto& v : c1.violations) {
    CHECK(v.sum == doctest::Approx(1.9 * M_PI));
    CHECK(v.face >= 0);
    CHECK(std::find(v.edges.begin(), v.edges.end(), 0) != v.edges.end());
    CHECK(v.nodes.front() == v.nodes.back());
  }
  CHECK_FALSE(check_K_gamma(g).member);
}

TEST_CASE("short paths between nodes of a face") {
  const auto g = fixtures::uniform_graph(Solid::Tetrahedron, 0.4 * M_PI);
  const auto c2 = check_C2(g);
  CHECK_FALSE(c2.pass);
  for (const auto& v : c2.violations) {
    CHECK(v.edges.size() == 2);
    CHECK(v.sum == doctest::Approx(0.8 * M_PI));
  }
}

TEST_CASE("all-ideal input passes C2") {
  for (Solid s : {Solid::Tetrahedron}) {
    const auto g = fixtures::uniform_graph(s, 2 * M_PI / 3);
    CHECK(check_C2(g).pass);
  }
  // Octahedron with all weights pi/2: four per vertex, every vertex ideal.
  auto g = fixtures::uniform_graph(Solid::Octahedron, M_PI / 2);
  CHECK(check_C2(g).pass);
  CHECK(check_K_gamma(g).member);
}

TEST_CASE("cube with weights close to pi") {
  const auto g = fixtures::uniform_graph(Solid::Cube, 0.99 * M_PI);
  const auto k = check_K_gamma(g);
  CHECK(k.member);
}

TEST_CASE("equality band") {
  auto g = fixtures::uniform_graph(Solid::Tetrahedron, 2 * M_PI / 3 - 2e-9);
  SUBCASE("undeclared near-equality is ambiguous") {
    const auto c1 = check_C1(g);
    CHECK_FALSE(c1.pass);
    CHECK(has_reason(c1.violations, "ambiguous near-equality"));
  }
  SUBCASE("declared ideal inside the band") {
    g.vertex_kind.assign(4, VertexKind::Ideal);
    CHECK(check_C1(g).pass);
    CHECK(check_K_gamma(g).inferred.empty());
  }
  SUBCASE("declared hyperideal at equality") {
    auto h = fixtures::uniform_graph(Solid::Tetrahedron, 2 * M_PI / 3);
    h.vertex_kind.assign(4, VertexKind::Hyperideal);
    CHECK(has_reason(check_C1(h).violations, "equality on the face of a hyperideal vertex"));
  }
  SUBCASE("declared ideal above the band") {
    auto h = fixtures::uniform_graph(Solid::Tetrahedron, 0.8 * M_PI);
    h.vertex_kind.assign(4, VertexKind::Unknown);
    h.vertex_kind[1] = VertexKind::Ideal;
    CHECK(has_reason(check_C1(h).violations, "ideal vertex face sums above 2 pi"));
  }
  SUBCASE("tolerance is adjustable") {
    CHECK(has_reason(check_C1(g, 1e-10).violations, "cycle sum below 2 pi"));
  }
}

TEST_CASE("equality on a cycle that is not a face") {
  // Octahedron Gamma: Gamma* is the cube graph; a hexagonal belt of the cube
  // graph sums to 2 pi when its edges carry pi/3.
  auto g = fixtures::uniform_graph(Solid::Octahedron, 0.9 * M_PI);
  const auto cycles = simple_cycles(g, 10 * M_PI);
  const auto inc = [&](int v) {
    std::vector<int> e;
    for (int i = 0; i < static_cast<int>(g.gamma.edges.size()); ++i) {
      if (g.gamma.edges[i].vertex_u == v || g.gamma.edges[i].vertex_v == v) e.push_back(i);
    }
    return e;
  };
  std::set<EdgeSet> faces;
  for (int v = 0; v < g.gamma.num_vertices; ++v) faces.insert(inc(v));
  std::vector<int> belt;
  for (const auto& c : cycles) {
    auto s = c;
    std::sort(s.begin(), s.end());
    if (c.size() == 6 && !faces.count(s)) {
      belt = c;
      break;
    }
  }
  REQUIRE_FALSE(belt.empty());
  for (int e : belt) g.weights[e] = M_PI / 3;
  const auto c1 = check_C1(g);
  CHECK(has_reason(c1.violations, "equality on a cycle that bounds no face"));
}

TEST_CASE("raising one weight keeps a strict pass") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int tried = 0;
  for (Solid s : {Solid::Tetrahedron, Solid::Cube, Solid::Octahedron}) {
    const double lo = s == Solid::Octahedron ? 0.55 * M_PI : 0.7 * M_PI;
    for (int k = 0; k < 20; ++k) {
      auto g = random_weights(s, lo, 0.95 * M_PI, rng);
      const auto before = check_K_gamma(g);
      if (!before.member) continue;
      ++tried;
      const int e = static_cast<int>(u(rng) * g.weights.size()) % static_cast<int>(g.weights.size());
      g.weights[e] += (M_PI - g.weights[e]) * u(rng) * 0.99;
      const auto after = check_K_gamma(g);
      CHECK(after.member);
      CHECK(check_C1(g).equality_faces.empty());
    }
  }
  CHECK(tried > 30);
}

TEST_CASE("relabeling edges leaves membership unchanged") {
  std::mt19937_64 rng(29);
  for (Solid s : {Solid::Tetrahedron, Solid::Cube, Solid::Octahedron}) {
    for (int k = 0; k < 10; ++k) {
      const auto g = random_weights(s, 0.3 * M_PI, 0.95 * M_PI, rng);
      std::vector<int> perm(g.weights.size());
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      WeightedDualGraph h = g;
      for (size_t e = 0; e < perm.size(); ++e) {
        h.gamma.edges[perm[e]] = g.gamma.edges[e];
        h.weights[perm[e]] = g.weights[e];
      }
      CHECK(check_K_gamma(g).member == check_K_gamma(h).member);
      CHECK(check_C1(g).violations.size() == check_C1(h).violations.size());
      CHECK(check_C2(g).violations.size() == check_C2(h).violations.size());
    }
  }
}

TEST_CASE("range and structure") {
  auto g = fixtures::uniform_graph(Solid::Tetrahedron, 0.8 * M_PI);
  g.weights[2] = M_PI;
  auto k = check_K_gamma(g);
  CHECK_FALSE(k.member);
  CHECK(k.violations.front().condition == "range");
  g.weights.pop_back();
  k = check_K_gamma(g);
  CHECK_FALSE(k.member);
}

TEST_CASE("resolved kinds") {
  auto g = fixtures::uniform_graph(Solid::Tetrahedron, 2 * M_PI / 3);
  g.weights[0] += 1e-6;
  const auto kinds = resolved_kinds(g);
  int ideal = 0;
  for (auto k : kinds) ideal += k == VertexKind::Ideal ? 1 : 0;
  CHECK(ideal == 2);
  CHECK(vertex_sum(g, 0) + vertex_sum(g, 1) + vertex_sum(g, 2) + vertex_sum(g, 3) ==
        doctest::Approx(8 * M_PI + 2e-6));
}

TEST_CASE("agreement with the cone metric") {
  SUBCASE("member without witness") {
    const auto r = consistency_with_metric(fixtures::uniform_graph(Solid::Tetrahedron, 0.8 * M_PI));
    CHECK(r.member);
    CHECK_FALSE(r.witness_found);
    CHECK(r.agree);
    CHECK_FALSE(r.relaxed);
  }
  SUBCASE("ideal boundaries are exempt") {
    const auto r = consistency_with_metric(fixtures::uniform_graph(Solid::Tetrahedron, 2 * M_PI / 3));
    CHECK(r.member);
    CHECK(r.exempt_boundaries == 8);
    CHECK(r.agree);
  }
  SUBCASE("non-member with witness") {
    auto g = fixtures::uniform_graph(Solid::Tetrahedron, 0.8 * M_PI);
    g.weights[0] = 0.3 * M_PI;
    const auto r = consistency_with_metric(g);
    CHECK_FALSE(r.member);
    CHECK(r.relaxed);
    CHECK(r.witness_found);
    CHECK(*r.witness_length == doctest::Approx(1.9 * M_PI));
    CHECK(r.agree);
    CHECK_FALSE(r.soundness_failure);
  }
}
