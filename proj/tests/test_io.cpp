#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "hyperideal/io.hpp"

using namespace hyperideal;
using fixtures::Solid;

TEST_CASE("angle files round-trip with the same edge ids") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 6; ++i) {
    const auto p = from_planes(fixtures::random_hyperideal(rng, i));
    const auto g = angle_structure(p);
    const auto back = read_graph(Json::parse(graph_to_json(g).dump()));
    REQUIRE(back.gamma.edges.size() == g.gamma.edges.size());
    for (std::size_t e = 0; e < g.gamma.edges.size(); ++e) {
      CHECK(back.gamma.edges[e].vertex_u == g.gamma.edges[e].vertex_u);
      CHECK(back.gamma.edges[e].vertex_v == g.gamma.edges[e].vertex_v);
      CHECK(back.weights[e] == g.weights[e]);
    }
    CHECK(back.gamma.vertex_cycles == g.gamma.vertex_cycles);
    CHECK(back.vertex_kind == g.vertex_kind);
  }
}

TEST_CASE("polyhedron files round-trip") {
  const auto planes = fixtures::regular(Solid::Cube, 0.4);
  Json j;
  j["planes"] = planes_to_json(planes);
  const auto p = build(read_polyhedron(Json::parse(j.dump())));
  for (std::size_t f = 0; f < planes.size(); ++f) CHECK(max_abs(p.planes[f].normal() - planes[f].normal()) == 0.0);
}

TEST_CASE("malformed input") {
  CHECK_THROWS_AS(read_polyhedron(Json::parse("[]")), InputError);
  CHECK_THROWS_WITH(read_polyhedron(Json::parse(R"({"planes": [[1, 0, 0]]})")), "planes[0]: expected 4 numbers");
  CHECK_THROWS_WITH(read_polyhedron(Json::parse(R"({"planes": [[1, 0, 0, 0]]})")),
                    "planes[0]: normal is not spacelike");
  CHECK_THROWS_WITH(read_polyhedron(Json::parse(R"({"planes": [["a", 0, 0, 1]]})")), "planes[0]: expected a number");
  const std::string faces = R"("faces": [[0, 1, 2], [0, 3, 1], [0, 2, 3], [1, 3, 2]])";
  CHECK_THROWS_WITH(read_graph(Json::parse("{" + faces + R"(, "weights": [1, 1]})")), "weights: expected 6 entries");
  CHECK_THROWS_WITH(read_graph(Json::parse("{" + faces + R"(, "weights": {"9": 1}})")),
                    "weights: unknown edge id \"9\"");
  CHECK_THROWS_WITH(read_graph(Json::parse("{" + faces + R"(, "weights": {"0": 1}})")), "weights: edge 1 missing");
  CHECK_THROWS_WITH(read_graph(Json::parse("{" + faces + R"(, "weights": [1,1,1,1,1,1], "vertex_kind": {"0": "x"}})")),
                    "vertex_kind.0: expected \"ideal\" or \"hyperideal\"");
}

TEST_CASE("OBJ export puts ideal vertices on the unit sphere") {
  const auto obj = to_obj(from_planes(fixtures::ideal_tetrahedron()));
  std::istringstream in(obj);
  std::string tag;
  int verts = 0, faces = 0;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream l(line);
    l >> tag;
    if (tag == "v") {
      double x, y, z;
      l >> x >> y >> z;
      CHECK(std::abs(x * x + y * y + z * z - 1.0) < 1e-12);
      ++verts;
    } else if (tag == "f") {
      ++faces;
    }
  }
  CHECK(verts == 4);
  CHECK(faces == 4);
  CHECK_THROWS_WITH(to_obj(from_planes(fixtures::regular(Solid::Tetrahedron, 0.45))), "truncate first");
}
