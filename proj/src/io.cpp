#include "hyperideal/io.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

namespace hyperideal {

namespace {

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw InputError(where + ": expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw InputError(where + ": not finite");
  return x;
}

int integer(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) throw InputError(where + ": expected an integer");
  return j.get<int>();
}

std::vector<int> int_list(const Json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array");
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(integer(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

Json vec4(const MVector& v) { return Json::array({v.x0, v.x1, v.x2, v.x3}); }

}  // namespace

PolyhedronInput read_polyhedron(const Json& j) {
  if (!j.is_object()) throw InputError("polyhedron: expected an object");
  if (!j.contains("planes")) throw InputError("polyhedron: missing \"planes\"");
  const Json& pl = j["planes"];
  if (!pl.is_array()) throw InputError("planes: expected an array");
  PolyhedronInput in;
  for (std::size_t i = 0; i < pl.size(); ++i) {
    const std::string where = "planes[" + std::to_string(i) + "]";
    if (!pl[i].is_array() || pl[i].size() != 4) throw InputError(where + ": expected 4 numbers");
    const MVector n(number(pl[i][0], where), number(pl[i][1], where), number(pl[i][2], where),
                    number(pl[i][3], where));
    if (!(inner(n, n) > 0.0)) throw InputError(where + ": normal is not spacelike");
    in.planes.push_back(std::abs(inner(n, n) - 1.0) <= 1e-12 ? HPlane(n) : HPlane::from_spacelike(n));
  }
  if (j.contains("combinatorics")) {
    const Json& c = j["combinatorics"];
    if (!c.is_object() || !c.contains("vertex_faces") || !c["vertex_faces"].is_array()) {
      throw InputError("combinatorics: expected {\"vertex_faces\": [[...], ...]}");
    }
    std::vector<std::vector<int>> vf;
    for (std::size_t i = 0; i < c["vertex_faces"].size(); ++i) {
      vf.push_back(int_list(c["vertex_faces"][i], "vertex_faces[" + std::to_string(i) + "]"));
    }
    in.vertex_faces = vf;
  }
  if (j.contains("truncation_faces")) in.truncation_faces = int_list(j["truncation_faces"], "truncation_faces");
  return in;
}

ProjectivePolyhedron build(const PolyhedronInput& in) {
  if (in.vertex_faces) return from_combinatorics(in.planes, *in.vertex_faces);
  return from_planes(in.planes);
}

Json planes_to_json(const std::vector<HPlane>& planes) {
  Json out = Json::array();
  for (const auto& p : planes) out.push_back(vec4(p.normal()));
  return out;
}

Json polyhedron_to_json(const ProjectivePolyhedron& p) {
  Json j;
  j["planes"] = planes_to_json(p.planes);
  Json verts = Json::array();
  for (int v = 0; v < static_cast<int>(p.vertex_coords.size()); ++v) {
    verts.push_back({{"id", v},
                     {"class", to_string(p.vertex_class[v])},
                     {"coords", vec4(p.vertex_coords[v])},
                     {"faces", p.vertex_faces[v]}});
  }
  j["vertices"] = verts;
  j["faces"] = p.comb.face_cycles;
  Json edges = Json::array();
  for (int e = 0; e < static_cast<int>(p.comb.edges.size()); ++e) {
    const Edge& ed = p.comb.edges[e];
    Json item = {{"id", e}, {"faces", {ed.face_a, ed.face_b}}, {"vertices", {ed.vertex_u, ed.vertex_v}}};
    try {
      item["dihedral"] = dihedral_angle(p, e);
      item["exterior"] = exterior_angle(p, e);
    } catch (const GeometryError&) {
      item["dihedral"] = nullptr;
      item["exterior"] = nullptr;
    }
    edges.push_back(item);
  }
  j["edges"] = edges;
  j["euler_characteristic"] = p.comb.euler_characteristic();
  return j;
}

WeightedDualGraph read_graph(const Json& j) {
  if (!j.is_object()) throw InputError("angles: expected an object");
  if (!j.contains("faces") || !j["faces"].is_array()) throw InputError("angles: missing \"faces\"");
  std::vector<std::vector<int>> faces;
  for (std::size_t i = 0; i < j["faces"].size(); ++i) {
    faces.push_back(int_list(j["faces"][i], "faces[" + std::to_string(i) + "]"));
  }
  WeightedDualGraph g;
  try {
    g.gamma = combinatorics_from_faces(faces);
  } catch (const GeometryError& e) {
    throw InputError(std::string("faces: ") + e.what());
  }
  const int ne = static_cast<int>(g.gamma.edges.size());
  if (!j.contains("weights")) throw InputError("angles: missing \"weights\"");
  const Json& w = j["weights"];
  g.weights.assign(ne, std::nan(""));
  if (w.is_array()) {
    if (static_cast<int>(w.size()) != ne) throw InputError("weights: expected " + std::to_string(ne) + " entries");
    for (int e = 0; e < ne; ++e) g.weights[e] = number(w[e], "weights[" + std::to_string(e) + "]");
  } else if (w.is_object()) {
    for (const auto& [key, val] : w.items()) {
      int e = -1;
      try {
        std::size_t used = 0;
        e = std::stoi(key, &used);
        if (used != key.size()) e = -1;
      } catch (const std::exception&) {
        e = -1;
      }
      if (e < 0 || e >= ne) throw InputError("weights: unknown edge id \"" + key + "\"");
      g.weights[e] = number(val, "weights." + key);
    }
    for (int e = 0; e < ne; ++e) {
      if (std::isnan(g.weights[e])) throw InputError("weights: edge " + std::to_string(e) + " missing");
    }
  } else {
    throw InputError("weights: expected an object or an array");
  }
  g.vertex_kind.assign(g.gamma.num_vertices, VertexKind::Unknown);
  if (j.contains("vertex_kind")) {
    const Json& k = j["vertex_kind"];
    if (!k.is_object()) throw InputError("vertex_kind: expected an object");
    for (const auto& [key, val] : k.items()) {
      int v = -1;
      try {
        v = std::stoi(key);
      } catch (const std::exception&) {
        v = -1;
      }
      if (v < 0 || v >= g.gamma.num_vertices) throw InputError("vertex_kind: unknown vertex \"" + key + "\"");
      const std::string s = val.is_string() ? val.get<std::string>() : "";
      if (s == "ideal") {
        g.vertex_kind[v] = VertexKind::Ideal;
      } else if (s == "hyperideal") {
        g.vertex_kind[v] = VertexKind::Hyperideal;
      } else if (s != "unknown") {
        throw InputError("vertex_kind." + key + ": expected \"ideal\" or \"hyperideal\"");
      }
    }
  }
  return g;
}

Json graph_to_json(const WeightedDualGraph& g) {
  Json j;
  j["faces"] = g.gamma.face_cycles;
  Json w = Json::object();
  for (int e = 0; e < static_cast<int>(g.weights.size()); ++e) w[std::to_string(e)] = g.weights[e];
  j["weights"] = w;
  Json k = Json::object();
  for (int v = 0; v < static_cast<int>(g.vertex_kind.size()); ++v) {
    if (g.vertex_kind[v] != VertexKind::Unknown) k[std::to_string(v)] = to_string(g.vertex_kind[v]);
  }
  j["vertex_kind"] = k;
  return j;
}

Json violation_to_json(const Violation& v) {
  return {{"condition", v.condition}, {"reason", v.reason}, {"edges", v.edges},
          {"nodes", v.nodes},         {"sum", v.sum},       {"face", v.face}};
}

Json verdict_to_json(const KGammaVerdict& v) {
  Json j;
  j["member"] = v.member;
  Json viol = Json::array();
  for (const auto& x : v.violations) viol.push_back(violation_to_json(x));
  j["violations"] = viol;
  Json kinds = Json::array();
  for (auto k : v.vertex_kinds) kinds.push_back(to_string(k));
  j["vertex_kinds"] = kinds;
  j["inferred"] = v.inferred;
  return j;
}

Json complex_to_json(const ConeSphericalMetric& m) {
  Json j;
  Json pts = Json::array();
  for (int i = 0; i < static_cast<int>(m.points.size()); ++i) {
    const auto& p = m.points[i];
    pts.push_back({{"id", i}, {"kind", to_string(p.kind)}, {"label", p.label}, {"angle", p.angle},
                   {"boundary", p.boundary}});
  }
  j["points"] = pts;
  Json tris = Json::array();
  for (const auto& t : m.triangles) tris.push_back({{"corners", t.corner}, {"sides", t.side}, {"angles", t.angle}});
  j["triangles"] = tris;
  Json gl = Json::array();
  for (const auto& g : m.gluings) {
    gl.push_back({{"a", {g.a.triangle, g.a.side}}, {"b", {g.b.triangle, g.b.side}}, {"mark", g.mark}});
  }
  j["gluings"] = gl;
  j["area"] = m.total_area();
  j["euler_characteristic"] = m.euler_characteristic();
  j["gauss_bonnet_residual"] = m.gauss_bonnet_residual();
  j["closed"] = m.closed();
  return j;
}

Json dual_to_json(const DualPolyhedron& d) {
  Json j;
  Json verts = Json::array();
  for (const auto& v : d.vertices) verts.push_back(vec4(v.v()));
  j["vertices"] = verts;
  j["faces"] = d.comb.face_cycles;
  j["edge_lengths"] = d.edge_lengths;
  Json polys = Json::array();
  for (const auto& p : d.face_polygons) {
    polys.push_back({{"vertex", p.vertex}, {"corners", p.corners}, {"edges", p.edges}, {"sides", p.sides},
                     {"angles", p.angles}, {"ideal", p.ideal}, {"area", p.area()}});
  }
  j["polygons"] = polys;
  return j;
}

Json closed_geodesic_to_json(const ClosedGeodesic& c) {
  Json j;
  j["length"] = c.length;
  j["hemisphere_boundary"] = c.hemisphere_boundary;
  j["link_point"] = c.link_point;
  Json legs = Json::array();
  for (const auto& l : c.legs) {
    Json leg = {{"from", l.from}, {"to", l.to}, {"length", l.length}, {"out_dir", l.out_dir},
                {"in_dir", l.in_dir}, {"mark", l.mark}};
    leg["along"] = l.along ? Json::array({l.along->triangle, l.along->side}) : Json(nullptr);
    legs.push_back(leg);
  }
  j["legs"] = legs;
  if (c.smooth) {
    j["smooth"] = {{"triangle", c.smooth->triangle}, {"side", c.smooth->side},
                   {"fraction", c.smooth->fraction}, {"angle", c.smooth->angle}};
  } else {
    j["smooth"] = nullptr;
  }
  return j;
}

std::string to_obj(const ProjectivePolyhedron& p) {
  if (p.has_class(VertexClass::Hyperideal)) throw GeometryError("truncate first");
  std::ostringstream out;
  out << std::setprecision(17);
  out << "# " << p.comb.num_vertices << " vertices, " << p.comb.num_faces << " faces, Klein model\n";
  for (int v = 0; v < p.comb.num_vertices; ++v) {
    const auto k = klein_coordinates(p.vertex_coords[v]);
    out << "v " << k[0] << ' ' << k[1] << ' ' << k[2] << '\n';
  }
  for (const auto& c : p.comb.face_cycles) {
    out << 'f';
    for (int v : c) out << ' ' << v + 1;
    out << '\n';
  }
  return out.str();
}

}  // namespace hyperideal
