#include "hyperideal/trunc.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace hyperideal {

namespace {

// Neighbors of face f across its sides, following its vertex cycle.
std::vector<int> neighbor_cycle(const ProjectivePolyhedron& p, int f) {
  const auto& c = p.comb.face_cycles[f];
  std::vector<int> out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto e = p.comb.edge_between_vertices(c[i], c[(i + 1) % c.size()]);
    if (!e) throw std::logic_error("face cycle without an edge");
    const Edge& ed = p.comb.edges[*e];
    out.push_back(ed.face_a == f ? ed.face_b : ed.face_a);
  }
  return out;
}

bool same_cycle(const std::vector<int>& a, std::vector<int> b) {
  if (a.size() != b.size()) return false;
  for (std::size_t r = 0; r < b.size(); ++r) {
    if (a == b) return true;
    std::rotate(b.begin(), b.begin() + 1, b.end());
  }
  return false;
}

}  // namespace

HPlane polar_plane(const DSPoint& x) { return HPlane(-x.v()); }

HPlane polar_plane(const MVector& x) {
  if (classify(x) != CausalClass::Spacelike) throw GeometryError("polar plane needs a spacelike point");
  return polar_plane(DSPoint::from_spacelike(x));
}

TruncationResult truncate(const ProjectivePolyhedron& p) {
  const auto report = validate(p);
  if (!report.pass) {
    const auto& f = report.failures.front();
    throw GeometryError("invalid hyperideal polyhedron: " + f.check + " " + f.item + " " + f.detail);
  }
  TruncationResult t;
  t.original_faces = static_cast<int>(p.planes.size());
  std::vector<HPlane> planes = p.planes;
  for (int v = 0; v < p.comb.num_vertices; ++v) {
    if (p.vertex_class[v] != VertexClass::Hyperideal) continue;
    t.truncated_vertices.push_back(v);
    planes.push_back(polar_plane(p.vertex_coords[v]));
  }
  const int n = t.original_faces;
  const int k = static_cast<int>(t.truncated_vertices.size());
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      const double c = inner(planes[n + i].normal(), planes[n + j].normal());
      if (!(c < -(1.0 - kPolarDisjointTol))) {
        throw GeometryError("polar planes of vertices " + std::to_string(t.truncated_vertices[i]) + " and " +
                            std::to_string(t.truncated_vertices[j]) + " intersect");
      }
    }
  }

  t.poly = from_planes(planes);
  const ProjectivePolyhedron& q = t.poly;
  if (q.has_class(VertexClass::Hyperideal)) throw GeometryError("truncation left a hyperideal vertex");

  for (int j = 0; j < k; ++j) {
    const int face = n + j;
    const MVector& u = q.planes[face].normal();
    for (int g : neighbor_cycle(q, face)) {
      if (std::abs(inner(u, q.planes[g].normal())) > kPerpendicularTol) {
        throw GeometryError("truncation face " + std::to_string(face) + " is not perpendicular to face " +
                            std::to_string(g));
      }
    }
    auto around = neighbor_cycle(q, face);
    std::reverse(around.begin(), around.end());
    if (!same_cycle(p.comb.vertex_cycles[t.truncated_vertices[j]], around)) {
      throw GeometryError("truncation face " + std::to_string(face) +
                          " does not follow the face cycle of its vertex");
    }
  }

  for (int w = 0; w < q.comb.num_vertices; ++w) {
    const auto& faces = q.vertex_faces[w];
    int origin = -1;
    if (faces.back() < n) {
      const auto it = std::find(p.vertex_faces.begin(), p.vertex_faces.end(), faces);
      if (it == p.vertex_faces.end()) throw std::logic_error("surviving vertex not found");
      origin = static_cast<int>(it - p.vertex_faces.begin());
    }
    t.vertex_origin.push_back(origin);
  }
  for (const Edge& e : q.comb.edges) {
    int origin = -1;
    if (e.face_b < n) {
      const auto o = p.comb.edge_between_faces(e.face_a, e.face_b);
      if (!o) throw std::logic_error("surviving edge not found");
      origin = *o;
    }
    t.edge_origin.push_back(origin);
  }
  return t;
}

ProjectivePolyhedron untruncate(const ProjectivePolyhedron& p, const std::vector<int>& faces) {
  auto fail = [](const std::string& why) -> void { throw GeometryError("not a truncation: " + why); };
  const int n = static_cast<int>(p.planes.size());
  if (faces.empty()) fail("no faces given");
  std::set<int> cut;
  for (int f : faces) {
    if (f < 0 || f >= n) fail("face id out of range");
    if (!cut.insert(f).second) fail("face " + std::to_string(f) + " listed twice");
  }
  if (p.has_class(VertexClass::Hyperideal)) fail("hyperideal vertex present");
  for (int a : cut) {
    for (int b : cut) {
      if (a < b && p.comb.edge_between_faces(a, b)) {
        fail("faces " + std::to_string(a) + " and " + std::to_string(b) + " are adjacent");
      }
    }
  }
  for (int f : cut) {
    for (int g : neighbor_cycle(p, f)) {
      if (std::abs(inner(p.planes[f].normal(), p.planes[g].normal())) > kPerpendicularTol) {
        fail("face " + std::to_string(g) + " is not perpendicular to face " + std::to_string(f));
      }
    }
  }

  for (int v = 0; v < p.comb.num_vertices; ++v) {
    if (p.vertex_class[v] != VertexClass::Finite) continue;
    const auto& vf = p.vertex_faces[v];
    if (std::none_of(vf.begin(), vf.end(), [&](int f) { return cut.count(f) > 0; })) {
      fail("finite vertex " + std::to_string(v) + " is on none of the faces");
    }
  }
  std::vector<HPlane> kept;
  for (int f = 0; f < n; ++f) {
    if (!cut.count(f)) kept.push_back(p.planes[f]);
  }
  ProjectivePolyhedron q;
  try {
    q = from_planes(kept);
  } catch (const GeometryError& e) {
    fail(e.what());
  }
  int hyper = 0;
  for (auto c : q.vertex_class) hyper += c == VertexClass::Hyperideal;
  if (hyper != static_cast<int>(cut.size())) fail("wrong number of recovered vertices");
  for (int f : cut) {
    const MVector pole = -p.planes[f].normal() / std::sqrt(inner(p.planes[f].normal(), p.planes[f].normal()));
    bool found = false;
    for (int v = 0; v < q.comb.num_vertices && !found; ++v) {
      found = q.vertex_class[v] == VertexClass::Hyperideal && max_abs(q.vertex_coords[v] - pole) < 1e-7;
    }
    if (!found) fail("face " + std::to_string(f) + " does not close up at its pole");
  }
  return q;
}

std::vector<double> hyperideal_angles(const ProjectivePolyhedron& p) {
  for (int v = 0; v < p.comb.num_vertices; ++v) {
    if (p.vertex_class[v] == VertexClass::Finite) {
      throw GeometryError("finite vertex " + std::to_string(v) + ": not a hyperideal polyhedron");
    }
  }
  std::vector<double> out;
  for (int e = 0; e < static_cast<int>(p.comb.edges.size()); ++e) out.push_back(exterior_angle(p, e));
  return out;
}

WeightedDualGraph angle_structure(const ProjectivePolyhedron& p) {
  WeightedDualGraph g;
  g.gamma = p.comb;
  g.weights = hyperideal_angles(p);
  for (auto c : p.vertex_class) {
    g.vertex_kind.push_back(c == VertexClass::Ideal ? VertexKind::Ideal : VertexKind::Hyperideal);
  }
  return g;
}

DualLabels truncation_labels(const TruncationResult& t) {
  DualLabels l;
  const int n = t.original_faces;
  for (int f = 0; f < static_cast<int>(t.poly.planes.size()); ++f) {
    if (f < n) {
      l.face_label.push_back({PointKind::F, f});
    } else {
      l.face_label.push_back({PointKind::H, t.truncated_vertices[f - n]});
    }
  }
  l.vertex_label = t.vertex_origin;
  l.edge_mark = t.edge_origin;
  return l;
}

}  // namespace hyperideal
