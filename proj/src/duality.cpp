#include "hyperideal/duality.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace hyperideal {

namespace {

constexpr double kCornerCrossCheck = 1e-6;

DSPoint normal_point(const ProjectivePolyhedron& p, int f) {
  return DSPoint::from_spacelike(p.planes[f].normal());
}

void require_no_hyperideal(const ProjectivePolyhedron& p) {
  if (p.has_class(VertexClass::Hyperideal)) throw GeometryError("truncate first");
}

}  // namespace

double DualPolygon::area() const {
  double s = 0.0;
  for (double a : angles) s += a;
  return s - (static_cast<double>(angles.size()) - 2.0) * M_PI;
}

DualPolyhedron dual(const ProjectivePolyhedron& p) {
  require_no_hyperideal(p);
  DualPolyhedron d;
  const int nf = static_cast<int>(p.planes.size());
  for (int f = 0; f < nf; ++f) d.vertices.push_back(normal_point(p, f));
  d.comb = p.comb.transpose();
  for (int e = 0; e < static_cast<int>(p.comb.edges.size()); ++e) {
    const Edge& ed = p.comb.edges[e];
    d.edge_lengths.push_back(desitter_distance(d.vertices[ed.face_a], d.vertices[ed.face_b]));
  }
  for (int v = 0; v < p.comb.num_vertices; ++v) {
    DualPolygon poly;
    poly.vertex = v;
    poly.corners = p.comb.vertex_cycles[v];
    poly.ideal = p.vertex_class[v] == VertexClass::Ideal;
    const int k = static_cast<int>(poly.corners.size());
    for (int i = 0; i < k; ++i) {
      const auto e = p.comb.edge_between_faces(poly.corners[i], poly.corners[(i + 1) % k]);
      if (!e) throw GeometryError("vertex cycle skips an edge at vertex " + std::to_string(v));
      poly.edges.push_back(*e);
      poly.sides.push_back(d.edge_lengths[*e]);
    }
    for (int i = 0; i < k; ++i) {
      const int f = poly.corners[i];
      const double expected = M_PI - face_corner_angle(p, f, v);
      if (poly.ideal) {
        poly.angles.push_back(expected);
        continue;
      }
      // Corner i of the triangle (f_{i-1}, f_i, f_{i+1}).
      const int prev = poly.corners[(i + k - 1) % k];
      const int next = poly.corners[(i + 1) % k];
      const double diag = desitter_distance(d.vertices[prev], d.vertices[next]);
      const double a = SphericalTriangle::from_sides(diag, poly.sides[i], poly.sides[(i + k - 1) % k],
                                                     {f, next, prev})
                           .angle[0];
      if (std::abs(a - expected) > kCornerCrossCheck) {
        throw std::logic_error("dual polygon corner disagrees with face angle at vertex " +
                               std::to_string(v));
      }
      poly.angles.push_back(a);
    }
    d.face_polygons.push_back(std::move(poly));
  }
  return d;
}

DualLabels default_labels(const ProjectivePolyhedron& p) {
  DualLabels l;
  for (int f = 0; f < static_cast<int>(p.planes.size()); ++f) l.face_label.push_back({PointKind::F, f});
  for (int v = 0; v < p.comb.num_vertices; ++v) l.vertex_label.push_back(v);
  for (int e = 0; e < static_cast<int>(p.comb.edges.size()); ++e) l.edge_mark.push_back(e);
  return l;
}

ConeSphericalMetric dual_metric(const ProjectivePolyhedron& p) {
  return dual_metric(p, default_labels(p));
}

ConeSphericalMetric dual_metric(const ProjectivePolyhedron& p, const DualLabels& labels) {
  const DualPolyhedron d = dual(p);
  const int nf = static_cast<int>(p.planes.size());
  ConeSphericalMetric m;
  for (int f = 0; f < nf; ++f) m.points.push_back({labels.face_label.at(f).first, labels.face_label[f].second});

  // side_of[(v, i)]: the triangle side carrying side i of the polygon at v.
  std::map<std::pair<int, int>, SideRef> side_of;
  for (const auto& poly : d.face_polygons) {
    const auto& c = poly.corners;
    const int k = static_cast<int>(c.size());
    const int first = static_cast<int>(m.triangles.size());
    if (poly.ideal) {
      const int pole = static_cast<int>(m.points.size());
      m.points.push_back({PointKind::Pole, labels.vertex_label.at(poly.vertex)});
      for (int i = 0; i < k; ++i) {
        m.triangles.push_back(SphericalTriangle::doubly_right(poly.sides[i], {pole, c[i], c[(i + 1) % k]}));
        side_of[{poly.vertex, i}] = {first + i, 0};
      }
      for (int i = 0; i < k; ++i) m.gluings.push_back({{first + i, 1}, {first + (i + 1) % k, 2}, -1});
      continue;
    }
    // Fan from corner 0: triangle j = (c0, c_{j+1}, c_{j+2}).
    auto dist = [&](int a, int b) { return desitter_distance(d.vertices[a], d.vertices[b]); };
    for (int j = 0; j + 2 < k; ++j) {
      const int a = c[j + 1], b = c[j + 2];
      m.triangles.push_back(
          SphericalTriangle::from_sides(poly.sides[j + 1], dist(b, c[0]), dist(c[0], a), {c[0], a, b}));
    }
    side_of[{poly.vertex, 0}] = {first, 2};
    for (int i = 1; i + 1 < k; ++i) side_of[{poly.vertex, i}] = {first + i - 1, 0};
    side_of[{poly.vertex, k - 1}] = {first + k - 3, 1};
    for (int j = 0; j + 3 < k; ++j) m.gluings.push_back({{first + j, 1}, {first + j + 1, 2}, -1});
  }

  std::map<std::pair<int, int>, int> slot;  // (vertex, edge) -> polygon side
  for (const auto& poly : d.face_polygons) {
    for (int i = 0; i < static_cast<int>(poly.edges.size()); ++i) slot[{poly.vertex, poly.edges[i]}] = i;
  }
  for (int e = 0; e < static_cast<int>(p.comb.edges.size()); ++e) {
    const Edge& ed = p.comb.edges[e];
    const SideRef a = side_of.at({ed.vertex_u, slot.at({ed.vertex_u, e})});
    const SideRef b = side_of.at({ed.vertex_v, slot.at({ed.vertex_v, e})});
    m.gluings.push_back({a, b, labels.edge_mark.at(e)});
  }
  m.finalize();
  return m;
}

std::vector<ConeAngleEntry> cone_angle_report(const ProjectivePolyhedron& p) {
  if (p.has_class(VertexClass::Ideal) || p.has_class(VertexClass::Hyperideal)) {
    throw GeometryError("cone angle report needs a compact polyhedron");
  }
  const ConeSphericalMetric m = dual_metric(p);
  std::vector<ConeAngleEntry> out;
  for (int f = 0; f < static_cast<int>(p.planes.size()); ++f) {
    out.push_back({f, m.points[f].angle, face_area(p, f)});
  }
  return out;
}

}  // namespace hyperideal
