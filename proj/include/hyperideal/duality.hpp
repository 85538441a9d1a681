#pragma once

#include <utility>
#include <vector>

#include "hyperideal/conemetric.hpp"
#include "hyperideal/polyhedron.hpp"

namespace hyperideal {

/// Link of a primal vertex: corners are the incident faces in vertex-cycle
/// order, edges[i] joins corners i and i+1.
struct DualPolygon {
  int vertex = -1;
  std::vector<int> corners;
  std::vector<int> edges;
  std::vector<double> sides;
  std::vector<double> angles;
  bool ideal = false;

  double area() const;
};

struct DualPolyhedron {
  std::vector<DSPoint> vertices;  ///< face normals, by face id
  Combinatorics comb;             ///< transpose of the primal one
  std::vector<double> edge_lengths;
  std::vector<DualPolygon> face_polygons;  ///< by primal vertex id
};

/// Throws GeometryError("truncate first") when a vertex is hyperideal.
DualPolyhedron dual(const ProjectivePolyhedron& p);

/// How the points and seams of a dual metric are named.
struct DualLabels {
  std::vector<std::pair<PointKind, int>> face_label;  ///< point of each face
  std::vector<int> vertex_label;                      ///< pole of each ideal vertex
  std::vector<int> edge_mark;                         ///< seam mark, or -1
};

/// Faces are F points labeled by id, ideal vertices poles labeled by id,
/// seams marked by edge id.
DualLabels default_labels(const ProjectivePolyhedron& p);

/// Dual polygons glued along common edges. Polygons at finite vertices are
/// fanned from their first corner; the polygon at an ideal vertex is a
/// hemisphere split into doubly-right triangles around a pole. Face points
/// come first, in face order.
ConeSphericalMetric dual_metric(const ProjectivePolyhedron& p);
ConeSphericalMetric dual_metric(const ProjectivePolyhedron& p, const DualLabels& labels);

struct ConeAngleEntry {
  int face = -1;
  double cone_angle = 0.0;
  double area = 0.0;
};

/// Cone angle at each dual vertex next to the area of its face. Compact only.
std::vector<ConeAngleEntry> cone_angle_report(const ProjectivePolyhedron& p);

}  // namespace hyperideal
