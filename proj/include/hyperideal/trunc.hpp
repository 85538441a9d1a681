#pragma once

#include <vector>

#include "hyperideal/angles.hpp"
#include "hyperideal/duality.hpp"
#include "hyperideal/polyhedron.hpp"

namespace hyperideal {

/// Plane with normal -x: its half-space leaves x out.
HPlane polar_plane(const DSPoint& x);
/// Same for an unnormalized vector; throws unless it is spacelike.
HPlane polar_plane(const MVector& x);

struct TruncationResult {
  ProjectivePolyhedron poly;
  int original_faces = 0;
  /// Face original_faces + j replaces vertex truncated_vertices[j].
  std::vector<int> truncated_vertices;
  /// Per vertex of poly: the vertex of the input it is, or -1 when new.
  std::vector<int> vertex_origin;
  /// Per edge of poly: the input edge it lies on, or -1 on a truncation face.
  std::vector<int> edge_origin;
};

inline constexpr double kPolarDisjointTol = 1e-9;
inline constexpr double kPerpendicularTol = 1e-8;

/// Cuts every strictly hyperideal vertex with its polar plane. Checks that
/// the polars are pairwise ultraparallel, that truncation faces meet their
/// neighbors at right angles, and that each truncation face follows the
/// face cycle of its vertex.
TruncationResult truncate(const ProjectivePolyhedron& p);

/// Removes the given faces and recovers their vertices as poles. Throws
/// GeometryError("not a truncation: ...") when the faces do not qualify.
ProjectivePolyhedron untruncate(const ProjectivePolyhedron& p, const std::vector<int>& faces);

/// Exterior dihedral angles of a polyhedron with only ideal and hyperideal
/// vertices, by edge id.
std::vector<double> hyperideal_angles(const ProjectivePolyhedron& p);

/// Gamma, the exterior angles and the vertex kinds of such a polyhedron.
WeightedDualGraph angle_structure(const ProjectivePolyhedron& p);

/// Labels that name the dual metric of a truncation after the input: faces
/// keep their ids, truncation faces become apexes of their vertices, ideal
/// vertices keep their ids and only input edges carry marks.
DualLabels truncation_labels(const TruncationResult& t);

}  // namespace hyperideal
