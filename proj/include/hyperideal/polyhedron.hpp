#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hyperideal/minkowski.hpp"

namespace hyperideal {

/// An edge of the cell decomposition: the two faces meeting along it and its
/// two endpoints.
struct Edge {
  int face_a = -1;
  int face_b = -1;
  int vertex_u = -1;
  int vertex_v = -1;
};

/// Cell decomposition of the sphere. Faces and vertices are 0-based ids.
///
/// face_cycles[f] lists the vertices of f in order; vertex_cycles[v] lists the
/// faces around v in the induced order, so that the transpose is again a
/// consistently oriented decomposition.
struct Combinatorics {
  int num_faces = 0;
  int num_vertices = 0;
  std::vector<Edge> edges;
  std::vector<std::vector<int>> face_cycles;
  std::vector<std::vector<int>> vertex_cycles;

  int euler_characteristic() const;
  /// Faces become vertices and vice versa.
  Combinatorics transpose() const;
  /// Index of the edge between faces a and b, if any.
  std::optional<int> edge_between_faces(int a, int b) const;
  std::optional<int> edge_between_vertices(int u, int v) const;
  /// Human-readable invariant violations (empty when consistent).
  std::vector<std::string> problems() const;
};

/// Builds oriented combinatorics from face cycles given as vertex lists.
/// Faces are reoriented when needed so that adjacent faces traverse shared
/// edges in opposite directions. Edges are numbered by their vertex pairs
/// (u, v), u < v, in lexicographic order.
Combinatorics combinatorics_from_faces(const std::vector<std::vector<int>>& faces);

enum class VertexClass { Finite, Ideal, Hyperideal };

std::string to_string(VertexClass c);

/// Convex projective polyhedron given by inward face planes.
struct ProjectivePolyhedron {
  std::vector<HPlane> planes;
  Combinatorics comb;
  /// Timelike: inner = -1, x0 > 0. Lightlike: x0 = 1. Spacelike: inner = +1.
  std::vector<MVector> vertex_coords;
  std::vector<VertexClass> vertex_class;
  /// Sorted incident face ids per vertex.
  std::vector<std::vector<int>> vertex_faces;

  bool has_class(VertexClass c) const;
};

inline constexpr double kIncidenceTol = 1e-8;
inline constexpr double kDedupeTol = 1e-7;

/// Brute-force intersection of the inward half-spaces.
ProjectivePolyhedron from_planes(const std::vector<HPlane>& planes);

/// Builds a polyhedron with prescribed vertex/face incidences instead of
/// discovering them, without enforcing convexity. validate() reports what is
/// wrong with it.
ProjectivePolyhedron from_combinatorics(const std::vector<HPlane>& planes,
                                        const std::vector<std::vector<int>>& vertex_faces);

/// Interior dihedral angle at an edge, arccos(-inner(n_a, n_b)).
double dihedral_angle(const ProjectivePolyhedron& p, int edge);
/// pi minus the dihedral angle.
double exterior_angle(const ProjectivePolyhedron& p, int edge);

/// Interior angle of face `face` at its corner `vertex`; 0 at ideal corners.
double face_corner_angle(const ProjectivePolyhedron& p, int face, int vertex);

/// Hyperbolic area by the angle defect.
double face_area(const ProjectivePolyhedron& p, int face);

struct ValidationItem {
  std::string check;
  std::string item;
  std::string detail;
};

struct ValidationReport {
  bool pass = true;
  std::vector<ValidationItem> failures;
  std::vector<VertexClass> classification;
};

ValidationReport validate(const ProjectivePolyhedron& p);

/// Klein-model coordinates (x1, x2, x3) / x0 of a vertex representative.
std::array<double, 3> klein_coordinates(const MVector& v);

}  // namespace hyperideal
