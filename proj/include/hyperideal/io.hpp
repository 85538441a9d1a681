#pragma once

#include <json.hpp>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperideal/angles.hpp"
#include "hyperideal/conemetric.hpp"
#include "hyperideal/duality.hpp"
#include "hyperideal/polyhedron.hpp"
#include "hyperideal/trunc.hpp"

namespace hyperideal {

using Json = nlohmann::json;

/// Malformed or schema-violating input.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// {"planes": [[n0,n1,n2,n3], ...], "combinatorics": {"vertex_faces": [[...], ...]}}.
/// With the override the incidences are taken as given (from_combinatorics).
struct PolyhedronInput {
  std::vector<HPlane> planes;
  std::optional<std::vector<std::vector<int>>> vertex_faces;
  std::vector<int> truncation_faces;  ///< optional "truncation_faces"
};

PolyhedronInput read_polyhedron(const Json& j);
ProjectivePolyhedron build(const PolyhedronInput& in);

Json planes_to_json(const std::vector<HPlane>& planes);
/// Vertices with class and coordinates, face cycles, edges with angles.
Json polyhedron_to_json(const ProjectivePolyhedron& p);

/// {"faces": [[vertex ids], ...], "weights": {"edge id": theta} or [theta, ...],
///  "vertex_kind": {"vertex id": "ideal" | "hyperideal"}}. Edge ids follow
/// combinatorics_from_faces.
WeightedDualGraph read_graph(const Json& j);
Json graph_to_json(const WeightedDualGraph& g);

Json violation_to_json(const Violation& v);
Json verdict_to_json(const KGammaVerdict& v);
Json complex_to_json(const ConeSphericalMetric& m);
Json dual_to_json(const DualPolyhedron& d);
Json closed_geodesic_to_json(const ClosedGeodesic& c);

/// Klein-model vertices and polygon faces; ideal vertices land on the unit
/// sphere. Hyperideal vertices are rejected.
std::string to_obj(const ProjectivePolyhedron& p);

}  // namespace hyperideal
