#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "hyperideal/angles.hpp"

namespace hyperideal {

using Vec3 = Eigen::Vector3d;

/// f: dual vertex of a face. h: apex of a (nega-)hemisphere, one per
/// hyperideal vertex or truncation face. pole: regular center of the round
/// hemisphere at an ideal vertex.
enum class PointKind { F, H, Pole };

std::string to_string(PointKind k);

struct ConePoint {
  PointKind kind = PointKind::F;
  int label = -1;
  double angle = 0.0;     ///< filled by finalize()
  bool boundary = false;  ///< lies on the boundary of a fragment
};

/// Spherical triangle with corners corner[i]; side[i] is opposite corner i
/// and runs from corner i+1 to corner i+2.
struct SphericalTriangle {
  std::array<double, 3> side{};
  std::array<double, 3> angle{};
  std::array<int, 3> corner{};

  /// Angles from the three sides by the half-angle formulas.
  static SphericalTriangle from_sides(double a, double b, double c, std::array<int, 3> corners);
  /// Legs pi/2 at corners 1 and 2; apex angle and base both theta.
  static SphericalTriangle doubly_right(double theta, std::array<int, 3> corners);

  double area() const { return angle[0] + angle[1] + angle[2] - M_PI; }
  /// max |cos a - cos b cos c - sin b sin c cos A| over the three rotations.
  double law_of_cosines_residual() const;
};

struct SideRef {
  int triangle = -1;
  int side = -1;
  friend bool operator==(const SideRef&, const SideRef&) = default;
  friend auto operator<=>(const SideRef&, const SideRef&) = default;
};

/// Identification of two sides with opposite directions. mark is the Gamma*
/// edge id carried by the seam, or -1.
struct Gluing {
  SideRef a;
  SideRef b;
  int mark = -1;
};

/// A corner of a triangle at a point, with the unrolled angle at which its
/// wedge starts in the point's angular coordinate.
struct CornerRef {
  int triangle = -1;
  int corner = -1;
  double start = 0.0;
};

/// Surface of curvature +1 glued from spherical triangles.
class ConeSphericalMetric {
 public:
  std::vector<SphericalTriangle> triangles;
  std::vector<Gluing> gluings;
  std::vector<ConePoint> points;

  /// Checks gluings and builds adjacency, cone angles, corner orderings and
  /// local embeddings. Must be called after editing the public fields.
  void finalize();

  std::optional<SideRef> neighbor(SideRef s) const;
  int gluing_index(SideRef s) const;
  /// Representative of a side up to gluing.
  SideRef canonical(SideRef s) const;
  bool closed() const { return closed_; }
  int euler_characteristic() const;
  double total_area() const;
  /// area + sum(2 pi - angle) over interior points + sum(pi - angle) over
  /// boundary points - 2 pi chi.
  double gauss_bonnet_residual() const;

  /// Corner positions on the unit sphere: corner 0 at the north pole,
  /// corner 1 in the xz-plane, corner 2 with positive y.
  const std::array<Vec3, 3>& embedding(int t) const { return embed_[t]; }
  /// Corners at a point in counterclockwise order.
  const std::vector<CornerRef>& corners_at(int point) const { return corners_[point]; }
  /// Rotation taking triangle t's embedding onto the neighbor's across side s.
  const Eigen::Matrix3d& transition(SideRef s) const { return trans_[s.triangle][s.side]; }
  /// Unit normal of side s pointing into its triangle.
  const Vec3& side_normal(SideRef s) const { return normal_[s.triangle][s.side]; }
  /// Angular coordinate at which corner c of triangle t starts.
  double corner_start(int t, int c) const { return start_[t][c]; }
  int point_of(int t, int c) const { return triangles[t].corner[c]; }

 private:
  std::vector<std::array<int, 3>> glue_of_;
  std::vector<std::array<Vec3, 3>> embed_;
  std::vector<std::array<Vec3, 3>> normal_;
  std::vector<std::array<Eigen::Matrix3d, 3>> trans_;
  std::vector<std::array<double, 3>> start_;
  std::vector<std::vector<CornerRef>> corners_;
  bool closed_ = false;
};

/// Nega-hemisphere (alpha > 2 pi), hemisphere (alpha = 2 pi) or
/// posi-hemisphere fragment: doubly-right triangles glued cyclically around
/// an apex of cone angle alpha. Apex is point 0; boundary marks are 1..n.
ConeSphericalMetric nega_hemisphere(double alpha, const std::vector<double>& partition);

/// The cone metric Q_Gamma: one hemisphere per vertex of gamma with boundary
/// marks spaced by the incident weights, glued along Gamma* edges. relaxed
/// skips the local sum test and may produce posi-hemispheres.
ConeSphericalMetric build_Q_gamma(const WeightedDualGraph& g, bool relaxed = false);

/// Side lengths of the marked seams, indexed by mark.
std::vector<double> metric_to_lengths(const ConeSphericalMetric& m, int num_edges);

// Geodesics ------------------------------------------------------------------

struct Crossing {
  int triangle = -1;
  Vec3 entry;
  Vec3 exit;
  int exit_side = -1;
  double length = 0.0;
};

enum class TraceEnd { MaxLength, ConePoint, Closed, Boundary };

std::string to_string(TraceEnd e);

struct GeodesicPath {
  std::vector<Crossing> crossings;
  double length = 0.0;
  TraceEnd end = TraceEnd::MaxLength;
  int hit_point = -1;
  double arrival = 0.0;  ///< unrolled direction at hit_point pointing back along the path
};

/// Start on side `side` of a triangle at `fraction` of its length, heading
/// `angle` in (0, pi) counterclockwise from the side's direction.
struct SideStart {
  int triangle = 0;
  int side = 0;
  double fraction = 0.5;
  double angle = M_PI / 2;
};

inline constexpr double kConeHitTol = 1e-9;
inline constexpr double kClosureTol = 1e-7;

GeodesicPath geodesic_trace(const ConeSphericalMetric& m, const SideStart& start,
                            double max_length);
/// Start at a point in unrolled direction `direction` (modulo its cone angle).
/// With pass_cones = +1 or -1 the path continues through every cone point it
/// meets, leaving at (arrival direction + pass_cones * pi); it is Closed when
/// it leaves the start point again in the start direction.
GeodesicPath geodesic_trace_from(const ConeSphericalMetric& m, int point, double direction,
                                 double max_length, int pass_cones = 0);

/// True when two crossings of the path in a common triangle intersect away
/// from their shared endpoints.
bool self_intersects(const ConeSphericalMetric& m, const GeodesicPath& path);

/// Geodesic segment between singular points.
struct SaddleConnection {
  int from = -1;
  int to = -1;
  double out_dir = 0.0;  ///< unrolled direction leaving `from`
  double in_dir = 0.0;   ///< unrolled direction at `to` pointing back to `from`
  double length = 0.0;
  std::optional<SideRef> along;  ///< canonical side when it runs along one
  int mark = -1;
  int depth = 0;
};

/// Connections of length < pi found by unfolding corridors of at most
/// `depth` crossings. exhausted reports whether the depth cut anything off.
std::vector<SaddleConnection> saddle_connections(const ConeSphericalMetric& m, int depth,
                                                 bool* exhausted = nullptr);

/// Either a cycle of saddle connections or, when `smooth` is set, a closed
/// geodesic avoiding all vertices, given by a start on a side.
struct ClosedGeodesic {
  std::vector<SaddleConnection> legs;
  std::optional<SideStart> smooth;
  double length = 0.0;
  bool hemisphere_boundary = false;
  int link_point = -1;  ///< regular point whose link it is, when exempt
};

struct FalsifierResult {
  std::optional<ClosedGeodesic> witness;  ///< shortest non-exempt one
  std::vector<ClosedGeodesic> exempt;
  bool budget_exhausted = false;
  int connections = 0;
  int shots = 0;
};

/// One-sided search for closed geodesics of length <= 2 pi + margin: cycles
/// of saddle connections with angles >= pi on both sides at every vertex.
/// Connections come from corridor unfolding and from shooting with
/// bisection on the direction.
FalsifierResult closed_geodesic_falsifier(const ConeSphericalMetric& m,
                                          const FalsifierBudget& budget = {});

struct WitnessCheck {
  bool closed = false;
  bool geodesic = false;
  double length_error = 0.0;
  double min_angle_margin = 0.0;  ///< min over vertices of (smaller side angle - pi)
};

/// Re-traces every leg from scratch and re-checks the angle conditions.
WitnessCheck verify_witness(const ConeSphericalMetric& m, const ClosedGeodesic& c);

struct RecoveredEdge {
  int a = -1;  ///< labels of the f points
  int b = -1;
  double length = 0.0;
};

struct RecoveredGraph {
  std::vector<int> nodes;  ///< f labels
  std::vector<RecoveredEdge> edges;
  int radii = 0;           ///< f-to-apex connections of length pi/2
};

/// Rebuilds the marked Gamma* graph from a Q_Gamma metric by following
/// connections out of f points at multiples of pi from the shortest one.
RecoveredGraph recover_combinatorics(const ConeSphericalMetric& m, int depth = 12);

/// Orientation-preserving comparison of labeled complexes: same labeled
/// triangles, seams, marks and cone angles within tol.
bool isomorphic(const ConeSphericalMetric& a, const ConeSphericalMetric& b, double tol,
                std::string* why = nullptr);

}  // namespace hyperideal
