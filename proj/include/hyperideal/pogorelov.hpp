#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "hyperideal/lorentz.hpp"
#include "hyperideal/minkowski.hpp"

namespace hyperideal {

/// Shared chart data for the global map, the projective map and its tangent lift.
struct PogorelovContext {
  ProjectiveCenter center;
};

/// Per-point velocities of a sampled surface.
struct DeformationField {
  std::vector<MVector> base;
  std::vector<MVector> velocity;

  /// Throws unless sizes match and, for points on a unit quadric, each
  /// velocity is tangent (inner(base, velocity) = 0 within 1e-9).
  void check_tangent() const;
};

/// Point set with straight edges (a polyhedral surface or bar framework).
struct SurfaceGraph {
  std::vector<MVector> points;
  std::vector<std::pair<int, int>> edges;
};

inline constexpr double kFiniteDifferenceStep = 1e-6;

/// The global Pogorelov map: the pair
///   2 (eps x - <x,x0> x0, eps x' - <x',x0> x0) / <x + x', x0>.
/// On the diagonal it agrees bit-for-bit with projective_map.
std::pair<MVector, MVector> global_map(const PogorelovContext& ctx, const MVector& x,
                                       const MVector& xp);

/// |1/4 <x+x',x0>^2 (|pi1 TPhi(X,X')|^2 - |pi2 TPhi(X,X')|^2) - (|X|^2 - |X'|^2)|
/// with TPhi taken by central differences along quadric-retracted curves.
double norm_difference_residual(const PogorelovContext& ctx, const MVector& x, const MVector& xp,
                                const MVector& tx, const MVector& txp,
                                double h = kFiniteDifferenceStep);

/// Tangent lift of the projective map: (phi(x), (eps v - <v,x0> x0) / <x,x0>).
std::pair<MVector, MVector> infinitesimal_map(const PogorelovContext& ctx, const MVector& x,
                                              const MVector& v);

/// Max norm of infinitesimal_map(x,v).second - d/dt [pi2 Phi(x,x_t) - pi1 Phi(x,x_t)]
/// at t = 0, for x_t the retracted curve with velocity v.
double infinitesimal_consistency_residual(const PogorelovContext& ctx, const MVector& x,
                                          const MVector& v, double h = kFiniteDifferenceStep);

/// Max over edges (p,q) of |d/dt|_{t=0} len(q + tV(q) - p - tV(p))| with the
/// ambient quadratic form; zero characterizes isometric first-order motion.
double discrete_lie_residual(const SurfaceGraph& surface, const DeformationField& field);

/// Pushes a surface and a tangent field through infinitesimal_map.
std::pair<SurfaceGraph, DeformationField> push_forward(const PogorelovContext& ctx,
                                                       const SurfaceGraph& surface,
                                                       const DeformationField& field);

/// Normal of an open half-space containing a finite set of de Sitter points.
struct SupportingCenter {
  MVector normal;      ///< unit: |inner(normal, normal)| = 1
  CausalClass causal;  ///< spacelike or timelike
  double min_slack;    ///< min over inputs of inner(u, normal) > 0
};

/// Finds w with inner(u, w) > 0 for every input u by supporting the polyhedral
/// cone cut out by the inputs along one of its faces and tilting off that face.
/// Throws GeometryError("no supporting hyperplane") when no such w is found.
SupportingCenter supporting_center(const std::vector<DSPoint>& dual_vertices);

/// Point of the unit quadric of sign mu closest along the ray through x.
MVector retract_to_quadric(const MVector& x, int mu);

/// Orthogonal projection onto the tangent space of the quadric of sign mu at x.
MVector tangent_projection(const MVector& x, const MVector& r, int mu);

/// Random point of Omega_0 with |<x,x0>| >= 0.2 and coordinates bounded by 4.
MVector sample_domain_point(const ProjectiveCenter& c, std::mt19937_64& rng);

/// Random tangent vector at x (Gaussian coordinates, projected).
MVector sample_tangent(const MVector& x, int mu, std::mt19937_64& rng);

/// Aggregate residuals of the self-test harness for one (eps, mu) regime.
struct RegimeResiduals {
  int eps = 0;
  int mu = 0;
  int samples = 0;
  double projective_roundtrip = 0.0;   ///< phi^-1(phi(x)) vs x
  double projective_roundtrip_inv = 0.0;  ///< phi(phi^-1(y)) vs y
  double norm_difference = 0.0;        ///< norm_difference_residual
  double equal_norm_difference = 0.0;  ///< image norm gap for |X| = |X'|
  double diagonal = 0.0;               ///< global_map(x,x) vs projective_map(x), exact
  double isometry_commutation = 0.0;   ///< Phi(rho x, rho x') vs rho~ Phi(x, x')
  double conjugation = 0.0;            ///< phi rho phi^-1 vs rho on model points
  double infinitesimal_consistency = 0.0;
};

struct SelfTestReport {
  std::uint64_t seed = 0;
  std::vector<RegimeResiduals> regimes;
  double killing_residual = 0.0;        ///< Killing fields, source side
  double killing_pushforward = 0.0;     ///< same fields after push_forward
  double flex_residual = 0.0;           ///< nontrivial flex, source side
  double flex_pushforward = 0.0;        ///< after push_forward
  double generic_min_residual = 0.0;    ///< min residual of non-isometric fields
  double generic_min_pushforward = 0.0;
  int equivalence_mismatches = 0;       ///< isometric(F,V) xor isometric(phi F, phi~ V)
};

/// Runs every numerical identity check on `samples` seeded configurations per regime.
SelfTestReport run_selftest(std::uint64_t seed, int samples);

/// Open triangle fan on the quadric of sign mu: a hub joined to `sides` ring
/// points at chart radius `radius`, ring closed except for one gap. It carries
/// nontrivial first-order flexes.
SurfaceGraph open_fan(const MVector& hub, double radius, int sides, int mu);

/// Complete graph on the given points (first-order rigid for >= 5 generic points).
SurfaceGraph complete_graph(const std::vector<MVector>& points);

/// First-order isometric fields of a framework on the quadric of sign mu that
/// are not Killing fields: null space of the rigidity matrix (edge rows plus
/// tangency rows) with the span of the o(3,1) generators projected out.
std::vector<DeformationField> nontrivial_flexes(const SurfaceGraph& surface, int mu);

/// Killing field p -> A p restricted to the points.
DeformationField killing_field(const LinearMap& generator, const std::vector<MVector>& points);

}  // namespace hyperideal
