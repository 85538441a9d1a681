#pragma once

#include <Eigen/Dense>
#include <random>

#include "hyperideal/minkowski.hpp"

namespace hyperideal {

/// Linear map of R^4_1 as a 4x4 matrix acting on coordinate columns.
using LinearMap = Eigen::Matrix4d;

MVector apply(const LinearMap& m, const MVector& v);

/// Gram matrix of the form, diag(-1, 1, 1, 1).
LinearMap minkowski_gram();

/// Generator u -> inner(b,u) a - inner(a,u) b of o(3,1).
LinearMap wedge_generator(const MVector& a, const MVector& b);

/// Matrix exponential by scaling and squaring of a Taylor series.
LinearMap exp_map(const LinearMap& a);

/// Boost of rapidity t in the (x0, x_axis) plane, axis in {1,2,3}.
LinearMap boost(int axis, double rapidity);

/// Rotation by angle in the (x_i, x_j) spatial plane.
LinearMap rotation(int i, int j, double angle);

/// Max over entries of |M^T G M - G|; zero for elements of O(3,1).
double isometry_defect(const LinearMap& m);

/// Basis of the orthogonal complement of a non-null vector x0, orthonormal
/// with respect to the Lorentzian form (entries have norm_sq = +-1).
std::array<MVector, 3> orthonormal_complement(const MVector& x0);

/// Random element of the isotropy group of x0: exp of a random combination of
/// wedge generators of x0's orthogonal complement, scaled by `size`.
LinearMap random_isotropy(const MVector& x0, std::mt19937_64& rng, double size = 0.7);

/// Random orientation- and time-preserving isometry of H^3 (rotation, boost of
/// rapidity up to max_rapidity, rotation).
LinearMap random_isometry(std::mt19937_64& rng, double max_rapidity = 1.0);

}  // namespace hyperideal
