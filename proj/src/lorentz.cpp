#include "hyperideal/lorentz.hpp"

#include <algorithm>

namespace hyperideal {

MVector apply(const LinearMap& m, const MVector& v) {
  Eigen::Vector4d c(v.x0, v.x1, v.x2, v.x3);
  Eigen::Vector4d r = m * c;
  return MVector(r(0), r(1), r(2), r(3));
}

LinearMap minkowski_gram() {
  LinearMap g = LinearMap::Identity();
  g(0, 0) = -1.0;
  return g;
}

LinearMap wedge_generator(const MVector& a, const MVector& b) {
  // Column j holds the image of e_j: inner(b, e_j) a - inner(a, e_j) b.
  LinearMap m;
  for (int j = 0; j < 4; ++j) {
    MVector e(0, 0, 0, 0);
    e[j] = 1.0;
    const MVector img = inner(b, e) * a - inner(a, e) * b;
    for (int i = 0; i < 4; ++i) m(i, j) = img[i];
  }
  return m;
}

LinearMap exp_map(const LinearMap& a) {
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.25) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.25)));
  const LinearMap scaled = a / std::ldexp(1.0, squarings);
  LinearMap term = LinearMap::Identity();
  LinearMap sum = LinearMap::Identity();
  for (int k = 1; k <= 20; ++k) {
    term = term * scaled / static_cast<double>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

LinearMap boost(int axis, double rapidity) {
  LinearMap m = LinearMap::Identity();
  m(0, 0) = std::cosh(rapidity);
  m(axis, axis) = std::cosh(rapidity);
  m(0, axis) = std::sinh(rapidity);
  m(axis, 0) = std::sinh(rapidity);
  return m;
}

LinearMap rotation(int i, int j, double angle) {
  LinearMap m = LinearMap::Identity();
  m(i, i) = std::cos(angle);
  m(j, j) = std::cos(angle);
  m(i, j) = -std::sin(angle);
  m(j, i) = std::sin(angle);
  return m;
}

double isometry_defect(const LinearMap& m) {
  const LinearMap g = minkowski_gram();
  return (m.transpose() * g * m - g).cwiseAbs().maxCoeff();
}

std::array<MVector, 3> orthonormal_complement(const MVector& x0) {
  // Gram-Schmidt in the Lorentzian form over the coordinate axes, skipping
  // the axis best aligned with x0.
  const double q0 = inner(x0, x0);
  if (std::abs(q0) < 1e-12) throw GeometryError("orthonormal_complement: null vector");
  std::array<MVector, 4> axes = {MVector(1, 0, 0, 0), MVector(0, 1, 0, 0), MVector(0, 0, 1, 0),
                                 MVector(0, 0, 0, 1)};
  int skip = 0;
  for (int i = 1; i < 4; ++i) {
    if (std::abs(x0[i]) > std::abs(x0[skip])) skip = i;
  }
  std::array<MVector, 4> basis;
  basis[0] = x0 / std::sqrt(std::abs(q0));
  int n = 1;
  for (int i = 0; i < 4 && n < 4; ++i) {
    if (i == skip) continue;
    MVector v = axes[i];
    for (int k = 0; k < n; ++k) {
      const double qk = inner(basis[k], basis[k]);
      v -= (inner(v, basis[k]) / qk) * basis[k];
    }
    const double q = inner(v, v);
    if (std::abs(q) < 1e-12) throw GeometryError("orthonormal_complement: degenerate step");
    basis[n++] = v / std::sqrt(std::abs(q));
  }
  return {basis[1], basis[2], basis[3]};
}

LinearMap random_isotropy(const MVector& x0, std::mt19937_64& rng, double size) {
  const auto e = orthonormal_complement(x0);
  std::uniform_real_distribution<double> u(-size, size);
  LinearMap gen = u(rng) * wedge_generator(e[0], e[1]) + u(rng) * wedge_generator(e[1], e[2]) +
                  u(rng) * wedge_generator(e[0], e[2]);
  return exp_map(gen);
}

LinearMap random_isometry(std::mt19937_64& rng, double max_rapidity) {
  std::uniform_real_distribution<double> ang(-M_PI, M_PI);
  std::uniform_real_distribution<double> rap(-max_rapidity, max_rapidity);
  std::uniform_int_distribution<int> axis(1, 3);
  LinearMap r1 = rotation(1, 2, ang(rng)) * rotation(2, 3, ang(rng)) * rotation(1, 3, ang(rng));
  LinearMap r2 = rotation(1, 2, ang(rng)) * rotation(2, 3, ang(rng));
  return r1 * boost(axis(rng), rap(rng)) * r2;
}

}  // namespace hyperideal
