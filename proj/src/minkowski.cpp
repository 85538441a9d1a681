#include "hyperideal/minkowski.hpp"

#include <algorithm>
#include <ostream>

namespace hyperideal {

namespace {

constexpr double kQuadricTol = 1e-9;
constexpr double kHorizonTol = 1e-12;

int sign_of(double v) { return v > 0.0 ? 1 : -1; }

}  // namespace

std::ostream& operator<<(std::ostream& os, const MVector& v) {
  return os << '(' << v.x0 << ", " << v.x1 << ", " << v.x2 << ", " << v.x3 << ')';
}

double max_abs(const MVector& v) {
  return std::max({std::abs(v.x0), std::abs(v.x1), std::abs(v.x2), std::abs(v.x3)});
}

double euclidean_norm(const MVector& v) {
  return std::sqrt(v.x0 * v.x0 + v.x1 * v.x1 + v.x2 * v.x2 + v.x3 * v.x3);
}

std::string to_string(CausalClass c) {
  switch (c) {
    case CausalClass::Timelike: return "timelike";
    case CausalClass::Spacelike: return "spacelike";
    case CausalClass::Lightlike: return "lightlike";
  }
  return "unknown";
}

CausalClass classify(const MVector& v) {
  const double scale = max_abs(v);
  if (scale == 0.0) throw GeometryError("degenerate vector");
  const double q = inner(v, v);
  const double band = kLightlikeTol * scale * scale;
  if (q < -band) return CausalClass::Timelike;
  if (q > band) return CausalClass::Spacelike;
  return CausalClass::Lightlike;
}

HPoint::HPoint(const MVector& v) : v_(v) {
  if (std::abs(inner(v, v) + 1.0) > kQuadricTol || v.x0 <= 0.0) {
    throw GeometryError("not a point of the upper hyperboloid sheet");
  }
}

HPoint HPoint::from_timelike(const MVector& v) {
  const double q = inner(v, v);
  if (q >= 0.0) throw GeometryError("vector is not timelike");
  MVector w = v / std::sqrt(-q);
  if (w.x0 < 0.0) w = -w;
  return HPoint(w);
}

HPoint HPoint::from_polar(double dist, double d1, double d2, double d3) {
  const double len = std::sqrt(d1 * d1 + d2 * d2 + d3 * d3);
  if (len == 0.0) return HPoint(MVector(1, 0, 0, 0));
  const double s = std::sinh(dist) / len;
  return HPoint(MVector(std::cosh(dist), s * d1, s * d2, s * d3));
}

DSPoint::DSPoint(const MVector& v) : v_(v) {
  if (std::abs(inner(v, v) - 1.0) > kQuadricTol) {
    throw GeometryError("not a point of de Sitter space");
  }
}

DSPoint DSPoint::from_spacelike(const MVector& v) {
  const double q = inner(v, v);
  if (q <= 0.0) throw GeometryError("vector is not spacelike");
  return DSPoint(v / std::sqrt(q));
}

HPlane::HPlane(const MVector& n) : n_(n) {
  if (std::abs(inner(n, n) - 1.0) > kQuadricTol) {
    throw GeometryError("plane normal is not a unit spacelike vector");
  }
}

HPlane HPlane::from_spacelike(const MVector& n) {
  const double q = inner(n, n);
  if (q <= 0.0) throw GeometryError("plane normal is not spacelike");
  return HPlane(n / std::sqrt(q));
}

ProjectiveCenter::ProjectiveCenter(const MVector& x0, int mu) : x0_(x0), mu_(mu) {
  const double q = inner(x0, x0);
  if (std::abs(std::abs(q) - 1.0) > kQuadricTol) {
    throw GeometryError("projective center must satisfy |inner(x0,x0)| = 1");
  }
  if (mu != 1 && mu != -1) throw GeometryError("mu must be +1 or -1");
  eps_ = sign_of(q);
}

bool ProjectiveCenter::in_domain(const MVector& x) const {
  const double a = inner(x, x0_);
  return a != 0.0 && sign_of(a) == eps_;
}

double hyperbolic_distance(const HPoint& p, const HPoint& q) {
  double c = -inner(p.v(), q.v());
  if (c < 1.0 - kQuadricTol) throw GeometryError("points not on same sheet");
  c = std::max(c, 1.0);
  // acosh loses half the digits near 1; use the chord for short distances.
  const MVector d = p.v() - q.v();
  const double chord_sq = inner(d, d);  // = 2(cosh r - 1) = 4 sinh^2(r/2)
  if (c < 1.5 && chord_sq >= 0.0) return 2.0 * std::asinh(0.5 * std::sqrt(chord_sq));
  return std::acosh(c);
}

double desitter_distance(const DSPoint& u, const DSPoint& v) {
  const double c = inner(u.v(), v.v());
  if (std::abs(c) > 1.0 + kQuadricTol) throw GeometryError("not spacelike-connected");
  // Half-angle forms are exact reformulations of arccos(c) that keep full
  // precision near 0 and pi.
  const MVector diff = u.v() - v.v();
  const MVector sum = u.v() + v.v();
  const double dd = std::max(0.0, inner(diff, diff));
  const double ss = std::max(0.0, inner(sum, sum));
  if (c >= 0.0) return 2.0 * std::asin(std::min(1.0, 0.5 * std::sqrt(dd)));
  return M_PI - 2.0 * std::asin(std::min(1.0, 0.5 * std::sqrt(ss)));
}

MVector projective_map(const ProjectiveCenter& c, const MVector& x) {
  const double a = inner(x, c.x0());
  if (std::abs(a) < kHorizonTol) throw GeometryError("point on projection horizon");
  return (c.eps() * x - a * c.x0()) / a;
}

MVector projective_inverse(const ProjectiveCenter& c, const MVector& y) {
  const MVector z = y + c.x0();
  const double q = c.mu() * inner(z, z);
  if (q <= 0.0) throw GeometryError("point outside model");
  return z / std::sqrt(q);
}

double det4(const MVector& a, const MVector& b, const MVector& c, const MVector& d) {
  // Laplace expansion along the first row.
  auto det3 = [](double a1, double a2, double a3, double b1, double b2, double b3, double c1,
                 double c2, double c3) {
    return a1 * (b2 * c3 - b3 * c2) - a2 * (b1 * c3 - b3 * c1) + a3 * (b1 * c2 - b2 * c1);
  };
  return a.x0 * det3(b.x1, b.x2, b.x3, c.x1, c.x2, c.x3, d.x1, d.x2, d.x3) -
         a.x1 * det3(b.x0, b.x2, b.x3, c.x0, c.x2, c.x3, d.x0, d.x2, d.x3) +
         a.x2 * det3(b.x0, b.x1, b.x3, c.x0, c.x1, c.x3, d.x0, d.x1, d.x3) -
         a.x3 * det3(b.x0, b.x1, b.x2, c.x0, c.x1, c.x2, d.x0, d.x1, d.x2);
}

MVector euclidean_cross(const MVector& a, const MVector& b, const MVector& c) {
  // Cofactors of the formal determinant with e_i in the first row.
  const MVector e0(1, 0, 0, 0), e1(0, 1, 0, 0), e2(0, 0, 1, 0), e3(0, 0, 0, 1);
  return MVector(det4(e0, a, b, c), det4(e1, a, b, c), det4(e2, a, b, c), det4(e3, a, b, c));
}

MVector minkowski_cross(const MVector& a, const MVector& b, const MVector& c) {
  // Euclidean null vector of the three, then raise the index with diag(-1,1,1,1).
  MVector w = euclidean_cross(a, b, c);
  w.x0 = -w.x0;
  return w;
}

}  // namespace hyperideal
