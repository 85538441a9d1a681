#pragma once

#include <array>
#include <cmath>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace hyperideal {

/// Raised when an input violates a geometric precondition.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Vector of Minkowski space R^4_1, signature (-,+,+,+), timelike axis first.
struct MVector {
  double x0 = 0.0;
  double x1 = 0.0;
  double x2 = 0.0;
  double x3 = 0.0;

  constexpr MVector() = default;
  constexpr MVector(double a, double b, double c, double d) : x0(a), x1(b), x2(c), x3(d) {}

  double operator[](int i) const {
    switch (i) {
      case 0: return x0;
      case 1: return x1;
      case 2: return x2;
      default: return x3;
    }
  }
  double& operator[](int i) {
    switch (i) {
      case 0: return x0;
      case 1: return x1;
      case 2: return x2;
      default: return x3;
    }
  }

  MVector& operator+=(const MVector& o) {
    x0 += o.x0; x1 += o.x1; x2 += o.x2; x3 += o.x3;
    return *this;
  }
  MVector& operator-=(const MVector& o) {
    x0 -= o.x0; x1 -= o.x1; x2 -= o.x2; x3 -= o.x3;
    return *this;
  }
  MVector& operator*=(double s) {
    x0 *= s; x1 *= s; x2 *= s; x3 *= s;
    return *this;
  }
  MVector& operator/=(double s) {
    x0 /= s; x1 /= s; x2 /= s; x3 /= s;
    return *this;
  }

  friend MVector operator+(MVector a, const MVector& b) { return a += b; }
  friend MVector operator-(MVector a, const MVector& b) { return a -= b; }
  friend MVector operator-(MVector a) { return a *= -1.0; }
  friend MVector operator*(double s, MVector a) { return a *= s; }
  friend MVector operator*(MVector a, double s) { return a *= s; }
  friend MVector operator/(MVector a, double s) { return a /= s; }
  friend bool operator==(const MVector&, const MVector&) = default;
};

std::ostream& operator<<(std::ostream& os, const MVector& v);

/// Lorentzian bilinear form -a0 b0 + a1 b1 + a2 b2 + a3 b3.
inline double inner(const MVector& a, const MVector& b) {
  return -a.x0 * b.x0 + a.x1 * b.x1 + a.x2 * b.x2 + a.x3 * b.x3;
}

inline double norm_sq(const MVector& v) { return inner(v, v); }

/// Largest absolute coordinate.
double max_abs(const MVector& v);

/// Euclidean length of the coordinate vector (used only for projective bookkeeping).
double euclidean_norm(const MVector& v);

enum class CausalClass { Timelike, Spacelike, Lightlike };

std::string to_string(CausalClass c);

/// Relative tolerance on inner(v,v)/scale^2 below which a vector counts as lightlike.
inline constexpr double kLightlikeTol = 1e-10;

/// Throws GeometryError("degenerate vector") for the zero vector.
CausalClass classify(const MVector& v);

/// Point of H^3: upper sheet of inner(v,v) = -1.
class HPoint {
 public:
  /// Validates the quadric and sheet conditions (1e-9).
  explicit HPoint(const MVector& v);
  /// Normalizes a future timelike vector onto the hyperboloid.
  static HPoint from_timelike(const MVector& v);
  /// Point at hyperbolic distance `dist` from (1,0,0,0) in Euclidean direction dir.
  static HPoint from_polar(double dist, double d1, double d2, double d3);

  const MVector& v() const { return v_; }

 private:
  MVector v_;
};

/// Point of de Sitter space S^3_1: inner(v,v) = +1.
class DSPoint {
 public:
  explicit DSPoint(const MVector& v);
  static DSPoint from_spacelike(const MVector& v);

  const MVector& v() const { return v_; }

 private:
  MVector v_;
};

/// Oriented hyperbolic plane given by a unit spacelike normal; the closed
/// half-space is {p : inner(p, n) >= 0}.
class HPlane {
 public:
  explicit HPlane(const MVector& n);
  static HPlane from_spacelike(const MVector& n);

  const MVector& normal() const { return n_; }
  HPlane flipped() const { return HPlane(-n_); }

 private:
  MVector n_;
};

/// Center x0 of a projective chart with eps = sign(inner(x0,x0)) and the
/// sign mu of the unit quadric being projected.
class ProjectiveCenter {
 public:
  ProjectiveCenter(const MVector& x0, int mu);

  const MVector& x0() const { return x0_; }
  int eps() const { return eps_; }
  int mu() const { return mu_; }

  /// True when x lies in the projected domain: sgn(inner(x,x0)) == eps.
  bool in_domain(const MVector& x) const;

 private:
  MVector x0_;
  int eps_;
  int mu_;
};

double hyperbolic_distance(const HPoint& p, const HPoint& q);

/// Spherical distance between spacelike-connected de Sitter points, in [0, pi].
double desitter_distance(const DSPoint& u, const DSPoint& v);

/// Central projection of Omega_0 onto the hyperplane through x0 orthogonal to x0.
/// The returned vector y is orthogonal to x0; the affine point is y + x0.
MVector projective_map(const ProjectiveCenter& c, const MVector& x);

/// Inverse of projective_map: (y + x0) / sqrt(mu * inner(y + x0, y + x0)).
MVector projective_inverse(const ProjectiveCenter& c, const MVector& y);

/// Null vector of three vectors (generalized cross product in R^4, Euclidean
/// coordinates): w with dot_e(w, a) = dot_e(w, b) = dot_e(w, c) = 0.
MVector euclidean_cross(const MVector& a, const MVector& b, const MVector& c);

/// Vector w with inner(w, a) = inner(w, b) = inner(w, c) = 0.
MVector minkowski_cross(const MVector& a, const MVector& b, const MVector& c);

/// 4x4 determinant of the coordinate matrix with rows a, b, c, d.
double det4(const MVector& a, const MVector& b, const MVector& c, const MVector& d);

}  // namespace hyperideal
