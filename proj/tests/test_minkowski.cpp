#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hyperideal/lorentz.hpp"
#include "hyperideal/minkowski.hpp"

using namespace hyperideal;

namespace {

MVector random_vector(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  return MVector(g(rng), g(rng), g(rng), g(rng));
}

HPoint random_hpoint(std::mt19937_64& rng, double max_dist = 3.0) {
  std::uniform_real_distribution<double> r(0.0, max_dist);
  std::normal_distribution<double> g(0.0, 1.0);
  return HPoint::from_polar(r(rng), g(rng), g(rng), g(rng));
}

// Hilbert distance in the unit ball: half the log of the cross-ratio of the
// chord through the two points.
double klein_distance(const MVector& a, const MVector& b) {
  const std::array<double, 3> p{a.x1 / a.x0, a.x2 / a.x0, a.x3 / a.x0};
  const std::array<double, 3> q{b.x1 / b.x0, b.x2 / b.x0, b.x3 / b.x0};
  std::array<double, 3> d{q[0] - p[0], q[1] - p[1], q[2] - p[2]};
  const double len = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
  if (len == 0.0) return 0.0;
  for (auto& x : d) x /= len;
  // |p + t d| = 1
  const double pd = p[0] * d[0] + p[1] * d[1] + p[2] * d[2];
  const double pp = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
  const double disc = std::sqrt(pd * pd - (pp - 1.0));
  const double t_minus = -pd - disc;
  const double t_plus = -pd + disc;
  // points at parameters 0 and len; ideal endpoints at t_minus < 0 < len < t_plus
  const double cross = ((len - t_minus) * (t_plus - 0.0)) / ((0.0 - t_minus) * (t_plus - len));
  return 0.5 * std::log(cross);
}

}  // namespace

TEST_CASE("inner product examples") {
  CHECK(inner(MVector(1, 0, 0, 0), MVector(1, 0, 0, 0)) == -1.0);
  CHECK(inner(MVector(0, 1, 0, 0), MVector(0, 0, 1, 0)) == 0.0);
  CHECK(inner(MVector(std::cosh(1.0), std::sinh(1.0), 0, 0), MVector(1, 0, 0, 0)) ==
        doctest::Approx(-1.5430806).epsilon(1e-7));
}

TEST_CASE("inner is symmetric and bilinear") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> s(-2.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    const MVector a = random_vector(rng), b = random_vector(rng), c = random_vector(rng);
    const double x = s(rng), y = s(rng);
    CHECK(std::abs(inner(a, b) - inner(b, a)) < 1e-12);
    CHECK(std::abs(inner(x * a + y * b, c) - (x * inner(a, c) + y * inner(b, c))) < 1e-12);
  }
}

TEST_CASE("classification") {
  CHECK(classify(MVector(1, 0, 0, 0)) == CausalClass::Timelike);
  CHECK(classify(MVector(1, 1, 0, 0)) == CausalClass::Lightlike);
  CHECK(classify(MVector(0.5, 1, 0, 0)) == CausalClass::Spacelike);
  CHECK_THROWS_WITH(classify(MVector(0, 0, 0, 0)), "degenerate vector");
  // Scale invariance of the relative band.
  CHECK(classify(MVector(1e6, 1e6, 0, 0)) == CausalClass::Lightlike);
  CHECK(classify(MVector(1e-6, 0, 0, 0)) == CausalClass::Timelike);
}

TEST_CASE("model point validation") {
  CHECK_NOTHROW(HPoint(MVector(1, 0, 0, 0)));
  CHECK_THROWS(HPoint(MVector(-1, 0, 0, 0)));
  CHECK_THROWS(HPoint(MVector(2, 0, 0, 0)));
  CHECK_NOTHROW(DSPoint(MVector(0, 1, 0, 0)));
  CHECK_THROWS(DSPoint(MVector(1, 0, 0, 0)));
  CHECK_THROWS(HPlane(MVector(0, 2, 0, 0)));
  CHECK(HPlane(MVector(0, 1, 0, 0)).flipped().normal() == MVector(0, -1, 0, 0));
}

TEST_CASE("hyperbolic distance") {
  const HPoint o(MVector(1, 0, 0, 0));
  CHECK(hyperbolic_distance(o, o) == 0.0);
  CHECK(hyperbolic_distance(o, HPoint(MVector(std::cosh(1.0), std::sinh(1.0), 0, 0))) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(hyperbolic_distance(o, HPoint(MVector(std::cosh(2.0), 0, std::sinh(2.0), 0))) ==
        doctest::Approx(2.0).epsilon(1e-14));
  // Short distances keep full relative precision.
  CHECK(hyperbolic_distance(o, HPoint::from_polar(1e-9, 1, 0, 0)) ==
        doctest::Approx(1e-9).epsilon(1e-12));
}

TEST_CASE("upper sheet points pair to at most -1") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 500; ++i) {
    const HPoint p = random_hpoint(rng), q = random_hpoint(rng);
    CHECK(inner(p.v(), q.v()) <= -1.0 + 1e-9);
  }
}

TEST_CASE("hyperbolic distance agrees with the Klein cross-ratio distance") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    const HPoint p = random_hpoint(rng, 2.5), q = random_hpoint(rng, 2.5);
    CHECK(std::abs(hyperbolic_distance(p, q) - klein_distance(p.v(), q.v())) < 1e-9);
  }
}

TEST_CASE("de Sitter distance") {
  const DSPoint a(MVector(0, 1, 0, 0)), b(MVector(0, 0, 1, 0)), c(MVector(0, -1, 0, 0));
  CHECK(desitter_distance(a, a) == 0.0);
  CHECK(desitter_distance(a, b) == doctest::Approx(M_PI / 2).epsilon(1e-15));
  CHECK(desitter_distance(a, c) == doctest::Approx(M_PI).epsilon(1e-15));
  const DSPoint far(MVector(std::sinh(1.0), std::cosh(1.0), 0, 0));
  const DSPoint other(MVector(-std::sinh(1.0), std::cosh(1.0), 0, 0));
  CHECK_THROWS_WITH(desitter_distance(far, other), "not spacelike-connected");
}

TEST_CASE("projective map examples") {
  const ProjectiveCenter hyp(MVector(1, 0, 0, 0), -1);
  CHECK(max_abs(projective_map(hyp, MVector(1, 0, 0, 0))) == 0.0);
  const MVector y = projective_map(hyp, MVector(std::cosh(1.0), std::sinh(1.0), 0, 0));
  CHECK(y.x1 == doctest::Approx(0.7615942).epsilon(1e-7));
  CHECK(std::abs(y.x1 - std::tanh(1.0)) < 1e-15);
  const ProjectiveCenter ds(MVector(0, 0, 0, 1), 1);
  CHECK(max_abs(projective_map(ds, MVector(0, 0, 0, 1))) == 0.0);
  CHECK_THROWS_WITH(projective_map(hyp, MVector(0, 1, 0, 0)), "point on projection horizon");
}

TEST_CASE("projective inverse examples") {
  const ProjectiveCenter hyp(MVector(1, 0, 0, 0), -1);
  CHECK(projective_inverse(hyp, MVector(0, 0, 0, 0)) == MVector(1, 0, 0, 0));
  const MVector x = projective_inverse(hyp, MVector(0, std::tanh(1.0), 0, 0));
  CHECK(max_abs(x - MVector(std::cosh(1.0), std::sinh(1.0), 0, 0)) < 1e-14);
  CHECK_THROWS_WITH(projective_inverse(hyp, MVector(0, 2, 0, 0)), "point outside model");
}

TEST_CASE("projective round trips in all four regimes") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int eps : {-1, 1}) {
    for (int mu : {-1, 1}) {
      const MVector x0 = eps < 0 ? MVector(1, 0, 0, 0) : MVector(0, 0, 0, 1);
      const ProjectiveCenter c(x0, mu);
      double worst = 0.0;
      int done = 0;
      while (done < 1000) {
        const MVector v(g(rng), g(rng), g(rng), g(rng));
        const double q = mu * inner(v, v);
        if (q < 0.05 * euclidean_norm(v) * euclidean_norm(v)) continue;
        MVector x = v / std::sqrt(q);
        if (std::abs(inner(x, x0)) < 0.2 || max_abs(x) > 4.0) continue;
        if (!c.in_domain(x)) x = -x;
        const MVector y = projective_map(c, x);
        worst = std::max(worst, max_abs(projective_inverse(c, y) - x));
        worst = std::max(worst, max_abs(projective_map(c, projective_inverse(c, y)) - y));
        ++done;
      }
      CHECK(worst < 1e-12);
    }
  }
}

TEST_CASE("cross products") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    const MVector a = random_vector(rng), b = random_vector(rng), c = random_vector(rng);
    const MVector w = minkowski_cross(a, b, c);
    CHECK(std::abs(inner(w, a)) < 1e-12);
    CHECK(std::abs(inner(w, b)) < 1e-12);
    CHECK(std::abs(inner(w, c)) < 1e-12);
  }
  CHECK(det4(MVector(1, 0, 0, 0), MVector(0, 1, 0, 0), MVector(0, 0, 1, 0), MVector(0, 0, 0, 1)) ==
        1.0);
}

TEST_CASE("Lorentz group helpers") {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 50; ++i) {
    CHECK(isometry_defect(random_isometry(rng)) < 1e-12);
    const MVector x0(0, 0, 0, 1);
    const LinearMap rho = random_isotropy(x0, rng);
    CHECK(isometry_defect(rho) < 1e-12);
    CHECK(max_abs(apply(rho, x0) - x0) < 1e-13);
  }
  const auto basis = orthonormal_complement(MVector(1, 0, 0, 0));
  for (const auto& e : basis) CHECK(std::abs(inner(e, MVector(1, 0, 0, 0))) < 1e-15);
}
