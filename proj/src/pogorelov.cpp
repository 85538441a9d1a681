#include "hyperideal/pogorelov.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <string>

namespace hyperideal {

namespace {

constexpr double kTangentTol = 1e-9;
constexpr double kHorizonTol = 1e-12;
constexpr double kIsometricTol = 1e-8;

double max_diff(const MVector& a, const MVector& b) { return max_abs(a - b); }

}  // namespace

void DeformationField::check_tangent() const {
  if (base.size() != velocity.size()) {
    throw GeometryError("deformation field: base and velocity sizes differ");
  }
  for (std::size_t i = 0; i < base.size(); ++i) {
    const double q = inner(base[i], base[i]);
    if (std::abs(std::abs(q) - 1.0) > 1e-9) continue;  // not on a unit quadric
    if (std::abs(inner(base[i], velocity[i])) > kTangentTol) {
      throw GeometryError("deformation field: velocity " + std::to_string(i) + " is not tangent");
    }
  }
}

std::pair<MVector, MVector> global_map(const PogorelovContext& ctx, const MVector& x,
                                       const MVector& xp) {
  const MVector& x0 = ctx.center.x0();
  const double eps = ctx.center.eps();
  const double denom = inner(x + xp, x0);
  if (std::abs(denom) < kHorizonTol) throw GeometryError("pair on horizon");
  // Written as (2 n) / (2 a) on the diagonal, which rounds identically to n / a.
  const MVector n1 = eps * x - inner(x, x0) * x0;
  const MVector n2 = eps * xp - inner(xp, x0) * x0;
  return {(2.0 * n1) / denom, (2.0 * n2) / denom};
}

MVector retract_to_quadric(const MVector& x, int mu) {
  const double q = mu * inner(x, x);
  if (q <= 0.0) throw GeometryError("cannot retract onto quadric");
  return x / std::sqrt(q);
}

MVector tangent_projection(const MVector& x, const MVector& r, int mu) {
  // inner(x,x) = mu, so the normal component of r is mu * inner(r,x) x.
  return r - (mu * inner(r, x)) * x;
}

double norm_difference_residual(const PogorelovContext& ctx, const MVector& x, const MVector& xp,
                                const MVector& tx, const MVector& txp, double h) {
  const int mu = ctx.center.mu();
  const auto plus = global_map(ctx, retract_to_quadric(x + h * tx, mu),
                               retract_to_quadric(xp + h * txp, mu));
  const auto minus = global_map(ctx, retract_to_quadric(x - h * tx, mu),
                                retract_to_quadric(xp - h * txp, mu));
  const MVector d1 = (plus.first - minus.first) / (2.0 * h);
  const MVector d2 = (plus.second - minus.second) / (2.0 * h);
  const double a = inner(x + xp, ctx.center.x0());
  const double lhs = 0.25 * a * a * (norm_sq(d1) - norm_sq(d2));
  const double rhs = norm_sq(tx) - norm_sq(txp);
  return std::abs(lhs - rhs);
}

std::pair<MVector, MVector> infinitesimal_map(const PogorelovContext& ctx, const MVector& x,
                                              const MVector& v) {
  const MVector& x0 = ctx.center.x0();
  const double a = inner(x, x0);
  if (std::abs(a) < kHorizonTol) throw GeometryError("point on projection horizon");
  if (std::abs(inner(x, v)) > kTangentTol * std::max(1.0, max_abs(v))) {
    throw GeometryError("velocity is not tangent to the quadric");
  }
  const MVector lifted = (ctx.center.eps() * v - inner(v, x0) * x0) / a;
  return {projective_map(ctx.center, x), lifted};
}

double infinitesimal_consistency_residual(const PogorelovContext& ctx, const MVector& x,
                                          const MVector& v, double h) {
  const int mu = ctx.center.mu();
  const auto plus = global_map(ctx, x, retract_to_quadric(x + h * v, mu));
  const auto minus = global_map(ctx, x, retract_to_quadric(x - h * v, mu));
  const MVector fd = ((plus.second - plus.first) - (minus.second - minus.first)) / (2.0 * h);
  return max_diff(infinitesimal_map(ctx, x, v).second, fd);
}

double discrete_lie_residual(const SurfaceGraph& surface, const DeformationField& field) {
  if (field.velocity.size() != surface.points.size()) {
    throw GeometryError("deformation field does not match surface");
  }
  double worst = 0.0;
  for (const auto& [i, j] : surface.edges) {
    const MVector chord = surface.points[j] - surface.points[i];
    const double len_sq = inner(chord, chord);
    const double scale = max_abs(chord);
    if (scale == 0.0 || std::abs(len_sq) <= 1e-20 * std::max(1.0, scale * scale)) {
      throw GeometryError("degenerate edge " + std::to_string(i) + "-" + std::to_string(j));
    }
    // d/dt sqrt|<c + t dV, c + t dV>| = <c, dV> / sqrt|<c,c>|
    const double rate =
        inner(chord, field.velocity[j] - field.velocity[i]) / std::sqrt(std::abs(len_sq));
    worst = std::max(worst, std::abs(rate));
  }
  return worst;
}

std::pair<SurfaceGraph, DeformationField> push_forward(const PogorelovContext& ctx,
                                                       const SurfaceGraph& surface,
                                                       const DeformationField& field) {
  SurfaceGraph out{{}, surface.edges};
  DeformationField f;
  for (std::size_t i = 0; i < surface.points.size(); ++i) {
    const auto [y, w] = infinitesimal_map(ctx, surface.points[i], field.velocity[i]);
    out.points.push_back(y);
    f.base.push_back(y);
    f.velocity.push_back(w);
  }
  return {out, f};
}

SupportingCenter supporting_center(const std::vector<DSPoint>& dual_vertices) {
  const std::size_t n = dual_vertices.size();
  if (n == 0) throw GeometryError("no supporting hyperplane");
  std::vector<MVector> u;
  u.reserve(n);
  for (const auto& p : dual_vertices) u.push_back(p.v());

  auto evaluate = [&](const MVector& w) -> std::optional<SupportingCenter> {
    const double q = inner(w, w);
    const double scale = max_abs(w);
    if (scale == 0.0 || std::abs(q) <= 1e-12 * scale * scale) return std::nullopt;
    const MVector unit = w / std::sqrt(std::abs(q));
    double slack = std::numeric_limits<double>::infinity();
    for (const auto& v : u) slack = std::min(slack, inner(v, unit));
    if (!(slack > 0.0)) return std::nullopt;
    return SupportingCenter{unit, q > 0.0 ? CausalClass::Spacelike : CausalClass::Timelike, slack};
  };

  // Extreme rays of the cone {w : inner(u_i, w) >= 0}.
  std::vector<MVector> rays;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        MVector w = minkowski_cross(u[i], u[j], u[k]);
        const double len = euclidean_norm(w);
        if (len < 1e-12) continue;
        w /= len;
        for (double s : {1.0, -1.0}) {
          const MVector c = s * w;
          bool ok = true;
          for (const auto& v : u) ok = ok && inner(v, c) >= -1e-9;
          if (ok) {
            rays.push_back(c);
            break;
          }
        }
      }
    }
  }

  // Point in the relative interior of face F of that cone, then tilt it off F.
  for (std::size_t f = 0; f < n && !rays.empty(); ++f) {
    MVector p(0, 0, 0, 0);
    for (const auto& r : rays) {
      if (std::abs(inner(r, u[f])) <= 1e-9) p += r;
    }
    const double len = euclidean_norm(p);
    if (len < 1e-12) continue;
    p /= len;
    double slack = std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < n; ++g) {
      if (g == f) continue;
      slack = std::min(slack, inner(u[g], p));
    }
    if (!(slack > 1e-12)) continue;
    double delta = 0.5 * slack;
    for (int step = 0; step < 16; ++step, delta *= 0.5) {
      if (auto found = evaluate(p + delta * u[f])) return *found;
    }
  }

  MVector sum(0, 0, 0, 0);
  for (const auto& v : u) sum += v;
  if (auto found = evaluate(sum)) return *found;
  for (const auto& v : u) {
    if (auto found = evaluate(v)) return *found;
  }
  throw GeometryError("no supporting hyperplane");
}

MVector sample_domain_point(const ProjectiveCenter& c, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  for (int attempt = 0; attempt < 100000; ++attempt) {
    const MVector v(g(rng), g(rng), g(rng), g(rng));
    const double q = c.mu() * inner(v, v);
    if (q <= 0.05 * euclidean_norm(v) * euclidean_norm(v)) continue;
    MVector x = v / std::sqrt(q);
    const double a = inner(x, c.x0());
    if (std::abs(a) < 0.2 || max_abs(x) > 4.0) continue;
    if (!c.in_domain(x)) x = -x;
    return x;
  }
  throw GeometryError("sample_domain_point: sampler exhausted");
}

MVector sample_tangent(const MVector& x, int mu, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  return tangent_projection(x, MVector(g(rng), g(rng), g(rng), g(rng)), mu);
}

SurfaceGraph open_fan(const MVector& hub, double radius, int sides, int mu) {
  // Two unit spacelike tangent directions at the hub, plus the remaining one.
  std::vector<MVector> spacelike;
  std::vector<MVector> other;
  for (const auto& e : orthonormal_complement(hub)) {
    (inner(e, e) > 0.0 && spacelike.size() < 2 ? spacelike : other).push_back(e);
  }
  if (spacelike.size() < 2) throw GeometryError("open_fan: hub tangent space too degenerate");
  SurfaceGraph s;
  s.points.push_back(hub);
  for (int k = 0; k < sides; ++k) {
    // Irregular angles and heights keep the framework generic (not in a plane).
    const double t = 2.0 * M_PI * k / sides + 0.1 * std::sin(3.0 * k + 1.0);
    const double r = radius * (1.0 + 0.15 * std::cos(2.0 * k + 0.5));
    const double h = 0.3 * radius * std::sin(2.0 * k + 0.7);
    s.points.push_back(retract_to_quadric(
        hub + r * std::cos(t) * spacelike[0] + r * std::sin(t) * spacelike[1] + h * other[0], mu));
  }
  for (int k = 0; k < sides; ++k) s.edges.emplace_back(0, k + 1);
  for (int k = 0; k + 1 < sides; ++k) s.edges.emplace_back(k + 1, k + 2);
  return s;
}

SurfaceGraph complete_graph(const std::vector<MVector>& points) {
  SurfaceGraph s{points, {}};
  for (int i = 0; i < static_cast<int>(points.size()); ++i) {
    for (int j = i + 1; j < static_cast<int>(points.size()); ++j) s.edges.emplace_back(i, j);
  }
  return s;
}

DeformationField killing_field(const LinearMap& generator, const std::vector<MVector>& points) {
  DeformationField f;
  for (const auto& p : points) {
    f.base.push_back(p);
    f.velocity.push_back(apply(generator, p));
  }
  return f;
}

std::vector<DeformationField> nontrivial_flexes(const SurfaceGraph& surface, int mu) {
  const int n = static_cast<int>(surface.points.size());
  const int rows = static_cast<int>(surface.edges.size()) + n;
  Eigen::MatrixXd rig = Eigen::MatrixXd::Zero(rows, 4 * n);
  const Eigen::Vector4d signs(-1.0, 1.0, 1.0, 1.0);
  int r = 0;
  for (const auto& [i, j] : surface.edges) {
    const MVector c = surface.points[j] - surface.points[i];
    for (int k = 0; k < 4; ++k) {
      rig(r, 4 * j + k) = signs(k) * c[k];
      rig(r, 4 * i + k) = -signs(k) * c[k];
    }
    ++r;
  }
  for (int i = 0; i < n; ++i, ++r) {
    for (int k = 0; k < 4; ++k) rig(r, 4 * i + k) = signs(k) * surface.points[i][k];
  }
  (void)mu;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(rig, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = 1e-10 * std::max(1.0, sv.size() > 0 ? sv(0) : 1.0);
  std::vector<Eigen::VectorXd> kernel;
  for (int c = 0; c < 4 * n; ++c) {
    const double s = c < sv.size() ? sv(c) : 0.0;
    if (s <= cutoff) kernel.push_back(svd.matrixV().col(c));
  }

  // Killing span, orthonormalized (Euclidean coordinates).
  std::vector<Eigen::VectorXd> killing;
  const MVector e[4] = {MVector(1, 0, 0, 0), MVector(0, 1, 0, 0), MVector(0, 0, 1, 0),
                        MVector(0, 0, 0, 1)};
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) {
      const LinearMap gen = wedge_generator(e[a], e[b]);
      Eigen::VectorXd v(4 * n);
      for (int i = 0; i < n; ++i) {
        const MVector w = apply(gen, surface.points[i]);
        for (int k = 0; k < 4; ++k) v(4 * i + k) = w[k];
      }
      for (const auto& q : killing) v -= q.dot(v) * q;
      if (v.norm() > 1e-10) killing.push_back(v.normalized());
    }
  }

  std::vector<DeformationField> out;
  std::vector<Eigen::VectorXd> accepted;
  for (auto v : kernel) {
    for (const auto& q : killing) v -= q.dot(v) * q;
    for (const auto& q : accepted) v -= q.dot(v) * q;
    if (v.norm() < 1e-8) continue;
    v.normalize();
    accepted.push_back(v);
    DeformationField f;
    for (int i = 0; i < n; ++i) {
      f.base.push_back(surface.points[i]);
      f.velocity.emplace_back(v(4 * i), v(4 * i + 1), v(4 * i + 2), v(4 * i + 3));
    }
    out.push_back(std::move(f));
  }
  return out;
}

namespace {

MVector center_for(int eps) {
  return eps < 0 ? MVector(1, 0, 0, 0) : MVector(0, 0, 0, 1);
}

RegimeResiduals run_regime(int eps, int mu, int samples, std::mt19937_64& rng) {
  const PogorelovContext ctx{ProjectiveCenter(center_for(eps), mu)};
  RegimeResiduals res;
  res.eps = eps;
  res.mu = mu;
  res.samples = samples;
  for (int s = 0; s < samples; ++s) {
    const MVector x = sample_domain_point(ctx.center, rng);
    const MVector xp = sample_domain_point(ctx.center, rng);
    const MVector tx = sample_tangent(x, mu, rng);
    MVector txp = sample_tangent(xp, mu, rng);

    const MVector y = projective_map(ctx.center, x);
    res.projective_roundtrip =
        std::max(res.projective_roundtrip, max_diff(projective_inverse(ctx.center, y), x));
    res.projective_roundtrip_inv =
        std::max(res.projective_roundtrip_inv,
                 max_diff(projective_map(ctx.center, projective_inverse(ctx.center, y)), y));

    res.norm_difference =
        std::max(res.norm_difference, norm_difference_residual(ctx, x, xp, tx, txp));

    // Equal tangent norms: rescale X' when both norms share a sign.
    const double nx = norm_sq(tx);
    const double nxp = norm_sq(txp);
    if (nx * nxp > 0.0) {
      txp *= std::sqrt(nx / nxp);
      const double h = kFiniteDifferenceStep;
      const auto plus = global_map(ctx, retract_to_quadric(x + h * tx, mu),
                                   retract_to_quadric(xp + h * txp, mu));
      const auto minus = global_map(ctx, retract_to_quadric(x - h * tx, mu),
                                    retract_to_quadric(xp - h * txp, mu));
      const MVector d1 = (plus.first - minus.first) / (2.0 * h);
      const MVector d2 = (plus.second - minus.second) / (2.0 * h);
      res.equal_norm_difference =
          std::max(res.equal_norm_difference, std::abs(norm_sq(d1) - norm_sq(d2)));
    }

    const auto diag = global_map(ctx, x, x);
    res.diagonal = std::max({res.diagonal, max_diff(diag.first, y), max_diff(diag.second, y)});

    const LinearMap rho = random_isotropy(ctx.center.x0(), rng);
    const auto lhs = global_map(ctx, apply(rho, x), apply(rho, xp));
    const auto base = global_map(ctx, x, xp);
    res.isometry_commutation =
        std::max({res.isometry_commutation, max_diff(lhs.first, apply(rho, base.first)),
                  max_diff(lhs.second, apply(rho, base.second))});
    const MVector conj =
        projective_map(ctx.center, apply(rho, projective_inverse(ctx.center, y)));
    res.conjugation = std::max(res.conjugation, max_diff(conj, apply(rho, y)));

    res.infinitesimal_consistency =
        std::max(res.infinitesimal_consistency, infinitesimal_consistency_residual(ctx, x, tx));
  }
  return res;
}

}  // namespace

SelfTestReport run_selftest(std::uint64_t seed, int samples) {
  SelfTestReport rep;
  rep.seed = seed;
  std::mt19937_64 rng(seed);
  for (const auto& [eps, mu] : {std::pair{-1, -1}, {1, 1}, {-1, 1}, {1, -1}}) {
    rep.regimes.push_back(run_regime(eps, mu, samples, rng));
  }

  rep.generic_min_residual = std::numeric_limits<double>::infinity();
  rep.generic_min_pushforward = std::numeric_limits<double>::infinity();
  const int surfaces = std::max(1, samples / 10);
  for (const auto& [eps, mu] : {std::pair{-1, -1}, {1, 1}, {-1, 1}, {1, -1}}) {
    const PogorelovContext ctx{ProjectiveCenter(center_for(eps), mu)};
    for (int s = 0; s < surfaces; ++s) {
      // Killing fields on a rigid complete graph.
      std::vector<MVector> pts;
      const MVector hub = sample_domain_point(ctx.center, rng);
      const SurfaceGraph fan = open_fan(hub, 0.3, 6, mu);
      for (const auto& p : fan.points) pts.push_back(p);
      bool usable = true;
      for (const auto& p : pts) usable = usable && ctx.center.in_domain(p);
      if (!usable) continue;
      const SurfaceGraph rigid = complete_graph(pts);
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      LinearMap gen = LinearMap::Zero();
      const MVector e[4] = {MVector(1, 0, 0, 0), MVector(0, 1, 0, 0), MVector(0, 0, 1, 0),
                            MVector(0, 0, 0, 1)};
      for (int a = 0; a < 4; ++a) {
        for (int b = a + 1; b < 4; ++b) gen += u(rng) * wedge_generator(e[a], e[b]);
      }
      const DeformationField kf = killing_field(gen, pts);
      const double k_src = discrete_lie_residual(rigid, kf);
      const auto [rigid_img, kf_img] = push_forward(ctx, rigid, kf);
      const double k_img = discrete_lie_residual(rigid_img, kf_img);
      rep.killing_residual = std::max(rep.killing_residual, k_src);
      rep.killing_pushforward = std::max(rep.killing_pushforward, k_img);
      if ((k_src < kIsometricTol) != (k_img < kIsometricTol)) ++rep.equivalence_mismatches;

      // Nontrivial flexes of the open fan.
      for (const auto& flex : nontrivial_flexes(fan, mu)) {
        const double f_src = discrete_lie_residual(fan, flex);
        const auto [fan_img, flex_img] = push_forward(ctx, fan, flex);
        const double f_img = discrete_lie_residual(fan_img, flex_img);
        rep.flex_residual = std::max(rep.flex_residual, f_src);
        rep.flex_pushforward = std::max(rep.flex_pushforward, f_img);
        if ((f_src < kIsometricTol) != (f_img < kIsometricTol)) ++rep.equivalence_mismatches;
      }

      // Generic tangent fields are not isometric on either side.
      DeformationField g;
      for (const auto& p : fan.points) {
        g.base.push_back(p);
        g.velocity.push_back(sample_tangent(p, mu, rng));
      }
      const double g_src = discrete_lie_residual(fan, g);
      const auto [fan_img, g_img] = push_forward(ctx, fan, g);
      const double g_dst = discrete_lie_residual(fan_img, g_img);
      rep.generic_min_residual = std::min(rep.generic_min_residual, g_src);
      rep.generic_min_pushforward = std::min(rep.generic_min_pushforward, g_dst);
      if ((g_src < kIsometricTol) != (g_dst < kIsometricTol)) ++rep.equivalence_mismatches;
    }
  }
  return rep;
}

}  // namespace hyperideal
