#include "hyperideal/conemetric.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <tuple>

#include "hyperideal/minkowski.hpp"

namespace hyperideal {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;
constexpr double kAlongTol = 1e-12;
constexpr double kAngleTol = 1e-9;

int nx(int i) { return (i + 1) % 3; }
int pv(int i) { return (i + 2) % 3; }

double arc(const Vec3& a, const Vec3& b) { return std::atan2(a.cross(b).norm(), a.dot(b)); }

Vec3 tangent_toward(const Vec3& p, const Vec3& q) { return (q - p.dot(q) * p).normalized(); }

double wrap(double x, double period) {
  double r = std::fmod(x, period);
  if (r < 0.0) r += period;
  if (r >= period) r -= period;
  return r;
}

// Distance between two angles on a circle of the given circumference.
double circular_gap(double a, double b, double period) {
  const double d = wrap(a - b, period);
  return std::min(d, period - d);
}

Eigen::Matrix3d frame(const Vec3& a, const Vec3& b) {
  const Vec3 e1 = a.normalized();
  const Vec3 e2 = (b - e1.dot(b) * e1).normalized();
  Eigen::Matrix3d f;
  f.col(0) = e1;
  f.col(1) = e2;
  f.col(2) = e1.cross(e2);
  return f;
}

}  // namespace

std::string to_string(PointKind k) {
  switch (k) {
    case PointKind::F: return "f";
    case PointKind::H: return "h";
    case PointKind::Pole: return "pole";
  }
  return "?";
}

std::string to_string(TraceEnd e) {
  switch (e) {
    case TraceEnd::MaxLength: return "max_length";
    case TraceEnd::ConePoint: return "cone_point";
    case TraceEnd::Closed: return "closed";
    case TraceEnd::Boundary: return "boundary";
  }
  return "?";
}

// Triangles ------------------------------------------------------------------

SphericalTriangle SphericalTriangle::from_sides(double a, double b, double c,
                                                std::array<int, 3> corners) {
  const std::array<double, 3> s3{a, b, c};
  for (double x : s3) {
    if (!(x > 0.0) || x > M_PI) throw GeometryError("spherical side out of range");
  }
  const double s = 0.5 * (a + b + c);
  if (!(s < M_PI) || !(s - a > 0.0) || !(s - b > 0.0) || !(s - c > 0.0)) {
    throw GeometryError("sides violate the spherical triangle inequalities");
  }
  SphericalTriangle t;
  t.side = s3;
  t.corner = corners;
  for (int i = 0; i < 3; ++i) {
    const double num = std::sin(s - s3[nx(i)]) * std::sin(s - s3[pv(i)]);
    const double den = std::sin(s) * std::sin(s - s3[i]);
    t.angle[i] = 2.0 * std::atan(std::sqrt(num / den));
  }
  return t;
}

SphericalTriangle SphericalTriangle::doubly_right(double theta, std::array<int, 3> corners) {
  if (!(theta > 0.0) || !(theta < M_PI)) throw GeometryError("subdivide partition");
  SphericalTriangle t;
  t.side = {theta, M_PI / 2, M_PI / 2};
  t.angle = {theta, M_PI / 2, M_PI / 2};
  t.corner = corners;
  return t;
}

double SphericalTriangle::law_of_cosines_residual() const {
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double a = side[i], b = side[nx(i)], c = side[pv(i)];
    const double r =
        std::cos(a) - std::cos(b) * std::cos(c) - std::sin(b) * std::sin(c) * std::cos(angle[i]);
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

// Complex --------------------------------------------------------------------

void ConeSphericalMetric::finalize() {
  const int nt = static_cast<int>(triangles.size());
  const int np = static_cast<int>(points.size());
  glue_of_.assign(nt, {-1, -1, -1});
  for (int g = 0; g < static_cast<int>(gluings.size()); ++g) {
    for (const SideRef& s : {gluings[g].a, gluings[g].b}) {
      if (s.triangle < 0 || s.triangle >= nt || s.side < 0 || s.side > 2) {
        throw std::logic_error("gluing refers to a missing side");
      }
      if (glue_of_[s.triangle][s.side] != -1) {
        throw std::logic_error("side glued twice: triangle " + std::to_string(s.triangle));
      }
      glue_of_[s.triangle][s.side] = g;
    }
    const SideRef a = gluings[g].a, b = gluings[g].b;
    const auto& ta = triangles[a.triangle];
    const auto& tb = triangles[b.triangle];
    if (std::abs(ta.side[a.side] - tb.side[b.side]) > 1e-8) {
      throw std::logic_error("gluing length mismatch at gluing " + std::to_string(g));
    }
    if (ta.corner[nx(a.side)] != tb.corner[pv(b.side)] ||
        ta.corner[pv(a.side)] != tb.corner[nx(b.side)]) {
      throw std::logic_error("gluing endpoints disagree at gluing " + std::to_string(g));
    }
  }
  closed_ = true;
  for (const auto& row : glue_of_) {
    for (int g : row) closed_ = closed_ && g >= 0;
  }

  embed_.resize(nt);
  normal_.resize(nt);
  for (int t = 0; t < nt; ++t) {
    const auto& tr = triangles[t];
    for (int c : tr.corner) {
      if (c < 0 || c >= np) throw std::logic_error("triangle corner refers to a missing point");
    }
    const double b = tr.side[1], c = tr.side[2], A = tr.angle[0];
    embed_[t][0] = Vec3(0, 0, 1);
    embed_[t][1] = Vec3(std::sin(c), 0, std::cos(c));
    embed_[t][2] = Vec3(std::sin(b) * std::cos(A), std::sin(b) * std::sin(A), std::cos(b));
    for (int s = 0; s < 3; ++s) {
      normal_[t][s] = embed_[t][nx(s)].cross(embed_[t][pv(s)]).normalized();
    }
  }

  trans_.resize(nt);
  for (int t = 0; t < nt; ++t) {
    for (int s = 0; s < 3; ++s) {
      trans_[t][s] = Eigen::Matrix3d::Identity();
      const auto nb = neighbor({t, s});
      if (!nb) continue;
      const Eigen::Matrix3d e = frame(embed_[t][nx(s)], embed_[t][pv(s)]);
      const Eigen::Matrix3d f =
          frame(embed_[nb->triangle][pv(nb->side)], embed_[nb->triangle][nx(nb->side)]);
      trans_[t][s] = f * e.transpose();
    }
  }

  // Corners around each point, counterclockwise.
  std::vector<std::vector<std::pair<int, int>>> at(np);
  for (int t = 0; t < nt; ++t) {
    for (int c = 0; c < 3; ++c) at[triangles[t].corner[c]].push_back({t, c});
  }
  auto succ = [&](int t, int c) -> std::optional<std::pair<int, int>> {
    const auto nb = neighbor({t, nx(c)});
    if (!nb) return std::nullopt;
    return std::make_pair(nb->triangle, nx(nb->side));
  };
  auto pred = [&](int t, int c) -> std::optional<std::pair<int, int>> {
    const auto nb = neighbor({t, pv(c)});
    if (!nb) return std::nullopt;
    return std::make_pair(nb->triangle, pv(nb->side));
  };
  corners_.assign(np, {});
  start_.assign(nt, {0.0, 0.0, 0.0});
  for (int p = 0; p < np; ++p) {
    points[p].angle = 0.0;
    points[p].boundary = false;
    if (at[p].empty()) continue;
    std::pair<int, int> first = at[p].front();
    for (const auto& tc : at[p]) {
      if (!pred(tc.first, tc.second)) {
        first = tc;
        points[p].boundary = true;
        break;
      }
    }
    double acc = 0.0;
    std::optional<std::pair<int, int>> cur = first;
    while (cur) {
      corners_[p].push_back({cur->first, cur->second, acc});
      start_[cur->first][cur->second] = acc;
      acc += triangles[cur->first].angle[cur->second];
      cur = succ(cur->first, cur->second);
      if (cur && *cur == first) break;
      if (corners_[p].size() > at[p].size()) break;
    }
    if (corners_[p].size() != at[p].size()) {
      throw std::logic_error("point " + std::to_string(p) + " is not a manifold point");
    }
    points[p].angle = acc;
  }
}

std::optional<SideRef> ConeSphericalMetric::neighbor(SideRef s) const {
  const int g = glue_of_[s.triangle][s.side];
  if (g < 0) return std::nullopt;
  return gluings[g].a == s ? gluings[g].b : gluings[g].a;
}

int ConeSphericalMetric::gluing_index(SideRef s) const { return glue_of_[s.triangle][s.side]; }

SideRef ConeSphericalMetric::canonical(SideRef s) const {
  const auto nb = neighbor(s);
  return nb ? std::min(s, *nb) : s;
}

int ConeSphericalMetric::euler_characteristic() const {
  int unglued = 0;
  for (const auto& row : glue_of_) {
    for (int g : row) unglued += g < 0 ? 1 : 0;
  }
  int used = 0;
  for (const auto& c : corners_) used += c.empty() ? 0 : 1;
  const int edges = static_cast<int>(gluings.size()) + unglued;
  return used - edges + static_cast<int>(triangles.size());
}

double ConeSphericalMetric::total_area() const {
  double a = 0.0;
  for (const auto& t : triangles) a += t.area();
  return a;
}

double ConeSphericalMetric::gauss_bonnet_residual() const {
  double r = total_area();
  for (int p = 0; p < static_cast<int>(points.size()); ++p) {
    if (corners_[p].empty()) continue;
    r += points[p].boundary ? M_PI - points[p].angle : kTwoPi - points[p].angle;
  }
  return r - kTwoPi * euler_characteristic();
}

// Constructions --------------------------------------------------------------

ConeSphericalMetric nega_hemisphere(double alpha, const std::vector<double>& partition) {
  if (partition.empty()) throw GeometryError("empty partition");
  double sum = 0.0;
  for (double a : partition) {
    if (!(a > 0.0)) throw GeometryError("partition entries must be positive");
    if (a >= M_PI) throw GeometryError("subdivide partition");
    sum += a;
  }
  if (std::abs(sum - alpha) > 1e-9) throw GeometryError("partition does not sum to alpha");
  const int n = static_cast<int>(partition.size());
  ConeSphericalMetric m;
  m.points.push_back({PointKind::H, 0});
  for (int i = 0; i < n; ++i) m.points.push_back({PointKind::F, i});
  for (int i = 0; i < n; ++i) {
    m.triangles.push_back(SphericalTriangle::doubly_right(partition[i], {0, 1 + i, 1 + (i + 1) % n}));
  }
  for (int i = 0; i < n; ++i) m.gluings.push_back({{i, 1}, {(i + 1) % n, 2}, -1});
  m.finalize();
  return m;
}

ConeSphericalMetric build_Q_gamma(const WeightedDualGraph& g, bool relaxed) {
  const Combinatorics& c = g.gamma;
  if (static_cast<int>(g.weights.size()) != static_cast<int>(c.edges.size())) {
    throw GeometryError("weight count does not match edge count");
  }
  for (double w : g.weights) {
    if (!(w > 0.0) || !(w < M_PI)) throw GeometryError("weight outside (0, pi)");
  }
  std::vector<VertexKind> kinds = resolved_kinds(g);
  if (!relaxed) {
    for (int v = 0; v < c.num_vertices; ++v) {
      const double s = vertex_sum(g, v);
      const bool ok = kinds[v] == VertexKind::Ideal ? std::abs(s - kTwoPi) <= kEqualityBand
                                                    : s > kTwoPi;
      if (!ok) throw GeometryError("local sum violation at vertex " + std::to_string(v));
    }
  }
  ConeSphericalMetric m;
  const int nf = c.num_faces;
  for (int f = 0; f < nf; ++f) m.points.push_back({PointKind::F, f});
  for (int v = 0; v < c.num_vertices; ++v) {
    m.points.push_back({kinds[v] == VertexKind::Ideal ? PointKind::Pole : PointKind::H, v});
  }
  // tri_of[(v, e)] is the triangle of hemisphere v whose base is edge e.
  std::map<std::pair<int, int>, int> tri_of;
  for (int v = 0; v < c.num_vertices; ++v) {
    const auto& cyc = c.vertex_cycles[v];
    const int k = static_cast<int>(cyc.size());
    const int first = static_cast<int>(m.triangles.size());
    for (int i = 0; i < k; ++i) {
      const int fa = cyc[i], fb = cyc[(i + 1) % k];
      const auto e = c.edge_between_faces(fa, fb);
      if (!e) throw GeometryError("vertex cycle skips an edge at vertex " + std::to_string(v));
      tri_of[{v, *e}] = static_cast<int>(m.triangles.size());
      m.triangles.push_back(SphericalTriangle::doubly_right(g.weights[*e], {nf + v, fa, fb}));
    }
    for (int i = 0; i < k; ++i) m.gluings.push_back({{first + i, 1}, {first + (i + 1) % k, 2}, -1});
  }
  for (int e = 0; e < static_cast<int>(c.edges.size()); ++e) {
    const auto& ed = c.edges[e];
    m.gluings.push_back({{tri_of.at({ed.vertex_u, e}), 0}, {tri_of.at({ed.vertex_v, e}), 0}, e});
  }
  m.finalize();
  return m;
}

std::vector<double> metric_to_lengths(const ConeSphericalMetric& m, int num_edges) {
  std::vector<double> out(num_edges, -1.0);
  bool any = false;
  for (const auto& gl : m.gluings) {
    if (gl.mark < 0) continue;
    if (gl.mark >= num_edges) throw GeometryError("mark out of range");
    any = true;
    out[gl.mark] = m.triangles[gl.a.triangle].side[gl.a.side];
  }
  if (!any) throw GeometryError("unmarked metric");
  for (int e = 0; e < num_edges; ++e) {
    if (out[e] < 0.0) throw GeometryError("unmarked metric: edge " + std::to_string(e) + " missing");
  }
  return out;
}

// Tracing --------------------------------------------------------------------

namespace {

struct Cursor {
  int tri = -1;
  Vec3 p;
  Vec3 d;
  std::array<bool, 3> skip{false, false, false};
};

struct MarchResult {
  TraceEnd end = TraceEnd::MaxLength;
  int hit_point = -1;
  double arrival = 0.0;
  bool closed = false;
};

// Direction back toward the path at corner c of triangle t, as an unrolled
// angle at that corner's point.
double arrival_angle(const ConeSphericalMetric& m, int t, int c, const Vec3& back) {
  const auto& e = m.embedding(t);
  const Vec3 u = tangent_toward(e[c], e[nx(c)]);
  const Vec3 w = e[c].cross(u);
  double psi = std::atan2(back.dot(w), back.dot(u));
  psi = std::clamp(psi, 0.0, m.triangles[t].angle[c]);
  const int p = m.point_of(t, c);
  return wrap(m.corner_start(t, c) + psi, m.points[p].angle);
}

// Follows the geodesic from cur until it ends. closure, when given, is the
// side the path started on together with its start position and direction.
MarchResult march(const ConeSphericalMetric& m, Cursor cur, double& length, double max_length,
                  std::vector<Crossing>& out, const std::optional<std::tuple<SideRef, Vec3, Vec3>>& closure) {
  MarchResult r;
  for (;;) {
    const int t = cur.tri;
    double best = std::numeric_limits<double>::infinity();
    int side = -1;
    for (int k = 0; k < 3; ++k) {
      if (cur.skip[k]) continue;
      const Vec3& n = m.side_normal({t, k});
      const double a = std::max(0.0, cur.p.dot(n));
      const double b = cur.d.dot(n);
      const double s = std::atan2(a, -b);
      if (s < best) {
        best = s;
        side = k;
      }
    }
    if (side < 0) throw std::logic_error("trace has no exit");
    const double remaining = max_length - length;
    if (best >= remaining) {
      const Vec3 q = std::cos(remaining) * cur.p + std::sin(remaining) * cur.d;
      out.push_back({t, cur.p, q, -1, remaining});
      length = max_length;
      r.end = TraceEnd::MaxLength;
      return r;
    }
    const Vec3 q = std::cos(best) * cur.p + std::sin(best) * cur.d;
    const Vec3 dq = -std::sin(best) * cur.p + std::cos(best) * cur.d;
    out.push_back({t, cur.p, q, side, best});
    length += best;
    const auto& e = m.embedding(t);
    for (int c : {nx(side), pv(side)}) {
      if (arc(q, e[c]) < kConeHitTol) {
        r.end = TraceEnd::ConePoint;
        r.hit_point = m.point_of(t, c);
        r.arrival = arrival_angle(m, t, c, -dq);
        return r;
      }
    }
    const auto nb = m.neighbor({t, side});
    if (!nb) {
      r.end = TraceEnd::Boundary;
      return r;
    }
    const Eigen::Matrix3d& R = m.transition({t, side});
    cur.tri = nb->triangle;
    cur.p = (R * q).normalized();
    cur.d = R * dq;
    cur.d = (cur.d - cur.d.dot(cur.p) * cur.p).normalized();
    cur.skip = {false, false, false};
    cur.skip[nb->side] = true;
    if (closure) {
      const auto& [ref, p0, d0] = *closure;
      if (*nb == ref && (cur.p - p0).norm() < kClosureTol && (cur.d - d0).norm() < kClosureTol) {
        r.end = TraceEnd::Closed;
        return r;
      }
    }
  }
}

// Leaves point `point` in direction phi. Returns false when the direction
// runs along a side; then `along` holds (triangle, corner, towards-corner).
struct Departure {
  Cursor cur;
  bool along = false;
  int tri = -1;
  int from_corner = -1;
  int to_corner = -1;
};

Departure depart(const ConeSphericalMetric& m, int point, double phi) {
  const auto& cs = m.corners_at(point);
  if (cs.empty()) throw GeometryError("point has no corners");
  const double theta = m.points[point].angle;
  phi = wrap(phi, theta);
  const CornerRef* pick = &cs.front();
  for (const auto& c : cs) {
    if (c.start <= phi) pick = &c;
  }
  const int t = pick->triangle, c = pick->corner;
  const double A = m.triangles[t].angle[c];
  double psi = phi - pick->start;
  // Points on a boundary have a gap after their last corner.
  if (psi > A && m.points[point].boundary) {
    if (psi - A > kAlongTol) throw GeometryError("direction leaves the surface");
    psi = A;
  }
  Departure dep;
  dep.tri = t;
  dep.from_corner = c;
  if (psi < kAlongTol) {
    dep.along = true;
    dep.to_corner = nx(c);
    return dep;
  }
  if (A - psi < kAlongTol) {
    dep.along = true;
    dep.to_corner = pv(c);
    return dep;
  }
  const auto& e = m.embedding(t);
  const Vec3 u = tangent_toward(e[c], e[nx(c)]);
  const Vec3 w = e[c].cross(u);
  dep.cur.tri = t;
  dep.cur.p = e[c];
  dep.cur.d = std::cos(psi) * u + std::sin(psi) * w;
  dep.cur.skip = {false, false, false};
  dep.cur.skip[nx(c)] = true;
  dep.cur.skip[pv(c)] = true;
  return dep;
}

// Traces one leg out of a point; stops at the first vertex.
MarchResult leg(const ConeSphericalMetric& m, int point, double phi, double& length,
                double max_length, std::vector<Crossing>& out) {
  const Departure dep = depart(m, point, phi);
  if (!dep.along) return march(m, dep.cur, length, max_length, out, std::nullopt);
  const auto& tr = m.triangles[dep.tri];
  const auto& e = m.embedding(dep.tri);
  // The side between the two corners is the one opposite the third.
  const int side = 3 - dep.from_corner - dep.to_corner;
  const double L = tr.side[side];
  MarchResult r;
  const double remaining = max_length - length;
  if (L >= remaining) {
    const Vec3 u = tangent_toward(e[dep.from_corner], e[dep.to_corner]);
    const Vec3 q = std::cos(remaining) * e[dep.from_corner] + std::sin(remaining) * u;
    out.push_back({dep.tri, e[dep.from_corner], q, side, remaining});
    length = max_length;
    return r;
  }
  out.push_back({dep.tri, e[dep.from_corner], e[dep.to_corner], side, L});
  length += L;
  r.end = TraceEnd::ConePoint;
  r.hit_point = tr.corner[dep.to_corner];
  const double start = m.corner_start(dep.tri, dep.to_corner);
  // Arriving along side (to+2) the back direction ends the corner's wedge;
  // along side (to+1) it starts it.
  const double back = dep.to_corner == nx(dep.from_corner) ? start + tr.angle[dep.to_corner] : start;
  r.arrival = wrap(back, m.points[r.hit_point].angle);
  return r;
}

}  // namespace

GeodesicPath geodesic_trace(const ConeSphericalMetric& m, const SideStart& start,
                            double max_length) {
  const int t = start.triangle, s = start.side;
  if (t < 0 || t >= static_cast<int>(m.triangles.size()) || s < 0 || s > 2) {
    throw GeometryError("start side does not exist");
  }
  if (!(start.fraction > 0.0) || !(start.fraction < 1.0)) {
    throw GeometryError("start must lie strictly inside the side");
  }
  if (!(start.angle > 0.0) || !(start.angle < M_PI)) throw GeometryError("start angle outside (0, pi)");
  const auto& e = m.embedding(t);
  const double L = m.triangles[t].side[s] * start.fraction;
  const Vec3 u = tangent_toward(e[nx(s)], e[pv(s)]);
  const Vec3 p = std::cos(L) * e[nx(s)] + std::sin(L) * u;
  const Vec3 along = -std::sin(L) * e[nx(s)] + std::cos(L) * u;
  const Vec3 d = std::cos(start.angle) * along + std::sin(start.angle) * p.cross(along);
  Cursor cur;
  cur.tri = t;
  cur.p = p;
  cur.d = d;
  cur.skip[s] = true;
  GeodesicPath path;
  double length = 0.0;
  const MarchResult r = march(m, cur, length, max_length, path.crossings,
                              std::make_tuple(SideRef{t, s}, p, d));
  path.length = length;
  path.end = r.end;
  path.hit_point = r.hit_point;
  path.arrival = r.arrival;
  return path;
}

GeodesicPath geodesic_trace_from(const ConeSphericalMetric& m, int point, double direction,
                                 double max_length, int pass_cones) {
  if (point < 0 || point >= static_cast<int>(m.points.size())) throw GeometryError("no such point");
  GeodesicPath path;
  double length = 0.0;
  const double theta0 = m.points[point].angle;
  const double phi0 = wrap(direction, theta0);
  int at = point;
  double phi = phi0;
  for (;;) {
    const MarchResult r = leg(m, at, phi, length, max_length, path.crossings);
    path.end = r.end;
    path.hit_point = r.hit_point;
    path.arrival = r.arrival;
    if (r.end != TraceEnd::ConePoint || pass_cones == 0 || length >= max_length) break;
    const double theta = m.points[r.hit_point].angle;
    const double next = wrap(r.arrival + pass_cones * M_PI, theta);
    if (r.hit_point == point && circular_gap(next, phi0, theta0) < kClosureTol) {
      path.end = TraceEnd::Closed;
      break;
    }
    at = r.hit_point;
    phi = next;
  }
  path.length = length;
  return path;
}

bool self_intersects(const ConeSphericalMetric& m, const GeodesicPath& path) {
  (void)m;
  const auto& cs = path.crossings;
  auto on_arc = [](const Vec3& x, const Vec3& a, const Vec3& b) {
    return std::abs(arc(a, x) + arc(x, b) - arc(a, b)) < 1e-10;
  };
  auto near_end = [](const Vec3& x, const Vec3& a, const Vec3& b) {
    return arc(x, a) < 1e-9 || arc(x, b) < 1e-9;
  };
  for (size_t i = 0; i < cs.size(); ++i) {
    for (size_t j = i + 1; j < cs.size(); ++j) {
      if (cs[i].triangle != cs[j].triangle) continue;
      const Vec3 na = cs[i].entry.cross(cs[i].exit);
      const Vec3 nb = cs[j].entry.cross(cs[j].exit);
      const Vec3 x = na.cross(nb);
      if (x.norm() < 1e-14) {
        // Same great circle: overlapping arcs count as an intersection.
        if (on_arc(cs[j].entry, cs[i].entry, cs[i].exit) ||
            on_arc(cs[i].entry, cs[j].entry, cs[j].exit)) {
          return true;
        }
        continue;
      }
      for (const Vec3& y : {Vec3(x.normalized()), Vec3(-x.normalized())}) {
        if (on_arc(y, cs[i].entry, cs[i].exit) && on_arc(y, cs[j].entry, cs[j].exit) &&
            !(near_end(y, cs[i].entry, cs[i].exit) && near_end(y, cs[j].entry, cs[j].exit))) {
          return true;
        }
      }
    }
  }
  return false;
}

// Saddle connections ---------------------------------------------------------

namespace {

struct Window {
  int tri;
  int side;
  Eigen::Matrix3d M;  // triangle coordinates -> source frame
  double lo;
  double hi;
  int depth;
};

// Connections out of corner c of triangle t by corridor unfolding.
void unfold_corner(const ConeSphericalMetric& m, int t0, int c0, int budget,
                   std::vector<SaddleConnection>& out, bool& exhausted) {
  const auto& e0 = m.embedding(t0);
  const Vec3 p0 = e0[c0];
  const Vec3 u0 = tangent_toward(p0, e0[nx(c0)]);
  const Vec3 w0 = p0.cross(u0);
  const int from = m.point_of(t0, c0);
  const double start0 = m.corner_start(t0, c0);
  auto dir = [&](double psi) { return Vec3(std::cos(psi) * u0 + std::sin(psi) * w0); };
  std::vector<Window> stack{{t0, c0, Eigen::Matrix3d::Identity(), 0.0, m.triangles[t0].angle[c0], 1}};
  while (!stack.empty()) {
    const Window W = stack.back();
    stack.pop_back();
    const auto nb = m.neighbor({W.tri, W.side});
    if (!nb) continue;
    const int t2 = nb->triangle, e = nb->side;
    const Eigen::Matrix3d M2 = W.M * m.transition({W.tri, W.side}).transpose();
    const auto& emb = m.embedding(t2);
    bool contains_antipode = true;
    for (int k = 0; k < 3; ++k) {
      if ((-p0).dot(M2 * m.side_normal({t2, k})) < -1e-12) contains_antipode = false;
    }
    const Vec3 V = M2 * emb[e];
    const Vec3 dlo = dir(W.lo), dhi = dir(W.hi);
    const double left = V.dot(p0.cross(dlo));
    const double right = V.dot(p0.cross(dhi));
    const bool L = left > 1e-14, R = right < -1e-14;
    if (L && R) {
      const double psi = W.lo + std::atan2(left, V.dot(dlo));
      const double dist = arc(p0, V);
      if (dist < M_PI - 1e-12) {
        SaddleConnection sc;
        sc.from = from;
        sc.to = m.point_of(t2, e);
        sc.out_dir = wrap(start0 + psi, m.points[from].angle);
        const Vec3 back = M2.transpose() * tangent_toward(V, p0);
        sc.in_dir = arrival_angle(m, t2, e, back);
        sc.length = dist;
        sc.depth = W.depth;
        out.push_back(sc);
      }
      if (contains_antipode) continue;
      if (W.depth >= budget) {
        exhausted = true;
        continue;
      }
      stack.push_back({t2, nx(e), M2, W.lo, psi, W.depth + 1});
      stack.push_back({t2, pv(e), M2, psi, W.hi, W.depth + 1});
      continue;
    }
    if (contains_antipode) continue;
    if (W.depth >= budget) {
      exhausted = true;
      continue;
    }
    stack.push_back({t2, L ? nx(e) : pv(e), M2, W.lo, W.hi, W.depth + 1});
  }
}

std::vector<SaddleConnection> side_connections(const ConeSphericalMetric& m) {
  std::vector<SaddleConnection> out;
  for (int t = 0; t < static_cast<int>(m.triangles.size()); ++t) {
    const auto& tr = m.triangles[t];
    for (int s = 0; s < 3; ++s) {
      if (m.canonical({t, s}) != SideRef{t, s}) continue;
      const int g = m.gluing_index({t, s});
      const int mark = g >= 0 ? m.gluings[g].mark : -1;
      const int a = nx(s), b = pv(s);
      SaddleConnection fwd;
      fwd.from = tr.corner[a];
      fwd.to = tr.corner[b];
      fwd.out_dir = wrap(m.corner_start(t, a), m.points[fwd.from].angle);
      fwd.in_dir = wrap(m.corner_start(t, b) + tr.angle[b], m.points[fwd.to].angle);
      fwd.length = tr.side[s];
      fwd.along = SideRef{t, s};
      fwd.mark = mark;
      SaddleConnection rev = fwd;
      std::swap(rev.from, rev.to);
      std::swap(rev.out_dir, rev.in_dir);
      out.push_back(fwd);
      out.push_back(rev);
    }
  }
  return out;
}

bool same_connection(const SaddleConnection& a, const SaddleConnection& b,
                     const ConeSphericalMetric& m) {
  return a.from == b.from && a.to == b.to && std::abs(a.length - b.length) < 1e-8 &&
         circular_gap(a.out_dir, b.out_dir, m.points[a.from].angle) < 1e-8;
}

void sort_unique(std::vector<SaddleConnection>& v, const ConeSphericalMetric& m) {
  std::sort(v.begin(), v.end(), [](const SaddleConnection& a, const SaddleConnection& b) {
    return std::tie(a.from, a.out_dir, a.to, a.length) < std::tie(b.from, b.out_dir, b.to, b.length);
  });
  std::vector<SaddleConnection> out;
  for (const auto& c : v) {
    bool dup = false;
    for (auto it = out.rbegin(); it != out.rend() && it->from == c.from; ++it) {
      if (same_connection(*it, c, m)) {
        dup = true;
        break;
      }
    }
    if (!dup) out.push_back(c);
  }
  v = std::move(out);
}

}  // namespace

std::vector<SaddleConnection> saddle_connections(const ConeSphericalMetric& m, int depth,
                                                 bool* exhausted) {
  const int np = static_cast<int>(m.points.size());
  std::vector<std::future<std::pair<std::vector<SaddleConnection>, bool>>> jobs;
  for (int p = 0; p < np; ++p) {
    jobs.push_back(std::async(std::launch::async, [&m, p, depth] {
      std::vector<SaddleConnection> out;
      bool ex = false;
      for (const auto& c : m.corners_at(p)) unfold_corner(m, c.triangle, c.corner, depth, out, ex);
      return std::make_pair(out, ex);
    }));
  }
  std::vector<SaddleConnection> all = side_connections(m);
  bool ex = false;
  for (auto& j : jobs) {
    auto [v, e] = j.get();
    ex = ex || e;
    all.insert(all.end(), v.begin(), v.end());
  }
  sort_unique(all, m);
  if (exhausted) *exhausted = ex;
  return all;
}

// Shooting -------------------------------------------------------------------

namespace {

struct Shot {
  double phi;
  GeodesicPath path;
};

std::vector<std::pair<int, int>> signature(const GeodesicPath& p) {
  std::vector<std::pair<int, int>> s;
  for (const auto& c : p.crossings) {
    if (c.exit_side >= 0) s.push_back({c.triangle, c.exit_side});
  }
  return s;
}

std::optional<SaddleConnection> from_trace(const ConeSphericalMetric& m, int point, double phi,
                                           const GeodesicPath& p) {
  if (p.end != TraceEnd::ConePoint) return std::nullopt;
  SaddleConnection sc;
  sc.from = point;
  sc.to = p.hit_point;
  sc.out_dir = wrap(phi, m.points[point].angle);
  sc.in_dir = p.arrival;
  sc.length = p.length;
  sc.depth = static_cast<int>(p.crossings.size());
  return sc;
}

// Two shots from a corner window whose crossing sequences part at some
// triangle are separated by that triangle's third corner. Develops the
// common corridor to aim at it, bisecting the bracket if the aim misses.
std::optional<SaddleConnection> resolve(const ConeSphericalMetric& m, int point, const CornerRef& cr,
                                        double lo, double hi, double max_length) {
  const auto& e0 = m.embedding(cr.triangle);
  const Vec3 p0 = e0[cr.corner];
  const Vec3 u0 = tangent_toward(p0, e0[nx(cr.corner)]);
  const Vec3 w0 = p0.cross(u0);
  const double theta = m.points[point].angle;
  GeodesicPath a = geodesic_trace_from(m, point, lo, max_length);
  GeodesicPath b = geodesic_trace_from(m, point, hi, max_length);
  for (int iter = 0; iter < 60; ++iter) {
    const auto sa = signature(a), sb = signature(b);
    size_t k = 0;
    while (k < sa.size() && k < sb.size() && sa[k] == sb[k]) ++k;
    if (k >= sa.size() || k >= sb.size() || sa[k].first != sb[k].first) return std::nullopt;
    const int T = sa[k].first;
    const int corner = 3 - sa[k].second - sb[k].second;
    Eigen::Matrix3d M = Eigen::Matrix3d::Identity();
    for (size_t i = 0; i < k; ++i) {
      M = M * m.transition({sa[i].first, sa[i].second}).transpose();
    }
    const Vec3 V = M * m.embedding(T)[corner];
    const double beta = std::atan2(V.dot(w0), V.dot(u0));
    for (double cand : {beta, beta + M_PI}) {
      const double psi = cr.start + wrap(cand, kTwoPi);
      if (psi < lo - 1e-9 || psi > hi + 1e-9) continue;
      const GeodesicPath hit = geodesic_trace_from(m, point, psi, max_length);
      if (hit.end == TraceEnd::ConePoint && hit.hit_point == m.point_of(T, corner)) {
        return from_trace(m, point, psi, hit);
      }
    }
    const double mid = 0.5 * (lo + hi);
    GeodesicPath c = geodesic_trace_from(m, point, mid, max_length);
    if (c.end == TraceEnd::ConePoint) return from_trace(m, point, wrap(mid, theta), c);
    const auto sc = signature(c);
    const bool with_a = sc.size() > k && sc[k] == sa[k] &&
                        std::equal(sa.begin(), sa.begin() + static_cast<long>(k), sc.begin());
    if (with_a) {
      lo = mid;
      a = std::move(c);
    } else {
      hi = mid;
      b = std::move(c);
    }
  }
  return std::nullopt;
}

std::vector<SaddleConnection> shoot_point(const ConeSphericalMetric& m, int point, int per_corner,
                                          unsigned long long seed, double max_length, int& shots) {
  std::vector<SaddleConnection> out;
  std::mt19937_64 rng(seed * 1000003ULL + static_cast<unsigned long long>(point));
  std::uniform_real_distribution<double> jitter(0.05, 0.95);
  for (const auto& cr : m.corners_at(point)) {
    const double A = m.triangles[cr.triangle].angle[cr.corner];
    std::vector<Shot> fan;
    for (int j = 0; j < per_corner; ++j) {
      const double phi = cr.start + A * (j + jitter(rng)) / per_corner;
      fan.push_back({phi, geodesic_trace_from(m, point, phi, max_length)});
      ++shots;
    }
    for (size_t j = 0; j < fan.size(); ++j) {
      if (auto sc = from_trace(m, point, fan[j].phi, fan[j].path)) out.push_back(*sc);
      if (j + 1 == fan.size()) break;
      if (signature(fan[j].path) == signature(fan[j + 1].path)) continue;
      if (fan[j].path.end == TraceEnd::ConePoint || fan[j + 1].path.end == TraceEnd::ConePoint) {
        continue;
      }
      if (auto sc = resolve(m, point, cr, fan[j].phi, fan[j + 1].phi, max_length)) out.push_back(*sc);
    }
  }
  return out;
}

// Smooth closed geodesics: shoot from points on a side, and for every shot
// that comes back across the same side, solve for the great circle fixed by
// the holonomy of that corridor.
std::vector<ClosedGeodesic> shoot_smooth(const ConeSphericalMetric& m, SideRef s, int count,
                                         unsigned long long seed, double bound, int& shots) {
  std::vector<ClosedGeodesic> out;
  const auto nb = m.neighbor(s);
  if (!nb) return out;
  std::mt19937_64 rng(seed * 7919ULL + static_cast<unsigned long long>(s.triangle * 3 + s.side));
  std::uniform_real_distribution<double> unit(0.02, 0.98);
  const auto& e = m.embedding(s.triangle);
  const Vec3& nS = m.side_normal(s);
  const double Ls = m.triangles[s.triangle].side[s.side];
  for (int k = 0; k < count; ++k) {
    SideStart st{s.triangle, s.side, unit(rng), M_PI * unit(rng)};
    const GeodesicPath path = geodesic_trace(m, st, bound);
    ++shots;
    if (path.end == TraceEnd::Closed) {
      ClosedGeodesic c;
      c.smooth = st;
      c.length = path.length;
      out.push_back(c);
      continue;
    }
    // First return into s.triangle across s.
    Eigen::Matrix3d H = Eigen::Matrix3d::Identity();
    bool back = false;
    for (const auto& cr : path.crossings) {
      if (cr.exit_side < 0) break;
      H = m.transition({cr.triangle, cr.exit_side}) * H;
      if (SideRef{cr.triangle, cr.exit_side} == *nb) {
        back = true;
        break;
      }
    }
    if (!back) continue;
    const Eigen::AngleAxisd aa(H);
    if (std::abs(aa.angle()) < 1e-9) continue;
    const Vec3 p = path.crossings.front().entry;
    const Vec3 d0 = (path.crossings.size() > 1 || path.crossings.front().length > 0)
                        ? tangent_toward(p, path.crossings.front().exit)
                        : Vec3::Zero();
    Vec3 axis = aa.axis();
    if (axis.dot(p.cross(d0)) < 0.0) axis = -axis;
    Vec3 x = axis.cross(nS);
    if (x.norm() < 1e-12) continue;
    x.normalize();
    if (arc(e[nx(s.side)], x) + arc(x, e[pv(s.side)]) > Ls + 1e-12) x = -x;
    if (std::abs(arc(e[nx(s.side)], x) + arc(x, e[pv(s.side)]) - Ls) > 1e-10) continue;
    const double frac = arc(e[nx(s.side)], x) / Ls;
    if (!(frac > 1e-9) || !(frac < 1 - 1e-9)) continue;
    const Vec3 dir = axis.cross(x);
    const Vec3 along = tangent_toward(x, e[pv(s.side)]);
    const double ang = std::atan2(dir.dot(x.cross(along)), dir.dot(along));
    if (!(ang > 0.0) || !(ang < M_PI)) continue;
    SideStart fixed{s.triangle, s.side, frac, ang};
    const GeodesicPath check = geodesic_trace(m, fixed, bound);
    ++shots;
    if (check.end == TraceEnd::Closed) {
      ClosedGeodesic c;
      c.smooth = fixed;
      c.length = check.length;
      out.push_back(c);
    }
  }
  return out;
}

bool junction_ok(const ConeSphericalMetric& m, const SaddleConnection& in,
                 const SaddleConnection& out) {
  const double theta = m.points[in.to].angle;
  const double delta = wrap(out.out_dir - in.in_dir, theta);
  return delta >= M_PI - kAngleTol && theta - delta >= M_PI - kAngleTol;
}

double junction_margin(const ConeSphericalMetric& m, const SaddleConnection& in,
                       const SaddleConnection& out) {
  const double theta = m.points[in.to].angle;
  const double delta = wrap(out.out_dir - in.in_dir, theta);
  return std::min(delta, theta - delta) - M_PI;
}

}  // namespace

FalsifierResult closed_geodesic_falsifier(const ConeSphericalMetric& m,
                                          const FalsifierBudget& budget) {
  FalsifierResult res;
  const double bound = kTwoPi + budget.margin;
  bool ex = false;
  std::vector<SaddleConnection> conns = saddle_connections(m, budget.depth, &ex);
  res.budget_exhausted = ex;

  // Shooting: half the budget from vertices, half from sides.
  const int np = static_cast<int>(m.points.size());
  int corner_count = 0;
  for (int p = 0; p < np; ++p) corner_count += static_cast<int>(m.corners_at(p).size());
  const int per_corner = std::max(2, budget.shots / 2 / std::max(1, corner_count));
  std::vector<std::future<std::pair<std::vector<SaddleConnection>, int>>> jobs;
  for (int p = 0; p < np; ++p) {
    jobs.push_back(std::async(std::launch::async, [&m, p, per_corner, &budget, bound] {
      int shots = 0;
      auto v = shoot_point(m, p, per_corner, budget.seed, bound, shots);
      return std::make_pair(v, shots);
    }));
  }
  for (auto& j : jobs) {
    auto [v, s] = j.get();
    res.shots += s;
    for (auto& c : v) {
      if (c.length <= bound) conns.push_back(c);
    }
  }
  sort_unique(conns, m);
  res.connections = static_cast<int>(conns.size());

  std::vector<ClosedGeodesic> smooth;
  std::vector<SideRef> sides;
  for (int t = 0; t < static_cast<int>(m.triangles.size()); ++t) {
    for (int s = 0; s < 3; ++s) {
      if (m.neighbor({t, s})) sides.push_back({t, s});
    }
  }
  const int per_side = std::max(1, budget.shots / 2 / std::max<int>(1, static_cast<int>(sides.size())));
  {
    std::vector<std::future<std::pair<std::vector<ClosedGeodesic>, int>>> sj;
    for (const SideRef& s : sides) {
      sj.push_back(std::async(std::launch::async, [&m, s, per_side, &budget, bound] {
        int shots = 0;
        auto v = shoot_smooth(m, s, per_side, budget.seed, bound, shots);
        return std::make_pair(v, shots);
      }));
    }
    for (auto& j : sj) {
      auto [v, s] = j.get();
      res.shots += s;
      smooth.insert(smooth.end(), v.begin(), v.end());
    }
  }

  // Links of regular apexes, for the hemisphere-boundary exemption.
  std::map<int, std::multiset<SideRef>> links;
  for (int p = 0; p < np; ++p) {
    if (m.points[p].kind != PointKind::Pole) continue;
    if (std::abs(m.points[p].angle - kTwoPi) > kEqualityBand) continue;
    for (const auto& c : m.corners_at(p)) links[p].insert(m.canonical({c.triangle, c.corner}));
  }
  auto exempt_point = [&](const std::vector<int>& idx) -> int {
    std::multiset<SideRef> used;
    for (int i : idx) {
      if (!conns[i].along) return -1;
      used.insert(*conns[i].along);
    }
    for (const auto& [p, link] : links) {
      if (link == used) return p;
    }
    return -1;
  };

  std::vector<std::vector<int>> out_of(np);
  for (int i = 0; i < static_cast<int>(conns.size()); ++i) out_of[conns[i].from].push_back(i);

  std::optional<std::pair<double, std::vector<int>>> best;
  std::set<int> exempt_seen;
  long expansions = 0;
  const long cap = 5'000'000;
  std::vector<int> path;
  auto record = [&](double len) {
    const int p = exempt_point(path);
    if (p >= 0) {
      ClosedGeodesic c;
      for (int i : path) c.legs.push_back(conns[i]);
      c.length = len;
      c.hemisphere_boundary = true;
      c.link_point = p;
      res.exempt.push_back(c);
      return;
    }
    if (!best || len < best->first - 1e-12 ||
        (std::abs(len - best->first) <= 1e-12 && path < best->second)) {
      best = std::make_pair(len, path);
    }
  };
  std::function<void(int, double)> dfs = [&](int first, double len) {
    if (++expansions > cap) {
      res.budget_exhausted = true;
      return;
    }
    const SaddleConnection& last = conns[path.back()];
    for (int j : out_of[last.to]) {
      if (j <= first) continue;
      const double nl = len + conns[j].length;
      if (nl > bound) continue;
      if (!junction_ok(m, last, conns[j])) continue;
      path.push_back(j);
      if (conns[j].to == conns[first].from && junction_ok(m, conns[j], conns[first])) record(nl);
      if (path.size() < 64) dfs(first, nl);
      path.pop_back();
    }
  };
  for (int i = 0; i < static_cast<int>(conns.size()); ++i) {
    if (conns[i].length > bound) continue;
    path = {i};
    if (conns[i].to == conns[i].from && junction_ok(m, conns[i], conns[i])) record(conns[i].length);
    dfs(i, conns[i].length);
  }

  std::optional<ClosedGeodesic> witness;
  if (best) {
    ClosedGeodesic c;
    for (int i : best->second) c.legs.push_back(conns[i]);
    c.length = best->first;
    witness = c;
  }
  std::sort(smooth.begin(), smooth.end(), [](const ClosedGeodesic& a, const ClosedGeodesic& b) {
    return std::tie(a.length, a.smooth->triangle, a.smooth->side, a.smooth->fraction) <
           std::tie(b.length, b.smooth->triangle, b.smooth->side, b.smooth->fraction);
  });
  if (!smooth.empty() && smooth.front().length <= bound &&
      (!witness || smooth.front().length < witness->length - 1e-12)) {
    witness = smooth.front();
  }
  res.witness = witness;
  return res;
}

WitnessCheck verify_witness(const ConeSphericalMetric& m, const ClosedGeodesic& c) {
  WitnessCheck w;
  if (c.smooth) {
    const GeodesicPath p = geodesic_trace(m, *c.smooth, c.length + 1e-6);
    w.closed = p.end == TraceEnd::Closed;
    w.geodesic = w.closed;
    w.length_error = std::abs(p.length - c.length);
    w.min_angle_margin = 0.0;
    return w;
  }
  if (c.legs.empty()) return w;
  w.closed = true;
  w.geodesic = true;
  double total = 0.0;
  for (const auto& l : c.legs) {
    const GeodesicPath p = geodesic_trace_from(m, l.from, l.out_dir, l.length + 1e-6);
    if (p.end != TraceEnd::ConePoint || p.hit_point != l.to ||
        circular_gap(p.arrival, l.in_dir, m.points[l.to].angle) > 1e-7) {
      w.closed = false;
    }
    total += p.length;
  }
  w.length_error = std::abs(total - c.length);
  double margin = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < c.legs.size(); ++i) {
    const auto& a = c.legs[i];
    const auto& b = c.legs[(i + 1) % c.legs.size()];
    if (a.to != b.from) w.closed = false;
    margin = std::min(margin, junction_margin(m, a, b));
  }
  w.min_angle_margin = margin;
  w.geodesic = margin >= -kAngleTol;
  return w;
}

// Recovery -------------------------------------------------------------------

RecoveredGraph recover_combinatorics(const ConeSphericalMetric& m, int depth) {
  const auto conns = saddle_connections(m, depth);
  RecoveredGraph g;
  std::map<std::pair<int, int>, std::vector<double>> seen;  // (from f, to f) -> lengths
  for (int p = 0; p < static_cast<int>(m.points.size()); ++p) {
    if (m.points[p].kind != PointKind::F) continue;
    const double theta = m.points[p].angle;
    const double k = theta / M_PI;
    const int mult = static_cast<int>(std::lround(k));
    if (std::abs(k - mult) > 1e-8 || mult < 3) {
      throw GeometryError("not a Q_Gamma metric: cone angle at point " + std::to_string(p));
    }
    g.nodes.push_back(m.points[p].label);
    const SaddleConnection* shortest = nullptr;
    for (const auto& c : conns) {
      if (c.from == p && (!shortest || c.length < shortest->length - 1e-12)) shortest = &c;
    }
    if (!shortest) throw GeometryError("not a Q_Gamma metric: isolated point");
    double phi0 = shortest->out_dir;
    if (m.points[shortest->to].kind != PointKind::F) phi0 += M_PI / 2;
    auto find = [&](double phi) {
      std::vector<const SaddleConnection*> hits;
      for (const auto& c : conns) {
        if (c.from == p && circular_gap(c.out_dir, phi, theta) < 1e-7) hits.push_back(&c);
      }
      return hits;
    };
    for (int j = 0; j < mult; ++j) {
      const auto edge = find(phi0 + j * M_PI);
      if (edge.size() != 1 || m.points[edge[0]->to].kind != PointKind::F) {
        throw GeometryError("not a Q_Gamma metric: no unique edge at point " + std::to_string(p));
      }
      seen[{m.points[p].label, m.points[edge[0]->to].label}].push_back(edge[0]->length);
      const auto radius = find(phi0 + j * M_PI + M_PI / 2);
      if (radius.size() != 1 || m.points[radius[0]->to].kind == PointKind::F ||
          std::abs(radius[0]->length - M_PI / 2) > 1e-8) {
        throw GeometryError("not a Q_Gamma metric: no radius at point " + std::to_string(p));
      }
      ++g.radii;
    }
  }
  std::sort(g.nodes.begin(), g.nodes.end());
  for (auto& [key, lens] : seen) {
    if (key.first >= key.second) continue;
    const auto it = seen.find({key.second, key.first});
    if (it == seen.end() || it->second.size() != lens.size()) {
      throw GeometryError("not a Q_Gamma metric: edge seen from one end only");
    }
    std::vector<double> a = lens, b = it->second;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    for (size_t i = 0; i < a.size(); ++i) {
      if (std::abs(a[i] - b[i]) > 1e-8) throw GeometryError("not a Q_Gamma metric: edge lengths differ");
      g.edges.push_back({key.first, key.second, a[i]});
    }
  }
  for (const auto& [key, lens] : seen) {
    if (key.first == key.second) throw GeometryError("not a Q_Gamma metric: loop edge");
  }
  return g;
}

// Comparison -----------------------------------------------------------------

namespace {

using Label = std::pair<int, int>;  // (kind, label)

struct CanonTri {
  std::array<Label, 3> labels;
  std::array<double, 3> sides;
  bool operator<(const CanonTri& o) const {
    return std::tie(labels, sides) < std::tie(o.labels, o.sides);
  }
};

Label label_of(const ConeSphericalMetric& m, int p) {
  return {static_cast<int>(m.points[p].kind), m.points[p].label};
}

// Rotation of triangle t starting at its smallest label.
int rotation(const ConeSphericalMetric& m, int t) {
  const auto& c = m.triangles[t].corner;
  int r = 0;
  for (int i = 1; i < 3; ++i) {
    if (label_of(m, c[i]) < label_of(m, c[r])) r = i;
  }
  return r;
}

CanonTri canon_tri(const ConeSphericalMetric& m, int t) {
  const int r = rotation(m, t);
  CanonTri ct;
  for (int i = 0; i < 3; ++i) {
    ct.labels[i] = label_of(m, m.triangles[t].corner[(r + i) % 3]);
    ct.sides[i] = m.triangles[t].side[(r + i) % 3];
  }
  return ct;
}

using SideKey = std::pair<std::array<Label, 3>, int>;

SideKey side_key(const ConeSphericalMetric& m, SideRef s) {
  const int r = rotation(m, s.triangle);
  return {canon_tri(m, s.triangle).labels, (s.side - r + 3) % 3};
}

}  // namespace

bool isomorphic(const ConeSphericalMetric& a, const ConeSphericalMetric& b, double tol,
                std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (a.triangles.size() != b.triangles.size()) return fail("triangle counts differ");
  if (a.gluings.size() != b.gluings.size()) return fail("gluing counts differ");
  std::vector<CanonTri> ta, tb;
  for (int t = 0; t < static_cast<int>(a.triangles.size()); ++t) ta.push_back(canon_tri(a, t));
  for (int t = 0; t < static_cast<int>(b.triangles.size()); ++t) tb.push_back(canon_tri(b, t));
  auto by_labels = [](const CanonTri& x, const CanonTri& y) { return x.labels < y.labels; };
  std::sort(ta.begin(), ta.end(), by_labels);
  std::sort(tb.begin(), tb.end(), by_labels);
  for (size_t i = 0; i < ta.size(); ++i) {
    if (ta[i].labels != tb[i].labels) return fail("labeled triangles differ");
    for (int k = 0; k < 3; ++k) {
      if (std::abs(ta[i].sides[k] - tb[i].sides[k]) > tol) return fail("side lengths differ");
    }
  }
  auto seams = [](const ConeSphericalMetric& m) {
    std::vector<std::tuple<SideKey, SideKey, int>> out;
    for (const auto& g : m.gluings) {
      SideKey x = side_key(m, g.a), y = side_key(m, g.b);
      if (y < x) std::swap(x, y);
      out.emplace_back(x, y, g.mark);
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  if (seams(a) != seams(b)) return fail("gluings or marks differ");
  std::map<Label, double> ca, cb;
  for (int p = 0; p < static_cast<int>(a.points.size()); ++p) {
    if (!a.corners_at(p).empty()) ca[label_of(a, p)] = a.points[p].angle;
  }
  for (int p = 0; p < static_cast<int>(b.points.size()); ++p) {
    if (!b.corners_at(p).empty()) cb[label_of(b, p)] = b.points[p].angle;
  }
  if (ca.size() != cb.size()) return fail("point sets differ");
  for (const auto& [l, ang] : ca) {
    const auto it = cb.find(l);
    if (it == cb.end()) return fail("point sets differ");
    if (std::abs(it->second - ang) > tol) return fail("cone angles differ");
  }
  return true;
}

}  // namespace hyperideal
