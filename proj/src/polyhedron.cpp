#include "hyperideal/polyhedron.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <set>

namespace hyperideal {

namespace {

int position_in(const std::vector<int>& cycle, int x) {
  const auto it = std::find(cycle.begin(), cycle.end(), x);
  return it == cycle.end() ? -1 : static_cast<int>(it - cycle.begin());
}

int next_in(const std::vector<int>& cycle, int x) {
  const int i = position_in(cycle, x);
  return cycle[(i + 1) % cycle.size()];
}

int prev_in(const std::vector<int>& cycle, int x) {
  const int i = position_in(cycle, x);
  return cycle[(i + cycle.size() - 1) % cycle.size()];
}

// Faces around each vertex: after f comes the face across the edge (v, next_f(v)).
std::vector<std::vector<int>> vertex_cycles_from(const std::vector<std::vector<int>>& faces,
                                                 int num_vertices) {
  std::vector<std::vector<int>> around(num_vertices);
  for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
    for (int v : faces[f]) around[v].push_back(f);
  }
  std::vector<std::vector<int>> cycles(num_vertices);
  for (int v = 0; v < num_vertices; ++v) {
    if (around[v].empty()) throw GeometryError("vertex " + std::to_string(v) + " lies on no face");
    const int start = *std::min_element(around[v].begin(), around[v].end());
    int f = start;
    do {
      cycles[v].push_back(f);
      const int w = next_in(faces[f], v);
      int g = -1;
      for (int h : around[v]) {
        if (h != f && prev_in(faces[h], v) == w) g = h;
      }
      if (g < 0) throw GeometryError("inconsistent face orientation at vertex " + std::to_string(v));
      f = g;
      if (cycles[v].size() > around[v].size()) {
        throw GeometryError("non-polyhedral: faces around vertex " + std::to_string(v) +
                            " do not form a cycle");
      }
    } while (f != start);
    if (cycles[v].size() != around[v].size()) {
      throw GeometryError("non-polyhedral: faces around vertex " + std::to_string(v) +
                          " do not form a single cycle");
    }
  }
  return cycles;
}

// Edges keyed by sorted vertex pair, numbered in lexicographic key order.
std::vector<Edge> edges_from(const std::vector<std::vector<int>>& faces) {
  std::map<std::pair<int, int>, std::vector<int>> by_pair;
  for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
    const auto& c = faces[f];
    for (std::size_t i = 0; i < c.size(); ++i) {
      const int u = c[i];
      const int v = c[(i + 1) % c.size()];
      by_pair[{std::min(u, v), std::max(u, v)}].push_back(f);
    }
  }
  std::vector<Edge> edges;
  for (const auto& [key, fs] : by_pair) {
    if (fs.size() != 2) {
      throw GeometryError("edge " + std::to_string(key.first) + "-" + std::to_string(key.second) +
                          " lies on " + std::to_string(fs.size()) + " faces");
    }
    edges.push_back({std::min(fs[0], fs[1]), std::max(fs[0], fs[1]), key.first, key.second});
  }
  return edges;
}

double relative_inner(const MVector& unit_dir, const MVector& n) {
  return inner(unit_dir, n) / euclidean_norm(n);
}

MVector unit_direction(const MVector& v) { return v / euclidean_norm(v); }

// Null vector of the incident normals in the least-squares sense.
MVector common_null_vector(const std::vector<HPlane>& planes, const std::vector<int>& faces) {
  Eigen::MatrixXd a(faces.size(), 4);
  for (std::size_t r = 0; r < faces.size(); ++r) {
    const MVector& n = planes[faces[r]].normal();
    const double len = euclidean_norm(n);
    a(r, 0) = -n.x0 / len;
    a(r, 1) = n.x1 / len;
    a(r, 2) = n.x2 / len;
    a(r, 3) = n.x3 / len;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const Eigen::Vector4d w = svd.matrixV().col(3);
  return MVector(w(0), w(1), w(2), w(3));
}

std::pair<MVector, VertexClass> normalize_vertex(const MVector& w) {
  switch (classify(w)) {
    case CausalClass::Timelike: {
      MVector v = w / std::sqrt(-inner(w, w));
      if (v.x0 < 0.0) throw GeometryError("non-polyhedral: vertex in the past cone");
      return {v, VertexClass::Finite};
    }
    case CausalClass::Lightlike:
      if (w.x0 <= 0.0) throw GeometryError("non-polyhedral: vertex in the past cone");
      return {w / w.x0, VertexClass::Ideal};
    case CausalClass::Spacelike:
      return {w / std::sqrt(inner(w, w)), VertexClass::Hyperideal};
  }
  throw GeometryError("degenerate vector");
}

bool edge_meets_h3(const MVector& u, const MVector& v) {
  const MVector a = unit_direction(u);
  const MVector b = unit_direction(v);
  const double gram = inner(a, a) * inner(b, b) - inner(a, b) * inner(a, b);
  return gram < -1e-12;
}

// Orders, orients and links everything once vertex representatives and
// incidences are known.
ProjectivePolyhedron assemble(const std::vector<HPlane>& planes, std::vector<MVector> coords,
                              std::vector<std::vector<int>> vertex_faces, bool strict) {
  const int nf = static_cast<int>(planes.size());
  // Vertex ids sorted by incident face lists.
  std::vector<int> order(coords.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return vertex_faces[a] < vertex_faces[b]; });
  ProjectivePolyhedron p;
  p.planes = planes;
  for (int i : order) {
    const auto [v, cls] = normalize_vertex(coords[i]);
    p.vertex_coords.push_back(v);
    p.vertex_class.push_back(cls);
    p.vertex_faces.push_back(vertex_faces[i]);
  }
  const int nv = static_cast<int>(p.vertex_coords.size());

  std::vector<std::vector<int>> on_face(nf);
  for (int v = 0; v < nv; ++v) {
    for (int f : p.vertex_faces[v]) on_face[f].push_back(v);
  }
  for (int f = 0; f < nf; ++f) {
    if (on_face[f].size() < 3) throw GeometryError("redundant plane " + std::to_string(f));
  }

  // Edge adjacency inside each face.
  std::vector<std::vector<std::pair<int, int>>> face_links(nf);
  for (int f = 0; f < nf; ++f) {
    for (int g = f + 1; g < nf; ++g) {
      std::vector<int> common;
      std::set_intersection(on_face[f].begin(), on_face[f].end(), on_face[g].begin(),
                            on_face[g].end(), std::back_inserter(common));
      if (common.size() < 2) continue;
      if (common.size() > 2) {
        throw GeometryError("non-polyhedral: faces " + std::to_string(f) + " and " +
                            std::to_string(g) + " share " + std::to_string(common.size()) +
                            " vertices");
      }
      face_links[f].emplace_back(common[0], common[1]);
      face_links[g].emplace_back(common[0], common[1]);
    }
  }

  MVector interior(0, 0, 0, 0);
  for (const auto& v : p.vertex_coords) interior += unit_direction(v);

  std::vector<std::vector<int>> cycles(nf);
  for (int f = 0; f < nf; ++f) {
    std::map<int, std::vector<int>> nbr;
    for (const auto& [u, v] : face_links[f]) {
      nbr[u].push_back(v);
      nbr[v].push_back(u);
    }
    for (int v : on_face[f]) {
      if (nbr[v].size() != 2) {
        throw GeometryError("non-polyhedral: face " + std::to_string(f) + " is not a simple cycle");
      }
    }
    std::vector<int>& c = cycles[f];
    int prev = -1;
    int cur = on_face[f].front();
    do {
      c.push_back(cur);
      const int next = nbr[cur][0] != prev ? nbr[cur][0] : nbr[cur][1];
      prev = cur;
      cur = next;
    } while (cur != on_face[f].front() && c.size() <= on_face[f].size());
    if (c.size() != on_face[f].size()) {
      throw GeometryError("non-polyhedral: face " + std::to_string(f) + " is not a simple cycle");
    }
    MVector center(0, 0, 0, 0);
    for (int v : c) center += unit_direction(p.vertex_coords[v]);
    double orient = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      orient += det4(interior, center, unit_direction(p.vertex_coords[c[i]]),
                     unit_direction(p.vertex_coords[c[(i + 1) % c.size()]]));
    }
    if (orient < 0.0) std::reverse(c.begin() + 1, c.end());
  }

  p.comb.num_faces = nf;
  p.comb.num_vertices = nv;
  p.comb.face_cycles = cycles;
  p.comb.edges = edges_from(cycles);
  p.comb.vertex_cycles = vertex_cycles_from(cycles, nv);

  if (strict) {
    for (const auto& e : p.comb.edges) {
      if (!edge_meets_h3(p.vertex_coords[e.vertex_u], p.vertex_coords[e.vertex_v])) {
        throw GeometryError("edge misses H3 (vertices " + std::to_string(e.vertex_u) + ", " +
                            std::to_string(e.vertex_v) + ")");
      }
    }
  }
  return p;
}

}  // namespace

int Combinatorics::euler_characteristic() const {
  return num_vertices - static_cast<int>(edges.size()) + num_faces;
}

Combinatorics Combinatorics::transpose() const {
  Combinatorics t;
  t.num_faces = num_vertices;
  t.num_vertices = num_faces;
  for (const auto& e : edges) t.edges.push_back({e.vertex_u, e.vertex_v, e.face_a, e.face_b});
  t.face_cycles = vertex_cycles;
  t.vertex_cycles = face_cycles;
  return t;
}

std::optional<int> Combinatorics::edge_between_faces(int a, int b) const {
  const int lo = std::min(a, b);
  const int hi = std::max(a, b);
  for (int i = 0; i < static_cast<int>(edges.size()); ++i) {
    if (edges[i].face_a == lo && edges[i].face_b == hi) return i;
  }
  return std::nullopt;
}

std::optional<int> Combinatorics::edge_between_vertices(int u, int v) const {
  const int lo = std::min(u, v);
  const int hi = std::max(u, v);
  for (int i = 0; i < static_cast<int>(edges.size()); ++i) {
    if (edges[i].vertex_u == lo && edges[i].vertex_v == hi) return i;
  }
  return std::nullopt;
}

std::vector<std::string> Combinatorics::problems() const {
  std::vector<std::string> out;
  if (euler_characteristic() != 2) {
    out.push_back("Euler characteristic " + std::to_string(euler_characteristic()) + " != 2");
  }
  if (static_cast<int>(face_cycles.size()) != num_faces ||
      static_cast<int>(vertex_cycles.size()) != num_vertices) {
    out.push_back("cycle lists do not match face/vertex counts");
    return out;
  }
  std::map<std::pair<int, int>, int> seen;
  for (int f = 0; f < num_faces; ++f) {
    const auto& c = face_cycles[f];
    for (std::size_t i = 0; i < c.size(); ++i) {
      const int u = c[i];
      const int v = c[(i + 1) % c.size()];
      ++seen[{std::min(u, v), std::max(u, v)}];
      const auto e = edge_between_vertices(u, v);
      if (!e || (edges[*e].face_a != f && edges[*e].face_b != f)) {
        out.push_back("face " + std::to_string(f) + " side " + std::to_string(u) + "-" +
                      std::to_string(v) + " is not an edge of that face");
      }
    }
  }
  for (int i = 0; i < static_cast<int>(edges.size()); ++i) {
    const auto& e = edges[i];
    if (seen[{e.vertex_u, e.vertex_v}] != 2) {
      out.push_back("edge " + std::to_string(i) + " does not have exactly two incident faces");
    }
    for (int f : {e.face_a, e.face_b}) {
      if (f < 0 || f >= num_faces || position_in(face_cycles[f], e.vertex_u) < 0 ||
          position_in(face_cycles[f], e.vertex_v) < 0) {
        out.push_back("edge " + std::to_string(i) + " incidence disagrees with face cycles");
        break;
      }
    }
  }
  for (int v = 0; v < num_vertices; ++v) {
    const auto& c = vertex_cycles[v];
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (!edge_between_faces(c[i], c[(i + 1) % c.size()])) {
        out.push_back("vertex " + std::to_string(v) + " cycle has non-adjacent faces");
      }
    }
  }
  return out;
}

Combinatorics combinatorics_from_faces(const std::vector<std::vector<int>>& faces_in) {
  std::vector<std::vector<int>> faces = faces_in;
  int nv = 0;
  for (const auto& f : faces) {
    if (f.size() < 3) throw GeometryError("face with fewer than 3 vertices");
    for (int v : f) {
      if (v < 0) throw GeometryError("negative vertex id");
      nv = std::max(nv, v + 1);
    }
  }
  // Orient by flooding: a neighbor must traverse the shared edge backwards.
  const int nf = static_cast<int>(faces.size());
  std::map<std::pair<int, int>, std::vector<int>> by_pair;
  for (int f = 0; f < nf; ++f) {
    for (std::size_t i = 0; i < faces[f].size(); ++i) {
      const int u = faces[f][i];
      const int v = faces[f][(i + 1) % faces[f].size()];
      by_pair[{std::min(u, v), std::max(u, v)}].push_back(f);
    }
  }
  auto traverses = [&](int f, int u, int v) {
    const auto& c = faces[f];
    const int i = position_in(c, u);
    return c[(i + 1) % c.size()] == v;
  };
  std::vector<int> state(nf, 0);
  for (int root = 0; root < nf; ++root) {
    if (state[root]) continue;
    state[root] = 1;
    std::queue<int> q;
    q.push(root);
    while (!q.empty()) {
      const int f = q.front();
      q.pop();
      const auto c = faces[f];
      for (std::size_t i = 0; i < c.size(); ++i) {
        const int u = c[i];
        const int v = c[(i + 1) % c.size()];
        for (int g : by_pair[{std::min(u, v), std::max(u, v)}]) {
          if (g == f) continue;
          const bool same = traverses(g, u, v);
          if (!state[g]) {
            if (same) std::reverse(faces[g].begin(), faces[g].end());
            state[g] = 1;
            q.push(g);
          } else if (same) {
            throw GeometryError("faces cannot be oriented consistently");
          }
        }
      }
    }
  }
  Combinatorics c;
  c.num_faces = nf;
  c.num_vertices = nv;
  c.face_cycles = faces;
  c.edges = edges_from(faces);
  c.vertex_cycles = vertex_cycles_from(faces, nv);
  return c;
}

std::string to_string(VertexClass c) {
  switch (c) {
    case VertexClass::Finite: return "finite";
    case VertexClass::Ideal: return "ideal";
    case VertexClass::Hyperideal: return "hyperideal";
  }
  return "unknown";
}

bool ProjectivePolyhedron::has_class(VertexClass c) const {
  return std::find(vertex_class.begin(), vertex_class.end(), c) != vertex_class.end();
}

ProjectivePolyhedron from_planes(const std::vector<HPlane>& planes) {
  const int n = static_cast<int>(planes.size());
  if (n < 4) throw GeometryError("need at least 4 planes");
  std::vector<MVector> dirs;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        const MVector& a = planes[i].normal();
        const MVector& b = planes[j].normal();
        const MVector& c = planes[k].normal();
        MVector w = minkowski_cross(a, b, c);
        const double len = euclidean_norm(w);
        const double scale = euclidean_norm(a) * euclidean_norm(b) * euclidean_norm(c);
        if (len < 1e-10 * scale) continue;
        w /= len;
        bool pos = true;
        bool neg = true;
        for (const auto& pl : planes) {
          const double s = relative_inner(w, pl.normal());
          pos = pos && s >= -kIncidenceTol;
          neg = neg && -s >= -kIncidenceTol;
        }
        if (pos && neg) throw GeometryError("non-polyhedral: planes share a common line");
        if (!pos && !neg) continue;
        const MVector cand = pos ? w : -w;
        bool dup = false;
        for (const auto& d : dirs) dup = dup || euclidean_norm(d - cand) < kDedupeTol;
        if (!dup) dirs.push_back(cand);
      }
    }
  }
  if (dirs.size() < 4) throw GeometryError("non-polyhedral: fewer than 4 vertices");

  std::vector<MVector> coords;
  std::vector<std::vector<int>> incid;
  for (const auto& d : dirs) {
    std::vector<int> faces;
    for (int f = 0; f < n; ++f) {
      if (std::abs(relative_inner(d, planes[f].normal())) < kIncidenceTol) faces.push_back(f);
    }
    if (faces.size() < 3) throw GeometryError("non-polyhedral: vertex with fewer than 3 faces");
    MVector w = common_null_vector(planes, faces);
    if (w.x0 * d.x0 + w.x1 * d.x1 + w.x2 * d.x2 + w.x3 * d.x3 < 0.0) w = -w;
    coords.push_back(w);
    incid.push_back(faces);
  }
  return assemble(planes, coords, incid, true);
}

ProjectivePolyhedron from_combinatorics(const std::vector<HPlane>& planes,
                                        const std::vector<std::vector<int>>& vertex_faces) {
  const int n = static_cast<int>(planes.size());
  std::vector<MVector> coords;
  std::vector<std::vector<int>> incid;
  for (const auto& vf : vertex_faces) {
    std::vector<int> faces = vf;
    std::sort(faces.begin(), faces.end());
    if (faces.size() < 3) throw GeometryError("non-polyhedral: vertex with fewer than 3 faces");
    for (int f : faces) {
      if (f < 0 || f >= n) throw GeometryError("face id out of range");
    }
    MVector w = common_null_vector(planes, faces);
    if (std::abs(w.x0) > 1e-12) {
      if (w.x0 < 0.0) w = -w;
    } else {
      int score = 0;
      for (const auto& pl : planes) score += inner(w, pl.normal()) > 0.0 ? 1 : -1;
      if (score < 0) w = -w;
    }
    coords.push_back(w);
    incid.push_back(faces);
  }
  return assemble(planes, coords, incid, false);
}

double dihedral_angle(const ProjectivePolyhedron& p, int edge) {
  return M_PI - exterior_angle(p, edge);
}

double exterior_angle(const ProjectivePolyhedron& p, int edge) {
  const Edge& e = p.comb.edges.at(edge);
  const MVector& a = p.planes[e.face_a].normal();
  const MVector& b = p.planes[e.face_b].normal();
  if (std::abs(inner(a, b)) > 1.0 + 1e-9) {
    throw GeometryError("faces do not meet along a hyperbolic edge");
  }
  return desitter_distance(DSPoint(a), DSPoint(b));
}

double face_corner_angle(const ProjectivePolyhedron& p, int face, int vertex) {
  const auto& cycle = p.comb.face_cycles.at(face);
  if (position_in(cycle, vertex) < 0) throw GeometryError("vertex not on face");
  switch (p.vertex_class[vertex]) {
    case VertexClass::Ideal: return 0.0;
    case VertexClass::Hyperideal: throw GeometryError("truncate first");
    case VertexClass::Finite: break;
  }
  const MVector& x = p.vertex_coords[vertex];
  const MVector& a = p.vertex_coords[prev_in(cycle, vertex)];
  const MVector& b = p.vertex_coords[next_in(cycle, vertex)];
  const MVector t1 = a + inner(a, x) * x;
  const MVector t2 = b + inner(b, x) * x;
  const double c = inner(t1, t2);
  const double s2 = inner(t1, t1) * inner(t2, t2) - c * c;
  return std::atan2(std::sqrt(std::max(0.0, s2)), c);
}

double face_area(const ProjectivePolyhedron& p, int face) {
  const auto& cycle = p.comb.face_cycles.at(face);
  for (int v : cycle) {
    if (p.vertex_class[v] == VertexClass::Hyperideal) throw GeometryError("truncate first");
  }
  double sum = 0.0;
  for (int v : cycle) sum += face_corner_angle(p, face, v);
  return (static_cast<double>(cycle.size()) - 2.0) * M_PI - sum;
}

ValidationReport validate(const ProjectivePolyhedron& p) {
  ValidationReport r;
  auto fail = [&](std::string check, std::string item, std::string detail) {
    r.pass = false;
    r.failures.push_back({std::move(check), std::move(item), std::move(detail)});
  };
  for (const auto& msg : p.comb.problems()) fail("combinatorics", "", msg);

  const int nv = static_cast<int>(p.vertex_coords.size());
  for (int v = 0; v < nv; ++v) {
    const MVector d = unit_direction(p.vertex_coords[v]);
    const auto& inc = p.vertex_faces[v];
    for (int f = 0; f < static_cast<int>(p.planes.size()); ++f) {
      const double s = relative_inner(d, p.planes[f].normal());
      const bool incident = std::binary_search(inc.begin(), inc.end(), f);
      if (incident && std::abs(s) > kIncidenceTol) {
        fail("incidence", "vertex " + std::to_string(v),
             "off face " + std::to_string(f) + " by " + std::to_string(s));
      }
      if (!incident && s < -kIncidenceTol) {
        fail("convexity", "plane " + std::to_string(f),
             "vertex " + std::to_string(v) + " violates the half-space by " + std::to_string(-s));
      }
    }
    VertexClass now = VertexClass::Finite;
    switch (classify(p.vertex_coords[v])) {
      case CausalClass::Timelike: now = VertexClass::Finite; break;
      case CausalClass::Lightlike: now = VertexClass::Ideal; break;
      case CausalClass::Spacelike: now = VertexClass::Hyperideal; break;
    }
    r.classification.push_back(now);
    if (v < static_cast<int>(p.vertex_class.size()) && now != p.vertex_class[v]) {
      fail("classification", "vertex " + std::to_string(v),
           "stored " + to_string(p.vertex_class[v]) + ", coordinates are " + to_string(now));
    }
  }
  for (int f = 0; f < p.comb.num_faces; ++f) {
    if (p.comb.face_cycles[f].size() < 3) {
      fail("faces", "face " + std::to_string(f), "fewer than 3 vertices");
    }
  }
  for (int i = 0; i < static_cast<int>(p.comb.edges.size()); ++i) {
    const auto& e = p.comb.edges[i];
    if (!edge_meets_h3(p.vertex_coords[e.vertex_u], p.vertex_coords[e.vertex_v])) {
      fail("edge-meets-H3", "edge " + std::to_string(i),
           "vertices " + std::to_string(e.vertex_u) + ", " + std::to_string(e.vertex_v));
    }
  }
  return r;
}

std::array<double, 3> klein_coordinates(const MVector& v) {
  if (std::abs(v.x0) < 1e-15) throw GeometryError("vertex at infinity of the Klein chart");
  return {v.x1 / v.x0, v.x2 / v.x0, v.x3 / v.x0};
}

}  // namespace hyperideal
