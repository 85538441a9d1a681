#include "hyperideal/angles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>

#include "hyperideal/conemetric.hpp"

namespace hyperideal {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;
constexpr double kStrictPath = 1e-12;

VertexKind declared(const WeightedDualGraph& g, int v) {
  return v < static_cast<int>(g.vertex_kind.size()) ? g.vertex_kind[v] : VertexKind::Unknown;
}

// Gamma* adjacency: node = face of gamma, (neighbor node, edge id).
std::vector<std::vector<std::pair<int, int>>> dual_adjacency(const Combinatorics& c) {
  std::vector<std::vector<std::pair<int, int>>> adj(c.num_faces);
  for (int e = 0; e < static_cast<int>(c.edges.size()); ++e) {
    adj[c.edges[e].face_a].push_back({c.edges[e].face_b, e});
    adj[c.edges[e].face_b].push_back({c.edges[e].face_a, e});
  }
  return adj;
}

std::vector<std::vector<int>> incident_edges(const Combinatorics& c) {
  std::vector<std::vector<int>> inc(c.num_vertices);
  for (int e = 0; e < static_cast<int>(c.edges.size()); ++e) {
    inc[c.edges[e].vertex_u].push_back(e);
    inc[c.edges[e].vertex_v].push_back(e);
  }
  for (auto& v : inc) std::sort(v.begin(), v.end());
  return inc;
}

double sum_of(const WeightedDualGraph& g, const std::vector<int>& edges) {
  double s = 0.0;
  for (int e : edges) s += g.weights[e];
  return s;
}

std::vector<int> nodes_of(const Combinatorics& c, const std::vector<int>& edges, int start) {
  std::vector<int> nodes{start};
  for (int e : edges) {
    const int cur = nodes.back();
    nodes.push_back(c.edges[e].face_a == cur ? c.edges[e].face_b : c.edges[e].face_a);
  }
  return nodes;
}

int cycle_start(const Combinatorics& c, const std::vector<int>& edges) {
  // The shared node of the last and first edges.
  const auto& a = c.edges[edges.front()];
  const auto& b = c.edges[edges.back()];
  if (edges.size() == 1) return a.face_a;
  return (a.face_a == b.face_a || a.face_a == b.face_b) ? a.face_a : a.face_b;
}

}  // namespace

std::string to_string(VertexKind k) {
  switch (k) {
    case VertexKind::Unknown: return "unknown";
    case VertexKind::Ideal: return "ideal";
    case VertexKind::Hyperideal: return "hyperideal";
  }
  return "?";
}

double vertex_sum(const WeightedDualGraph& g, int v) {
  double s = 0.0;
  for (int e = 0; e < static_cast<int>(g.gamma.edges.size()); ++e) {
    if (g.gamma.edges[e].vertex_u == v || g.gamma.edges[e].vertex_v == v) s += g.weights[e];
  }
  return s;
}

std::vector<VertexKind> resolved_kinds(const WeightedDualGraph& g) {
  std::vector<VertexKind> out(g.gamma.num_vertices);
  for (int v = 0; v < g.gamma.num_vertices; ++v) {
    const VertexKind k = declared(g, v);
    if (k != VertexKind::Unknown) {
      out[v] = k;
    } else {
      out[v] = std::abs(vertex_sum(g, v) - kTwoPi) <= kInferenceBand ? VertexKind::Ideal
                                                                     : VertexKind::Hyperideal;
    }
  }
  return out;
}

std::vector<std::vector<int>> simple_cycles(const WeightedDualGraph& g, double bound) {
  const auto adj = dual_adjacency(g.gamma);
  std::vector<std::vector<int>> out;
  std::vector<int> edges;
  std::vector<char> on(g.gamma.num_faces, 0);
  std::function<void(int, int, double)> dfs = [&](int start, int cur, double len) {
    for (const auto& [nb, e] : adj[cur]) {
      const double nl = len + g.weights[e];
      if (nl > bound) continue;
      if (nb == start && edges.size() >= 2) {
        if (edges.front() < e) {
          edges.push_back(e);
          out.push_back(edges);
          edges.pop_back();
        }
        continue;
      }
      if (nb <= start || on[nb]) continue;
      on[nb] = 1;
      edges.push_back(e);
      dfs(start, nb, nl);
      edges.pop_back();
      on[nb] = 0;
    }
  };
  for (int s = 0; s < g.gamma.num_faces; ++s) {
    on[s] = 1;
    dfs(s, s, 0.0);
    on[s] = 0;
  }
  return out;
}

std::vector<std::vector<int>> simple_paths(const WeightedDualGraph& g, double bound) {
  const auto adj = dual_adjacency(g.gamma);
  std::vector<std::vector<int>> out;
  std::vector<int> edges;
  std::vector<char> on(g.gamma.num_faces, 0);
  std::function<void(int, int, double)> dfs = [&](int start, int cur, double len) {
    for (const auto& [nb, e] : adj[cur]) {
      if (on[nb]) continue;
      const double nl = len + g.weights[e];
      if (nl > bound) continue;
      edges.push_back(e);
      if (start < nb) out.push_back(edges);
      on[nb] = 1;
      dfs(start, nb, nl);
      on[nb] = 0;
      edges.pop_back();
    }
  };
  for (int s = 0; s < g.gamma.num_faces; ++s) {
    on[s] = 1;
    dfs(s, s, 0.0);
    on[s] = 0;
  }
  return out;
}

C1Report check_C1(const WeightedDualGraph& g, double tol_eq) {
  C1Report r;
  const auto inc = incident_edges(g.gamma);
  std::map<std::vector<int>, int> face_of;
  for (int v = 0; v < g.gamma.num_vertices; ++v) face_of[inc[v]] = v;
  const auto cycles = simple_cycles(g, kTwoPi + tol_eq);
  r.cycles_checked = static_cast<long>(cycles.size());
  for (const auto& cyc : cycles) {
    const double s = sum_of(g, cyc);
    std::vector<int> key = cyc;
    std::sort(key.begin(), key.end());
    const auto it = face_of.find(key);
    const int face = it == face_of.end() ? -1 : it->second;
    Violation v{"C1", "", cyc, nodes_of(g.gamma, cyc, cycle_start(g.gamma, cyc)), s, face};
    if (s < kTwoPi - tol_eq) {
      v.reason = "cycle sum below 2 pi";
      r.violations.push_back(v);
      continue;
    }
    if (face < 0) {
      v.reason = "equality on a cycle that bounds no face";
      r.violations.push_back(v);
      continue;
    }
    const VertexKind k = declared(g, face);
    if (k == VertexKind::Ideal) {
      r.equality_faces.push_back(face);
    } else if (k == VertexKind::Hyperideal) {
      v.reason = "equality on the face of a hyperideal vertex";
      r.violations.push_back(v);
    } else if (std::abs(s - kTwoPi) <= kInferenceBand) {
      r.equality_faces.push_back(face);
      r.inferred_ideal.push_back(face);
    } else {
      v.reason = "ambiguous near-equality";
      r.violations.push_back(v);
    }
  }
  for (int f = 0; f < g.gamma.num_vertices; ++f) {
    if (declared(g, f) != VertexKind::Ideal) continue;
    const double s = vertex_sum(g, f);
    if (s > kTwoPi + tol_eq) {
      std::vector<int> cyc;
      const auto& vc = g.gamma.vertex_cycles[f];
      for (size_t i = 0; i < vc.size(); ++i) {
        cyc.push_back(*g.gamma.edge_between_faces(vc[i], vc[(i + 1) % vc.size()]));
      }
      r.violations.push_back({"C1", "ideal vertex face sums above 2 pi", cyc,
                              nodes_of(g.gamma, cyc, vc.front()), s, f});
    }
  }
  std::sort(r.equality_faces.begin(), r.equality_faces.end());
  std::sort(r.inferred_ideal.begin(), r.inferred_ideal.end());
  std::sort(r.violations.begin(), r.violations.end(), [](const Violation& a, const Violation& b) {
    return std::tie(a.sum, a.edges) < std::tie(b.sum, b.edges);
  });
  r.pass = r.violations.empty();
  return r;
}

C2Report check_C2(const WeightedDualGraph& g) {
  C2Report r;
  const auto& c = g.gamma;
  const auto inc = incident_edges(c);
  std::vector<std::set<int>> verts_of_face(c.num_faces);
  for (int f = 0; f < c.num_faces; ++f) verts_of_face[f] = {c.face_cycles[f].begin(), c.face_cycles[f].end()};
  const auto paths = simple_paths(g, M_PI + kStrictPath);
  r.paths_checked = static_cast<long>(paths.size());
  for (const auto& p : paths) {
    // Orient from the smaller end node.
    const auto& e0 = c.edges[p.front()];
    int start = e0.face_a;
    if (p.size() > 1) {
      const auto& e1 = c.edges[p[1]];
      start = (e0.face_a == e1.face_a || e0.face_a == e1.face_b) ? e0.face_b : e0.face_a;
    } else {
      start = std::min(e0.face_a, e0.face_b);
    }
    const auto nodes = nodes_of(c, p, start);
    const int a = nodes.front(), b = nodes.back();
    for (int v : verts_of_face[a]) {
      if (!verts_of_face[b].count(v)) continue;
      const bool inside = std::all_of(p.begin(), p.end(), [&](int e) {
        return std::binary_search(inc[v].begin(), inc[v].end(), e);
      });
      if (inside) continue;
      r.violations.push_back({"C2", "path between nodes of a common face sums to at most pi", p, nodes,
                              sum_of(g, p), v});
      break;
    }
  }
  std::sort(r.violations.begin(), r.violations.end(), [](const Violation& a, const Violation& b) {
    return std::tie(a.sum, a.edges) < std::tie(b.sum, b.edges);
  });
  r.pass = r.violations.empty();
  return r;
}

KGammaVerdict check_K_gamma(const WeightedDualGraph& g, double tol_eq) {
  KGammaVerdict k;
  const auto& c = g.gamma;
  bool structural = true;
  if (g.weights.size() != c.edges.size()) {
    k.violations.push_back({"range", "weight count does not match edge count", {}, {}, 0.0, -1});
    structural = false;
  } else {
    for (int e = 0; e < static_cast<int>(g.weights.size()); ++e) {
      const double w = g.weights[e];
      if (!(w > 0.0) || !(w < M_PI)) {
        k.violations.push_back({"range", "weight outside (0, pi)", {e}, {}, w, -1});
      }
    }
  }
  for (const auto& p : c.problems()) {
    k.violations.push_back({"combinatorics", p, {}, {}, 0.0, -1});
    structural = false;
  }
  if (c.euler_characteristic() != 2) {
    k.violations.push_back({"combinatorics", "not a sphere", {}, {}, 0.0, -1});
    structural = false;
  }
  if (!structural) return k;
  const C1Report c1 = check_C1(g, tol_eq);
  const C2Report c2 = check_C2(g);
  k.violations.insert(k.violations.end(), c1.violations.begin(), c1.violations.end());
  k.violations.insert(k.violations.end(), c2.violations.begin(), c2.violations.end());
  k.member = k.violations.empty();
  k.vertex_kinds.assign(c.num_vertices, VertexKind::Hyperideal);
  for (int f : c1.equality_faces) k.vertex_kinds[f] = VertexKind::Ideal;
  for (int v = 0; v < c.num_vertices; ++v) {
    if (declared(g, v) != VertexKind::Unknown) {
      k.vertex_kinds[v] = declared(g, v);
    } else {
      k.inferred.push_back(v);
    }
  }
  return k;
}

MetricConsistency consistency_with_metric(const WeightedDualGraph& g, const FalsifierBudget& budget,
                                          double tol_eq) {
  MetricConsistency r;
  r.member = check_K_gamma(g, tol_eq).member;
  ConeSphericalMetric m;
  try {
    m = build_Q_gamma(g, false);
  } catch (const GeometryError&) {
    m = build_Q_gamma(g, true);
    r.relaxed = true;
  }
  const FalsifierResult f = closed_geodesic_falsifier(m, budget);
  r.witness_found = f.witness.has_value();
  if (f.witness) r.witness_length = f.witness->length;
  r.exempt_boundaries = static_cast<int>(f.exempt.size());
  r.budget_exhausted = f.budget_exhausted;
  r.agree = r.member != r.witness_found;
  r.soundness_failure = r.member && r.witness_found;
  return r;
}

}  // namespace hyperideal
