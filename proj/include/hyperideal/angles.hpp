#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hyperideal/polyhedron.hpp"

namespace hyperideal {

enum class VertexKind { Unknown, Ideal, Hyperideal };

std::string to_string(VertexKind k);

/// Gamma with exterior-angle weights on its edges. Gamma* is the transpose:
/// its vertices are the faces of Gamma and its faces are the vertices.
struct WeightedDualGraph {
  Combinatorics gamma;
  std::vector<double> weights;           ///< per edge of gamma
  std::vector<VertexKind> vertex_kind;   ///< per vertex of gamma; Unknown = infer
};

inline constexpr double kEqualityBand = 1e-8;
/// Undeclared faces are inferred ideal only this close to 2 pi.
inline constexpr double kInferenceBand = 1e-12;

/// Sum of the weights around vertex v of gamma (its face in Gamma*).
double vertex_sum(const WeightedDualGraph& g, int v);

/// A cycle or path of Gamma*, by edge ids (in traversal order) and node ids
/// (faces of gamma).
struct Violation {
  std::string condition;  ///< "range", "combinatorics", "C1" or "C2"
  std::string reason;
  std::vector<int> edges;
  std::vector<int> nodes;
  double sum = 0.0;
  int face = -1;          ///< vertex of gamma involved, if any
};

struct C1Report {
  bool pass = true;
  std::vector<Violation> violations;
  std::vector<int> equality_faces;  ///< vertices of gamma whose face sum is 2 pi
  std::vector<int> inferred_ideal;
  long cycles_checked = 0;
};

struct C2Report {
  bool pass = true;
  std::vector<Violation> violations;
  long paths_checked = 0;
};

/// Every simple cycle of Gamma* sums to at least 2 pi, with equality exactly
/// on faces of ideal vertices. Cycles longer than 2 pi + tol_eq are pruned.
C1Report check_C1(const WeightedDualGraph& g, double tol_eq = kEqualityBand);

/// Every simple path joining two nodes of a common face of Gamma* and not
/// contained in that face's boundary sums to more than pi.
C2Report check_C2(const WeightedDualGraph& g);

struct KGammaVerdict {
  bool member = false;
  std::vector<Violation> violations;
  std::vector<VertexKind> vertex_kinds;  ///< declared or implied by the equalities
  std::vector<int> inferred;             ///< vertices whose kind was inferred
};

KGammaVerdict check_K_gamma(const WeightedDualGraph& g, double tol_eq = kEqualityBand);

/// Kind of each vertex: declared, or ideal when its face sum is within
/// kInferenceBand of 2 pi, else hyperideal.
std::vector<VertexKind> resolved_kinds(const WeightedDualGraph& g);

/// All simple cycles of Gamma* with weight sum <= bound, as edge lists. Each
/// cycle appears once, starting at its smallest node.
std::vector<std::vector<int>> simple_cycles(const WeightedDualGraph& g, double bound);

/// All simple paths of Gamma* with at least one edge and weight sum <= bound,
/// once per unordered pair of directions.
std::vector<std::vector<int>> simple_paths(const WeightedDualGraph& g, double bound);

struct FalsifierBudget {
  int depth = 12;
  int shots = 10000;
  unsigned long long seed = 0;
  double margin = 1e-6;
};

struct MetricConsistency {
  bool member = false;
  bool relaxed = false;            ///< Q_Gamma built without the local sum test
  bool witness_found = false;      ///< non-exempt closed geodesic <= 2 pi + margin
  std::optional<double> witness_length;
  int exempt_boundaries = 0;
  bool budget_exhausted = false;
  bool agree = false;
  bool soundness_failure = false;  ///< member, yet a short geodesic exists
};

/// Compares the combinatorial verdict with the geodesic falsifier run on
/// build_Q_gamma(g) (relaxed when the local sums fail).
MetricConsistency consistency_with_metric(const WeightedDualGraph& g,
                                          const FalsifierBudget& budget = {},
                                          double tol_eq = kEqualityBand);

}  // namespace hyperideal
