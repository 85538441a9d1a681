#pragma once

// Test polyhedra in the Klein model.

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "hyperideal/angles.hpp"
#include "hyperideal/lorentz.hpp"
#include "hyperideal/minkowski.hpp"
#include "hyperideal/polyhedron.hpp"

namespace fixtures {

using hyperideal::HPlane;
using hyperideal::MVector;
using Dir = std::array<double, 3>;

inline Dir unit(Dir d) {
  const double l = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
  return {d[0] / l, d[1] / l, d[2] / l};
}

// Plane at hyperbolic distance d from the origin with outward direction u,
// facing the origin. Its Klein distance from the center is tanh d.
inline HPlane plane_at(double d, const Dir& u) {
  const Dir v = unit(u);
  return HPlane(MVector(-std::sinh(d), -std::cosh(d) * v[0], -std::cosh(d) * v[1],
                        -std::cosh(d) * v[2]));
}

enum class Solid { Tetrahedron, Cube, Octahedron, Dodecahedron };

inline std::vector<Dir> face_directions(Solid s) {
  switch (s) {
    case Solid::Tetrahedron:
      return {unit({1, 1, 1}), unit({1, -1, -1}), unit({-1, 1, -1}), unit({-1, -1, 1})};
    case Solid::Cube:
      return {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    case Solid::Octahedron: {
      std::vector<Dir> out;
      for (int a : {1, -1}) {
        for (int b : {1, -1}) {
          for (int c : {1, -1}) out.push_back(unit({double(a), double(b), double(c)}));
        }
      }
      return out;
    }
    case Solid::Dodecahedron: {
      const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
      std::vector<Dir> out;
      for (double a : {1.0, -1.0}) {
        for (double b : {phi, -phi}) {
          out.push_back(unit({0, a, b}));
          out.push_back(unit({a, b, 0}));
          out.push_back(unit({b, 0, a}));
        }
      }
      return out;
    }
  }
  return {};
}

// Regular polytope with Klein inradius rho.
inline std::vector<HPlane> regular(Solid s, double rho) {
  std::vector<HPlane> out;
  for (const auto& u : face_directions(s)) out.push_back(plane_at(std::atanh(rho), u));
  return out;
}

// Inradius / circumradius ratios of the Euclidean solids.
inline double circum_ratio(Solid s) {
  switch (s) {
    case Solid::Tetrahedron: return 3.0;
    case Solid::Cube: return std::sqrt(3.0);
    case Solid::Octahedron: return std::sqrt(3.0);
    case Solid::Dodecahedron: return std::sqrt(3.0) * std::tan(M_PI / 5.0) * std::tan(M_PI / 3.0);
  }
  return 0.0;
}

inline std::vector<HPlane> transform(const std::vector<HPlane>& planes,
                                     const hyperideal::LinearMap& m) {
  std::vector<HPlane> out;
  for (const auto& p : planes) out.push_back(HPlane::from_spacelike(hyperideal::apply(m, p.normal())));
  return out;
}

// Random small change of each plane's distance and direction. Only safe for
// simple polytopes, whose combinatorics is stable.
inline std::vector<HPlane> perturbed(Solid s, double rho, double amount, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-amount, amount);
  std::vector<HPlane> out;
  for (const auto& d : face_directions(s)) {
    const Dir dir = unit({d[0] + u(rng), d[1] + u(rng), d[2] + u(rng)});
    out.push_back(plane_at(std::atanh(rho * (1.0 + u(rng))), dir));
  }
  return out;
}

// Planes of the tetrahedron with the given Klein vertices, oriented inward.
inline std::vector<HPlane> tetrahedron_from_vertices(const std::array<Dir, 4>& k) {
  std::array<MVector, 4> v;
  for (int i = 0; i < 4; ++i) v[i] = MVector(1.0, k[i][0], k[i][1], k[i][2]);
  std::vector<HPlane> out;
  for (int skip = 0; skip < 4; ++skip) {
    std::vector<MVector> t;
    for (int i = 0; i < 4; ++i) {
      if (i != skip) t.push_back(v[i]);
    }
    MVector n = hyperideal::minkowski_cross(t[0], t[1], t[2]);
    if (hyperideal::inner(n, v[skip]) < 0.0) n = -n;
    out.push_back(HPlane::from_spacelike(n));
  }
  return out;
}

inline std::array<Dir, 4> tetra_vertex_dirs() {
  return {unit({1, 1, 1}), unit({1, -1, -1}), unit({-1, 1, -1}), unit({-1, -1, 1})};
}

// Regular ideal tetrahedron: vertices (1, u_i) on the light cone.
inline std::vector<HPlane> ideal_tetrahedron() { return tetrahedron_from_vertices(tetra_vertex_dirs()); }

// Tetrahedron with Klein vertex radii r[i] along the regular directions.
inline std::vector<HPlane> tetrahedron_with_radii(const std::array<double, 4>& r) {
  auto d = tetra_vertex_dirs();
  for (int i = 0; i < 4; ++i) {
    for (int c = 0; c < 3; ++c) d[i][c] *= r[i];
  }
  return tetrahedron_from_vertices(d);
}

// Octant corner at the origin capped by x1 + x2 + x3 <= c in the Klein chart.
inline std::vector<HPlane> capped_corner(double c) {
  return {HPlane(MVector(0, 1, 0, 0)), HPlane(MVector(0, 0, 1, 0)), HPlane(MVector(0, 0, 0, 1)),
          HPlane::from_spacelike(MVector(-c, -1, -1, -1))};
}

// Regular right-angled dodecahedron: tanh^2 d = 1/sqrt 5.
inline std::vector<HPlane> right_angled_dodecahedron() {
  return regular(Solid::Dodecahedron, std::pow(5.0, -0.25));
}

// Seeded hyperideal polyhedra used by property tests: perturbed tetrahedra
// and cubes, regular octahedra, all moved by a random isometry.
inline std::vector<HPlane> random_hyperideal(std::mt19937_64& rng, int which) {
  std::uniform_real_distribution<double> t(0.0, 1.0);
  std::vector<HPlane> planes;
  switch (which % 3) {
    case 0: planes = perturbed(Solid::Tetrahedron, 0.40 + 0.12 * t(rng), 0.03, rng); break;
    case 1: planes = perturbed(Solid::Cube, 0.60 + 0.08 * t(rng), 0.02, rng); break;
    default: planes = regular(Solid::Octahedron, 0.62 + 0.15 * t(rng)); break;
  }
  return transform(planes, hyperideal::random_isometry(rng, 0.8));
}

// Seeded compact polyhedra: perturbed cubes and tetrahedra.
inline std::vector<HPlane> random_compact(std::mt19937_64& rng, int which) {
  std::uniform_real_distribution<double> t(0.0, 1.0);
  std::vector<HPlane> planes;
  if (which % 2 == 0) {
    planes = perturbed(Solid::Cube, 0.25 + 0.25 * t(rng), 0.05, rng);
  } else {
    planes = perturbed(Solid::Tetrahedron, 0.10 + 0.15 * t(rng), 0.05, rng);
  }
  return transform(planes, hyperideal::random_isometry(rng, 1.0));
}

// Combinatorics of the regular solids, read off compact realizations.
inline hyperideal::Combinatorics solid_combinatorics(Solid s) {
  switch (s) {
    case Solid::Tetrahedron: return hyperideal::from_planes(regular(s, 0.2)).comb;
    case Solid::Cube: return hyperideal::from_planes(regular(s, 0.4)).comb;
    case Solid::Octahedron: return hyperideal::from_planes(regular(s, 0.4)).comb;
    case Solid::Dodecahedron: return hyperideal::from_planes(right_angled_dodecahedron()).comb;
  }
  return {};
}

inline hyperideal::WeightedDualGraph uniform_graph(Solid s, double theta) {
  hyperideal::WeightedDualGraph g;
  g.gamma = solid_combinatorics(s);
  g.weights.assign(g.gamma.edges.size(), theta);
  return g;
}

}  // namespace fixtures
