#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "spidernet/graph.hpp"

namespace spidernet {

using Complex = std::complex<double>;

/// Amplitudes over the half-edges of a graph, indexed by its HalfEdgeIndex.
struct WalkState {
  std::vector<Complex> amplitudes;

  std::size_t size() const { return amplitudes.size(); }
  double squared_norm() const;
};

/// P(X = u) for every vertex u, indexed by vertex number.
struct VertexDistribution {
  std::vector<double> probabilities;

  double total() const;
};

// Grover coin: on each block H_u, out = (2/deg u) * sum(block) - in.
WalkState coin_apply(const Spidernet& g, const WalkState& s);

// Flip-flop shift: amplitude of (u,v) moves to (v,u).
WalkState shift_apply(const Spidernet& g, const WalkState& s);

// One step of U = S C.
WalkState step(const Spidernet& g, const WalkState& s);

// (1/sqrt a) * sum over v ~ o of delta_(o,v).
WalkState isotropic_initial_state(const Spidernet& g);

WalkState basis_state(const Spidernet& g, std::size_t half_edge);

Complex inner_product(const WalkState& lhs, const WalkState& rhs);

/// U^n s0. Throws RadiusTooSmall if the evolution could reach the truncation
/// boundary, i.e. unless (deepest source stratum of s0) + n + 2 <= radius.
WalkState evolve(const Spidernet& g, const WalkState& s0, int n);

VertexDistribution vertex_distribution(const Spidernet& g, const WalkState& s);

/// Sums a vertex distribution over each stratum V_0..V_R.
std::vector<double> stratum_distribution(const Spidernet& g, const VertexDistribution& d);

/// (1/N) sum_{n<N} P(X_n = .) for the walk started at s0. N >= 1.
VertexDistribution time_averaged_distribution(const Spidernet& g, const WalkState& s0, int N);

/// Largest stratum of a vertex u with a nonzero amplitude on some (u,v); -1 for
/// the zero state.
int support_depth(const Spidernet& g, const WalkState& s);

/// Rotation automorphism lifted to half-edges.
WalkState rotate_state(const Spidernet& g, const WalkState& s);

}  // namespace spidernet
