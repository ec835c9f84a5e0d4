#include "spidernet/grover_walk.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spidernet/error.hpp"

namespace spidernet {

double WalkState::squared_norm() const {
  double sum = 0.0;
  for (const Complex& z : amplitudes) sum += std::norm(z);
  return sum;
}

double VertexDistribution::total() const {
  double sum = 0.0;
  for (double x : probabilities) sum += x;
  return sum;
}

namespace {

void require_dimension(const Spidernet& g, const WalkState& s) {
  if (s.size() != g.half_edge_count()) {
    throw DimensionMismatch("state has " + std::to_string(s.size()) + " amplitudes, graph has " +
                            std::to_string(g.half_edge_count()) + " half-edges");
  }
}

}  // namespace

WalkState coin_apply(const Spidernet& g, const WalkState& s) {
  require_dimension(g, s);
  const auto& he = g.half_edges();
  WalkState out{std::vector<Complex>(s.size())};
  for (std::size_t u = 0; u < g.vertex_count(); ++u) {
    const std::size_t begin = he.block_begin(u);
    const std::size_t end = he.block_end(u);
    if (begin == end) continue;
    Complex sum = 0.0;
    for (std::size_t h = begin; h < end; ++h) sum += s.amplitudes[h];
    const Complex mean2 = sum * (2.0 / static_cast<double>(end - begin));
    for (std::size_t h = begin; h < end; ++h) out.amplitudes[h] = mean2 - s.amplitudes[h];
  }
  return out;
}

WalkState shift_apply(const Spidernet& g, const WalkState& s) {
  require_dimension(g, s);
  const auto rev = g.half_edges().reversal();
  WalkState out{std::vector<Complex>(s.size())};
  for (std::size_t h = 0; h < s.size(); ++h) out.amplitudes[rev[h]] = s.amplitudes[h];
  return out;
}

WalkState step(const Spidernet& g, const WalkState& s) { return shift_apply(g, coin_apply(g, s)); }

WalkState isotropic_initial_state(const Spidernet& g) {
  if (g.radius() < 1) throw RadiusTooSmall("the isotropic state needs radius >= 1");
  WalkState s{std::vector<Complex>(g.half_edge_count())};
  const auto& he = g.half_edges();
  const double amp = 1.0 / std::sqrt(static_cast<double>(g.params().a));
  for (std::size_t h = he.block_begin(g.root()); h < he.block_end(g.root()); ++h) {
    s.amplitudes[h] = amp;
  }
  return s;
}

WalkState basis_state(const Spidernet& g, std::size_t half_edge) {
  WalkState s{std::vector<Complex>(g.half_edge_count())};
  s.amplitudes.at(half_edge) = 1.0;
  return s;
}

Complex inner_product(const WalkState& lhs, const WalkState& rhs) {
  if (lhs.size() != rhs.size()) throw DimensionMismatch("inner product of states of different size");
  Complex sum = 0.0;
  for (std::size_t h = 0; h < lhs.size(); ++h) sum += std::conj(lhs.amplitudes[h]) * rhs.amplitudes[h];
  return sum;
}

int support_depth(const Spidernet& g, const WalkState& s) {
  require_dimension(g, s);
  const auto& he = g.half_edges();
  int depth = -1;
  for (int j = g.radius(); j >= 0 && depth < 0; --j) {
    const std::size_t first = g.stratum_offset(j);
    const std::size_t last = first + g.stratum_size(j);
    for (std::size_t h = he.block_begin(first); h < he.block_end(last - 1); ++h) {
      if (s.amplitudes[h] != Complex{}) {
        depth = j;
        break;
      }
    }
  }
  return depth;
}

namespace {

void require_room(const Spidernet& g, const WalkState& s0, int n) {
  if (n < 0) throw InvalidParams("number of steps must be non-negative");
  const int depth = std::max(support_depth(g, s0), 0);
  if (depth + n + 2 > g.radius()) {
    throw RadiusTooSmall("evolving " + std::to_string(n) + " steps from support depth " +
                         std::to_string(depth) + " needs radius >= " +
                         std::to_string(depth + n + 2) + ", graph has " +
                         std::to_string(g.radius()));
  }
}

}  // namespace

WalkState evolve(const Spidernet& g, const WalkState& s0, int n) {
  require_room(g, s0, n);
  WalkState s = s0;
  for (int k = 0; k < n; ++k) s = step(g, s);
  return s;
}

VertexDistribution vertex_distribution(const Spidernet& g, const WalkState& s) {
  require_dimension(g, s);
  const auto& he = g.half_edges();
  VertexDistribution d{std::vector<double>(g.vertex_count(), 0.0)};
  for (std::size_t u = 0; u < g.vertex_count(); ++u) {
    double p = 0.0;
    for (std::size_t h = he.block_begin(u); h < he.block_end(u); ++h) p += std::norm(s.amplitudes[h]);
    d.probabilities[u] = p;
  }
  return d;
}

std::vector<double> stratum_distribution(const Spidernet& g, const VertexDistribution& d) {
  std::vector<double> out(static_cast<std::size_t>(g.radius()) + 1, 0.0);
  for (int j = 0; j <= g.radius(); ++j) {
    const std::size_t first = g.stratum_offset(j);
    for (std::size_t i = 0; i < g.stratum_size(j); ++i) {
      out[static_cast<std::size_t>(j)] += d.probabilities.at(first + i);
    }
  }
  return out;
}

VertexDistribution time_averaged_distribution(const Spidernet& g, const WalkState& s0, int N) {
  if (N < 1) throw InvalidParams("time average needs N >= 1");
  require_room(g, s0, N - 1);
  VertexDistribution avg{std::vector<double>(g.vertex_count(), 0.0)};
  WalkState s = s0;
  for (int n = 0; n < N; ++n) {
    if (n > 0) s = step(g, s);
    const VertexDistribution d = vertex_distribution(g, s);
    for (std::size_t u = 0; u < avg.probabilities.size(); ++u) avg.probabilities[u] += d.probabilities[u];
  }
  for (double& x : avg.probabilities) x /= static_cast<double>(N);
  return avg;
}

WalkState rotate_state(const Spidernet& g, const WalkState& s) {
  require_dimension(g, s);
  const auto& he = g.half_edges();
  WalkState out{std::vector<Complex>(s.size())};
  for (std::size_t h = 0; h < s.size(); ++h) {
    const auto [u, v] = he.endpoints(h);
    const auto image = he.find(g.rotate(u), g.rotate(v));
    if (!image) throw InvalidParams("rotation is not an automorphism of this graph");
    out.amplitudes[*image] = s.amplitudes[h];
  }
  return out;
}

}  // namespace spidernet
