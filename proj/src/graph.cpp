#include "spidernet/graph.hpp"

#include <algorithm>
#include <limits>
#include <ostream>
#include <string>

#include "spidernet/error.hpp"

namespace spidernet {

void SpidernetParams::validate() const {
  if (a < 1 || b < 2 || c < 1 || c > b - 1) {
    throw InvalidParams("spidernet parameters violate a>=1, b>=2, 1<=c<=b-1: (" +
                        std::to_string(a) + "," + std::to_string(b) + "," +
                        std::to_string(c) + ")");
  }
}

HalfEdgeIndex::HalfEdgeIndex(std::vector<std::size_t> offsets, std::vector<std::size_t> targets)
    : offsets_(std::move(offsets)), targets_(std::move(targets)) {
  const std::size_t n = vertex_count();
  sources_.resize(targets_.size());
  for (std::size_t u = 0; u < n; ++u) {
    std::fill(sources_.begin() + static_cast<std::ptrdiff_t>(offsets_[u]),
              sources_.begin() + static_cast<std::ptrdiff_t>(offsets_[u + 1]), u);
  }
  reverse_.resize(targets_.size());
  for (std::size_t h = 0; h < targets_.size(); ++h) {
    auto back = find(targets_[h], sources_[h]);
    if (!back) throw InvalidParams("adjacency is not symmetric");
    reverse_[h] = *back;
  }
}

std::optional<std::size_t> HalfEdgeIndex::find(std::size_t u, std::size_t v) const {
  if (u >= vertex_count()) return std::nullopt;
  for (std::size_t h = offsets_[u]; h < offsets_[u + 1]; ++h) {
    if (targets_[h] == v) return h;
  }
  return std::nullopt;
}

std::size_t Spidernet::vertex(VertexId id) const {
  if (id.stratum < 0 || id.stratum > radius_ || id.index >= stratum_size(id.stratum)) {
    throw InvalidParams("vertex id out of range");
  }
  return stratum_offsets_[static_cast<std::size_t>(id.stratum)] + id.index;
}

VertexId Spidernet::vertex_id(std::size_t v) const {
  auto it = std::upper_bound(stratum_offsets_.begin(), stratum_offsets_.end(), v);
  const auto j = static_cast<std::size_t>(it - stratum_offsets_.begin()) - 1;
  return {static_cast<int>(j), v - stratum_offsets_[j]};
}

Direction Spidernet::direction(std::size_t h) const {
  const auto [u, v] = edges_.endpoints(h);
  const int ju = stratum_of(u);
  const int jv = stratum_of(v);
  if (jv == ju + 1) return Direction::kForward;
  if (jv == ju - 1) return Direction::kBackward;
  return Direction::kIntra;
}

std::size_t Spidernet::rotate(std::size_t v) const {
  const VertexId id = vertex_id(v);
  if (id.stratum == 0) return v;
  const auto j = static_cast<std::size_t>(id.stratum);
  const std::size_t m = stratum_sizes_[j];
  return stratum_offsets_[j] + (id.index + rotation_steps_[j]) % m;
}

namespace {

std::size_t checked_mul(std::size_t x, std::size_t y) {
  if (y != 0 && x > std::numeric_limits<std::size_t>::max() / y) {
    throw BudgetExceeded("spidernet size overflows");
  }
  return x * y;
}

}  // namespace

Spidernet build_spidernet(const SpidernetParams& params, int radius, const BuildOptions& options) {
  params.validate();
  if (radius < 0) throw InvalidParams("radius must be non-negative");

  const auto a = static_cast<std::size_t>(params.a);
  const auto c = static_cast<std::size_t>(params.c);
  const auto d = static_cast<std::size_t>(params.intra_degree());
  const auto R = static_cast<std::size_t>(radius);

  Spidernet g;
  g.params_ = params;
  g.radius_ = radius;
  g.stratum_sizes_.assign(R + 1, 0);
  g.rotation_steps_.assign(R + 1, 0);
  g.stratum_sizes_[0] = 1;
  for (std::size_t j = 1; j <= R; ++j) {
    g.stratum_sizes_[j] = j == 1 ? a : checked_mul(g.stratum_sizes_[j - 1], c);
    g.rotation_steps_[j] = j == 1 ? 1 : g.rotation_steps_[j - 1] * c;
  }

  // Each V_j must carry a simple (b-c-1)-regular circulant.
  if (d > 0) {
    for (std::size_t j = 1; j <= R; ++j) {
      const std::size_t m = g.stratum_sizes_[j];
      if (m <= d) {
        throw UnrealizableWiring("stratum " + std::to_string(j) + " has " + std::to_string(m) +
                                 " vertices, too few for intra-stratum degree " +
                                 std::to_string(d));
      }
      if (d % 2 == 1 && m % 2 == 1) {
        throw UnrealizableWiring("odd intra-stratum degree " + std::to_string(d) +
                                 " with odd stratum size " + std::to_string(m) + " at stratum " +
                                 std::to_string(j));
      }
    }
  }

  g.stratum_offsets_.assign(R + 2, 0);
  for (std::size_t j = 0; j <= R; ++j) {
    g.stratum_offsets_[j + 1] = g.stratum_offsets_[j] + g.stratum_sizes_[j];
  }
  const std::size_t n = g.stratum_offsets_[R + 1];

  auto degree_in = [&](std::size_t j) -> std::size_t {
    if (j == 0) return R == 0 ? 0 : a;
    return 1 + d + (j < R ? c : 0);
  };
  std::size_t total = 0;
  for (std::size_t j = 0; j <= R; ++j) {
    total += checked_mul(g.stratum_sizes_[j], degree_in(j));
    if (total > options.max_half_edges) {
      throw BudgetExceeded("spidernet of radius " + std::to_string(radius) + " needs more than " +
                           std::to_string(options.max_half_edges) + " half-edges");
    }
  }

  std::vector<std::size_t> offsets(n + 1, 0);
  std::vector<std::size_t> targets;
  targets.reserve(total);
  std::vector<std::size_t> intra;
  intra.reserve(d);

  for (std::size_t j = 0; j <= R; ++j) {
    const std::size_t m = g.stratum_sizes_[j];
    const std::size_t base = g.stratum_offsets_[j];
    for (std::size_t i = 0; i < m; ++i) {
      if (j == 0) {
        if (R >= 1) {
          for (std::size_t k = 0; k < a; ++k) targets.push_back(g.stratum_offsets_[1] + k);
        }
      } else {
        // backward
        const std::size_t parent = j == 1 ? 0 : g.stratum_offsets_[j - 1] + i / c;
        targets.push_back(parent);
        // intra, ascending
        intra.clear();
        for (std::size_t k = 1; k <= d / 2; ++k) {
          intra.push_back(base + (i + k) % m);
          intra.push_back(base + (i + m - k) % m);
        }
        if (d % 2 == 1) intra.push_back(base + (i + m / 2) % m);
        std::sort(intra.begin(), intra.end());
        targets.insert(targets.end(), intra.begin(), intra.end());
        // forward, ascending
        if (j < R) {
          const std::size_t child0 = g.stratum_offsets_[j + 1] + i * c;
          for (std::size_t k = 0; k < c; ++k) targets.push_back(child0 + k);
        }
      }
      offsets[base + i + 1] = targets.size();
    }
  }

  g.edges_ = HalfEdgeIndex(std::move(offsets), std::move(targets));
  return g;
}

int omega(const Spidernet& g, std::size_t u, Direction eps) {
  const int j = g.stratum_of(u);
  if (j >= g.radius()) {
    throw BoundaryVertex("vertex in stratum " + std::to_string(j) +
                         " has an incomplete neighbourhood (radius " +
                         std::to_string(g.radius()) + ")");
  }
  const int want = eps == Direction::kForward ? j + 1 : eps == Direction::kBackward ? j - 1 : j;
  int count = 0;
  for (std::size_t v : g.neighbors(u)) {
    if (g.stratum_of(v) == want) ++count;
  }
  return count;
}

void write_edge_list(const Spidernet& g, std::ostream& out) {
  const auto& he = g.half_edges();
  for (std::size_t h = 0; h < he.size(); ++h) {
    const auto [u, v] = he.endpoints(h);
    if (u >= v) continue;
    const VertexId x = g.vertex_id(u);
    const VertexId y = g.vertex_id(v);
    out << x.stratum << ':' << x.index << ' ' << y.stratum << ':' << y.index << '\n';
  }
}

}  // namespace spidernet
