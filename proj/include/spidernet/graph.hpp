#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace spidernet {

/// Parameters of the spidernet family S(a,b,c): the root has degree a, every
/// other vertex has degree b with c forward edges, one backward edge and
/// b-c-1 edges inside its own stratum.
struct SpidernetParams {
  int a = 1;
  int b = 2;
  int c = 1;

  /// Throws InvalidParams unless a >= 1, b >= 2 and 1 <= c <= b-1.
  void validate() const;

  int intra_degree() const { return b - c - 1; }
  bool is_tree() const { return intra_degree() == 0; }

  friend bool operator==(const SpidernetParams&, const SpidernetParams&) = default;
};

/// (stratum j, position i within V_j).
struct VertexId {
  int stratum = 0;
  std::size_t index = 0;

  friend bool operator==(const VertexId&, const VertexId&) = default;
};

enum class Direction { kForward, kBackward, kIntra };

/// Dense numbering of the half-edges (u,v), u ~ v. Half-edges leaving the same
/// vertex occupy a contiguous block, so the block of u is the coin block H_u.
class HalfEdgeIndex {
 public:
  HalfEdgeIndex() = default;
  HalfEdgeIndex(std::vector<std::size_t> offsets, std::vector<std::size_t> targets);

  std::size_t size() const { return targets_.size(); }
  std::size_t vertex_count() const { return offsets_.size() - 1; }

  std::size_t block_begin(std::size_t u) const { return offsets_[u]; }
  std::size_t block_end(std::size_t u) const { return offsets_[u + 1]; }

  std::size_t source(std::size_t h) const { return sources_[h]; }
  std::size_t target(std::size_t h) const { return targets_[h]; }
  std::pair<std::size_t, std::size_t> endpoints(std::size_t h) const {
    return {sources_[h], targets_[h]};
  }

  /// Index of the half-edge (v,u) for h = (u,v).
  std::size_t reverse(std::size_t h) const { return reverse_[h]; }
  std::span<const std::size_t> reversal() const { return reverse_; }

  /// Index of (u,v), or nullopt if u and v are not adjacent.
  std::optional<std::size_t> find(std::size_t u, std::size_t v) const;

  std::span<const std::size_t> neighbors(std::size_t u) const {
    return {targets_.data() + offsets_[u], offsets_[u + 1] - offsets_[u]};
  }

 private:
  std::vector<std::size_t> offsets_{0};
  std::vector<std::size_t> targets_;
  std::vector<std::size_t> sources_;
  std::vector<std::size_t> reverse_;
};

struct BuildOptions {
  /// Upper bound on the number of half-edges the builder will allocate.
  std::size_t max_half_edges = std::size_t{1} << 27;
};

/// A concrete rotationally symmetric spidernet truncated at radius R.
/// Immutable after construction.
class Spidernet {
 public:
  const SpidernetParams& params() const { return params_; }
  int radius() const { return radius_; }

  std::size_t vertex_count() const { return edges_.vertex_count(); }
  std::size_t half_edge_count() const { return edges_.size(); }
  std::size_t edge_count() const { return edges_.size() / 2; }

  std::span<const std::size_t> stratum_sizes() const { return stratum_sizes_; }
  std::size_t stratum_size(int j) const { return stratum_sizes_.at(static_cast<std::size_t>(j)); }
  std::size_t stratum_offset(int j) const { return stratum_offsets_.at(static_cast<std::size_t>(j)); }

  std::size_t root() const { return 0; }
  std::size_t vertex(VertexId id) const;
  VertexId vertex_id(std::size_t v) const;
  int stratum_of(std::size_t v) const { return vertex_id(v).stratum; }

  std::size_t degree(std::size_t v) const {
    return edges_.block_end(v) - edges_.block_begin(v);
  }
  std::span<const std::size_t> neighbors(std::size_t v) const { return edges_.neighbors(v); }
  const HalfEdgeIndex& half_edges() const { return edges_; }

  /// Classification of the half-edge h = (u,v) by the strata of u and v.
  Direction direction(std::size_t h) const;

  /// Image of v under the rotation (j,i) -> (j, i + c^{j-1} mod |V_j|), an
  /// automorphism of order a fixing the root and respecting parents.
  std::size_t rotate(std::size_t v) const;

  friend Spidernet build_spidernet(const SpidernetParams&, int, const BuildOptions&);

 private:
  SpidernetParams params_;
  int radius_ = 0;
  std::vector<std::size_t> stratum_sizes_;
  std::vector<std::size_t> stratum_offsets_;
  std::vector<std::size_t> rotation_steps_;
  HalfEdgeIndex edges_;
};

/// Builds the canonical instance: parent of (j+1,i) is (j, i/c); each stratum
/// carries a circulant on offsets 1..floor((b-c-1)/2), plus the antipodal
/// matching when b-c-1 is odd. Deterministic.
Spidernet build_spidernet(const SpidernetParams& params, int radius,
                          const BuildOptions& options = {});

/// |{v in V_{j+eps} : v ~ u}| for u in V_j. Throws BoundaryVertex for u in V_R.
int omega(const Spidernet& g, std::size_t u, Direction eps);

/// Writes one "j:i j:i" line per undirected edge, ordered by vertex number.
void write_edge_list(const Spidernet& g, std::ostream& out);

}  // namespace spidernet
