#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "coarse/rational.hpp"

namespace coarse {

using Vertex = int;

struct Edge {
  Vertex u;
  Vertex v;
  friend bool operator==(const Edge &, const Edge &) = default;
};

/// Finite undirected multigraph. Parallel edges are kept, self-loops are
/// rejected. The graph is immutable after construction; connectivity is
/// computed once and cached.
class FiniteGraph {
public:
  FiniteGraph() = default;

  /// Throws std::invalid_argument on an out-of-range endpoint or a self-loop.
  /// Disconnected input is accepted; check connected().
  FiniteGraph(int vertex_count, std::vector<Edge> edges);

  int vertex_count() const { return static_cast<int>(degrees_.size()); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge> &edges() const { return edges_; }
  const std::vector<int> &degrees() const { return degrees_; }
  int degree(Vertex v) const { return degrees_[v]; }
  int max_degree() const { return max_degree_; }
  bool connected() const { return connected_; }

  /// Neighbors of v, repeated once per parallel edge.
  std::span<const Vertex> neighbors(Vertex v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }

  /// Throws std::invalid_argument naming `what` when the graph is disconnected.
  void require_connected(std::string_view what) const;

private:
  std::vector<Edge> edges_;
  std::vector<int> degrees_;
  std::vector<int> offsets_;
  std::vector<Vertex> adjacency_;
  int max_degree_ = 0;
  bool connected_ = false;
};

FiniteGraph build_graph(int vertex_count, std::vector<Edge> edges);

FiniteGraph path_graph(int n);
FiniteGraph cycle_graph(int n);
FiniteGraph complete_graph(int n);

inline constexpr int kUnreachable = -1;

/// Breadth-first distances from `source`; kUnreachable for other components.
std::vector<int> bfs_distances(const FiniteGraph &g, Vertex source);

/// Shortest-path distance, or kUnreachable when u and v lie in different
/// components.
int graph_distance(const FiniteGraph &g, Vertex u, Vertex v);

/// Row-major n*n distance table.
std::vector<int> all_pairs_distances(const FiniteGraph &g);

/// {x : dist(x, A) = 1}, sorted ascending. Throws on empty or out-of-range A.
std::vector<Vertex> vertex_boundary(const FiniteGraph &g, std::span<const Vertex> a);

inline constexpr int kExhaustiveConductanceLimit = 24;

struct ConductanceResult {
  Rational value;
  std::vector<Vertex> witness;
};

/// min |dA|/|A| over nonempty A with |A| <= n/2, by exhaustive enumeration.
/// Limited to kExhaustiveConductanceLimit vertices.
ConductanceResult conductance_exact(const FiniteGraph &g);

/// Degree-8 Margulis / Gabber-Galil multigraph on (Z/n)^2. Vertex (x, y) has
/// index x*n + y. Edges join v to (x, x+y), (x, x+y+1), (x+y, y), (x+y+1, y);
/// the inverse maps contribute the same undirected edges. Loops are dropped.
FiniteGraph margulis_graph(int n);

inline constexpr int kRandomRegularRetries = 10000;

/// Simple d-regular graph from the configuration model, rejecting pairings
/// with loops or parallel edges. Deterministic in `seed`.
FiniteGraph random_regular(int n, int d, std::uint64_t seed);

enum class FamilyKind { margulis, random_regular, cycle };

FamilyKind parse_family_kind(std::string_view name);
std::string_view to_string(FamilyKind kind);

/// Indexed graph family. For margulis the size parameter is the side length
/// (members have size^2 vertices); otherwise it is the vertex count.
struct ExpanderFamily {
  FamilyKind kind = FamilyKind::margulis;
  std::vector<int> sizes;
  int degree = 0;
  std::uint64_t seed = 0;
  std::vector<FiniteGraph> members;
};

/// Member i of a random_regular family uses derive_seed(seed, i).
ExpanderFamily make_family(FamilyKind kind, std::vector<int> sizes, int degree = 4,
                           std::uint64_t seed = 0);

} // namespace coarse
