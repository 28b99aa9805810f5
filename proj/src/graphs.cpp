#include "coarse/graphs.hpp"

#include <algorithm>
#include <bit>
#include <queue>
#include <stdexcept>
#include <string>

#include "coarse/rng.hpp"

namespace coarse {

FiniteGraph::FiniteGraph(int vertex_count, std::vector<Edge> edges) : edges_(std::move(edges)) {
  if (vertex_count <= 0)
    throw std::invalid_argument("graph needs at least one vertex");
  degrees_.assign(vertex_count, 0);
  for (const Edge &e : edges_) {
    if (e.u < 0 || e.v < 0 || e.u >= vertex_count || e.v >= vertex_count)
      throw std::invalid_argument("edge endpoint out of range: (" + std::to_string(e.u) + "," +
                                  std::to_string(e.v) + ")");
    if (e.u == e.v)
      throw std::invalid_argument("self-loop at vertex " + std::to_string(e.u));
    ++degrees_[e.u];
    ++degrees_[e.v];
  }
  offsets_.assign(vertex_count + 1, 0);
  for (int v = 0; v < vertex_count; ++v)
    offsets_[v + 1] = offsets_[v] + degrees_[v];
  adjacency_.resize(offsets_.back());
  std::vector<int> fill(offsets_.begin(), offsets_.end() - 1);
  for (const Edge &e : edges_) {
    adjacency_[fill[e.u]++] = e.v;
    adjacency_[fill[e.v]++] = e.u;
  }
  max_degree_ = *std::max_element(degrees_.begin(), degrees_.end());

  std::vector<char> seen(vertex_count, 0);
  std::vector<Vertex> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const Vertex x = stack.back();
    stack.pop_back();
    for (Vertex y : neighbors(x))
      if (!seen[y]) {
        seen[y] = 1;
        ++reached;
        stack.push_back(y);
      }
  }
  connected_ = reached == vertex_count;
}

void FiniteGraph::require_connected(std::string_view what) const {
  if (!connected_)
    throw std::invalid_argument(std::string(what) + " requires a connected graph");
}

FiniteGraph build_graph(int vertex_count, std::vector<Edge> edges) {
  return FiniteGraph(vertex_count, std::move(edges));
}

FiniteGraph path_graph(int n) {
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < n; ++i)
    edges.push_back({i, i + 1});
  return FiniteGraph(n, std::move(edges));
}

FiniteGraph cycle_graph(int n) {
  if (n < 3)
    throw std::invalid_argument("cycle needs at least 3 vertices");
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i)
    edges.push_back({i, (i + 1) % n});
  return FiniteGraph(n, std::move(edges));
}

FiniteGraph complete_graph(int n) {
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      edges.push_back({i, j});
  return FiniteGraph(n, std::move(edges));
}

std::vector<int> bfs_distances(const FiniteGraph &g, Vertex source) {
  if (source < 0 || source >= g.vertex_count())
    throw std::out_of_range("vertex out of range");
  std::vector<int> dist(g.vertex_count(), kUnreachable);
  std::queue<Vertex> queue;
  dist[source] = 0;
  queue.push(source);
  while (!queue.empty()) {
    const Vertex x = queue.front();
    queue.pop();
    for (Vertex y : g.neighbors(x))
      if (dist[y] == kUnreachable) {
        dist[y] = dist[x] + 1;
        queue.push(y);
      }
  }
  return dist;
}

int graph_distance(const FiniteGraph &g, Vertex u, Vertex v) {
  if (v < 0 || v >= g.vertex_count())
    throw std::out_of_range("vertex out of range");
  return bfs_distances(g, u)[v];
}

std::vector<int> all_pairs_distances(const FiniteGraph &g) {
  const int n = g.vertex_count();
  std::vector<int> table(static_cast<std::size_t>(n) * n);
  for (int s = 0; s < n; ++s) {
    const auto row = bfs_distances(g, s);
    std::copy(row.begin(), row.end(), table.begin() + static_cast<std::size_t>(s) * n);
  }
  return table;
}

std::vector<Vertex> vertex_boundary(const FiniteGraph &g, std::span<const Vertex> a) {
  if (a.empty())
    throw std::invalid_argument("vertex_boundary: empty vertex set");
  const int n = g.vertex_count();
  std::vector<char> in_a(n, 0), in_boundary(n, 0);
  for (Vertex v : a) {
    if (v < 0 || v >= n)
      throw std::out_of_range("vertex_boundary: vertex out of range");
    in_a[v] = 1;
  }
  for (Vertex v : a)
    for (Vertex y : g.neighbors(v))
      if (!in_a[y])
        in_boundary[y] = 1;
  std::vector<Vertex> out;
  for (int v = 0; v < n; ++v)
    if (in_boundary[v])
      out.push_back(v);
  return out;
}

namespace {

struct ConductanceSearch {
  int n = 0;
  int limit = 0;
  std::vector<std::uint32_t> adjacency_mask;
  std::int64_t best_num = 1;
  std::int64_t best_den = 0;
  std::uint32_t best_set = 0;

  void visit(int next, std::uint32_t set, std::uint32_t reach, int size) {
    if (size > 0) {
      const int boundary = std::popcount(reach & ~set);
      // boundary/size < best_num/best_den
      if (best_den == 0 || static_cast<std::int64_t>(boundary) * best_den < best_num * size) {
        best_num = boundary;
        best_den = size;
        best_set = set;
      }
    }
    if (size == limit)
      return;
    for (int v = next; v < n; ++v)
      visit(v + 1, set | (1u << v), reach | adjacency_mask[v], size + 1);
  }
};

} // namespace

ConductanceResult conductance_exact(const FiniteGraph &g) {
  const int n = g.vertex_count();
  if (n > kExhaustiveConductanceLimit)
    throw std::invalid_argument("conductance_exact: " + std::to_string(n) +
                                " vertices exceeds the exhaustive limit of " +
                                std::to_string(kExhaustiveConductanceLimit) +
                                "; use the spectral lower bound lambda1/(2d) instead");
  if (n < 2)
    throw std::invalid_argument("conductance_exact: need at least two vertices");
  g.require_connected("conductance_exact");
  ConductanceSearch search;
  search.n = n;
  search.limit = n / 2;
  search.adjacency_mask.assign(n, 0);
  for (int v = 0; v < n; ++v)
    for (Vertex y : g.neighbors(v))
      search.adjacency_mask[v] |= 1u << y;
  search.visit(0, 0, 0, 0);

  ConductanceResult result{Rational(search.best_num, search.best_den), {}};
  for (int v = 0; v < n; ++v)
    if (search.best_set & (1u << v))
      result.witness.push_back(v);
  return result;
}

FiniteGraph margulis_graph(int n) {
  if (n < 2)
    throw std::invalid_argument("margulis_graph: n must be at least 2");
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(4) * n * n);
  auto index = [n](int x, int y) { return (x % n) * n + (y % n); };
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      const Vertex v = index(x, y);
      const Vertex images[4] = {index(x, x + y), index(x, x + y + 1), index(x + y, y),
                                index(x + y + 1, y)};
      for (Vertex w : images)
        if (w != v)
          edges.push_back({v, w});
    }
  return FiniteGraph(n * n, std::move(edges));
}

FiniteGraph random_regular(int n, int d, std::uint64_t seed) {
  if (n <= 0 || d <= 0)
    throw std::invalid_argument("random_regular: n and d must be positive");
  if ((static_cast<long>(n) * d) % 2 != 0)
    throw std::invalid_argument("random_regular: n*d must be even");
  if (d >= n)
    throw std::invalid_argument("random_regular: d must be smaller than n");

  Rng rng(seed);
  std::vector<Vertex> stubs;
  stubs.reserve(static_cast<std::size_t>(n) * d);
  for (int v = 0; v < n; ++v)
    for (int k = 0; k < d; ++k)
      stubs.push_back(v);

  std::vector<std::vector<Vertex>> adjacent(n);
  for (int attempt = 0; attempt < kRandomRegularRetries; ++attempt) {
    rng.shuffle(stubs);
    for (auto &row : adjacent)
      row.clear();
    std::vector<Edge> edges;
    bool ok = true;
    for (std::size_t i = 0; i < stubs.size(); i += 2) {
      const Vertex a = stubs[i], b = stubs[i + 1];
      if (a == b || std::find(adjacent[a].begin(), adjacent[a].end(), b) != adjacent[a].end()) {
        ok = false;
        break;
      }
      adjacent[a].push_back(b);
      adjacent[b].push_back(a);
      edges.push_back({std::min(a, b), std::max(a, b)});
    }
    if (ok) {
      std::sort(edges.begin(), edges.end(), [](const Edge &l, const Edge &r) {
        return l.u != r.u ? l.u < r.u : l.v < r.v;
      });
      return FiniteGraph(n, std::move(edges));
    }
  }
  throw std::runtime_error("random_regular: no simple pairing found after " +
                           std::to_string(kRandomRegularRetries) + " attempts");
}

FamilyKind parse_family_kind(std::string_view name) {
  if (name == "margulis")
    return FamilyKind::margulis;
  if (name == "random-regular" || name == "random_regular")
    return FamilyKind::random_regular;
  if (name == "cycle" || name == "cycles")
    return FamilyKind::cycle;
  throw std::invalid_argument("unknown family kind: " + std::string(name));
}

std::string_view to_string(FamilyKind kind) {
  switch (kind) {
  case FamilyKind::margulis:
    return "margulis";
  case FamilyKind::random_regular:
    return "random-regular";
  case FamilyKind::cycle:
    return "cycle";
  }
  return "?";
}

ExpanderFamily make_family(FamilyKind kind, std::vector<int> sizes, int degree,
                           std::uint64_t seed) {
  if (sizes.empty())
    throw std::invalid_argument("family needs at least one member");
  for (std::size_t i = 1; i < sizes.size(); ++i)
    if (sizes[i] <= sizes[i - 1])
      throw std::invalid_argument("family sizes must be strictly increasing");
  ExpanderFamily fam;
  fam.kind = kind;
  fam.sizes = std::move(sizes);
  fam.seed = seed;
  for (std::size_t i = 0; i < fam.sizes.size(); ++i) {
    const int s = fam.sizes[i];
    switch (kind) {
    case FamilyKind::margulis:
      fam.members.push_back(margulis_graph(s));
      break;
    case FamilyKind::random_regular:
      fam.members.push_back(random_regular(s, degree, derive_seed(seed, i)));
      break;
    case FamilyKind::cycle:
      fam.members.push_back(cycle_graph(s));
      break;
    }
  }
  fam.degree = 0;
  for (const auto &m : fam.members)
    fam.degree = std::max(fam.degree, m.max_degree());
  return fam;
}

} // namespace coarse
