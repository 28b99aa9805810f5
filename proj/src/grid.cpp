#include "coarse/grid.hpp"

#include <stdexcept>

namespace coarse {

namespace {

std::int64_t key(const Lattice2 &p) { return (p[0] << 32) ^ (p[1] & 0xffffffff); }

} // namespace

GridBall::GridBall(int radius) : radius_(radius) {
  if (radius < 0)
    throw std::invalid_argument("GridBall: negative radius");
  for (std::int64_t x = -radius; x <= radius; ++x) {
    const std::int64_t span = radius - std::llabs(x);
    for (std::int64_t y = -span; y <= span; ++y) {
      index_.emplace(key({x, y}), static_cast<int>(points_.size()));
      points_.push_back({x, y});
    }
  }
}

std::optional<int> GridBall::index_of(const Lattice2 &p) const {
  if (!contains(p))
    return std::nullopt;
  return index_.at(key(p));
}

FiniteGraph GridBall::graph() const {
  std::vector<Edge> edges;
  for (int i = 0; i < size(); ++i) {
    const Lattice2 &p = points_[i];
    for (const Lattice2 q : {Lattice2{p[0] + 1, p[1]}, Lattice2{p[0], p[1] + 1}})
      if (auto j = index_of(q))
        edges.push_back({i, *j});
  }
  return FiniteGraph(size(), std::move(edges));
}

} // namespace coarse
