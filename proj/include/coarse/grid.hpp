#pragma once

#include <array>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <unordered_map>
#include <vector>

#include "coarse/graphs.hpp"

namespace coarse {

using Lattice2 = std::array<std::int64_t, 2>;

inline std::int64_t l1_distance(const Lattice2 &a, const Lattice2 &b) {
  return std::llabs(a[0] - b[0]) + std::llabs(a[1] - b[1]);
}

inline std::int64_t l1_norm(const Lattice2 &a) { return std::llabs(a[0]) + std::llabs(a[1]); }

/// Integer points of Z^2 with l1 norm at most `radius`, in lexicographic
/// order. The grid-graph metric restricted to the ball equals the l1 metric.
class GridBall {
public:
  explicit GridBall(int radius);

  int radius() const { return radius_; }
  int size() const { return static_cast<int>(points_.size()); }
  const std::vector<Lattice2> &points() const { return points_; }
  const Lattice2 &point(int i) const { return points_[i]; }
  std::optional<int> index_of(const Lattice2 &p) const;
  bool contains(const Lattice2 &p) const { return l1_norm(p) <= radius_; }

  /// Unit-step grid graph on the ball's points.
  FiniteGraph graph() const;

  /// 2k^2 + 2k + 1, the number of lattice points with l1 norm <= k.
  static std::int64_t capacity(std::int64_t k) { return 2 * k * k + 2 * k + 1; }

private:
  int radius_;
  std::vector<Lattice2> points_;
  std::unordered_map<std::int64_t, int> index_;
};

} // namespace coarse
