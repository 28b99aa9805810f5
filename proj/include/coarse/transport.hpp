#pragma once

#include <span>
#include <string>
#include <vector>

#include "coarse/graphs.hpp"
#include "coarse/grid.hpp"

namespace coarse {

/// Finite metric space given by its full distance table.
class MetricSpaceTable {
public:
  MetricSpaceTable() = default;
  /// Row-major n*n table. Validates zero diagonal, symmetry and the triangle
  /// inequality: on every triple up to kExhaustiveMetricCheck points, on a
  /// deterministic sample of triples above. Throws std::invalid_argument.
  MetricSpaceTable(int n, std::vector<double> distances);

  static MetricSpaceTable from_graph(const FiniteGraph &g);
  static MetricSpaceTable from_grid(const GridBall &ball);

  int size() const { return n_; }
  double operator()(int i, int j) const { return d_[static_cast<std::size_t>(i) * n_ + j]; }
  double diameter() const;

  static constexpr int kExhaustiveMetricCheck = 512;

private:
  int n_ = 0;
  std::vector<double> d_;
};

/// Nonnegative weights on distinct points of an ambient space.
class FiniteMeasure {
public:
  FiniteMeasure() = default;
  FiniteMeasure(std::vector<int> support, std::vector<double> weights);

  static FiniteMeasure dirac(int point, double mass = 1.0);

  const std::vector<int> &support() const { return support_; }
  const std::vector<double> &weights() const { return weights_; }
  double total_mass() const { return total_mass_; }
  bool empty() const { return support_.empty(); }

private:
  std::vector<int> support_;
  std::vector<double> weights_;
  double total_mass_ = 0.0;
};

struct TransportFlow {
  int source;
  int sink;
  double amount;
};

struct TransportPlan {
  double cost = 0.0;
  std::vector<TransportFlow> flows;
  int pivots = 0;
};

/// Balanced transportation problem by the network simplex method on the
/// bipartite source/sink tree (north-west corner start, Dantzig pricing,
/// Bland's rule once the pivot budget suggests cycling). `cost` is row-major
/// supply.size() x demand.size().
TransportPlan solve_transport(std::span<const double> supply, std::span<const double> demand,
                              std::span<const double> cost);

/// Relative tolerance on the total-mass match required by kr_distance.
inline constexpr double kMassTolerance = 1e-12;

/// Kantorovich-Rubinstein (Wasserstein-1) distance between measures of equal
/// total mass, as a min-cost transport over the support product.
double kr_distance(const FiniteMeasure &mu, const FiniteMeasure &nu, const MetricSpaceTable &space);
TransportPlan kr_plan(const FiniteMeasure &mu, const FiniteMeasure &nu,
                      const MetricSpaceTable &space);

/// sum_i lambda_i g(x_i). `values[p]` is g(p); an empty entry or an index past
/// the end means g is undefined there (std::out_of_range).
std::vector<double> bary_extend(std::span<const std::vector<double>> values,
                                const FiniteMeasure &mu);

/// Partition-of-unity measure at x: weight max(0, K - d(x, x_i)) on each net
/// point x_i, normalised to total mass 1. Throws std::invalid_argument when no
/// net point lies within distance < K of x.
FiniteMeasure partition_map(const MetricSpaceTable &space, std::span<const int> net, double k,
                            int x);

struct PsiAudit {
  double lipschitz_empirical = 0.0;
  int multiplicity = 0; ///< max_x |{i : d(x, x_i) < K}|
  long pairs_checked = 0;
  int worst_x = -1;
  int worst_y = -1;
};

/// Max of kr(psi(x), psi(y)) / d(x, y) over pairs with 0 < d(x, y) <= K.
PsiAudit psi_lipschitz_audit(const MetricSpaceTable &space, std::span<const int> net, double k);

/// Measure JSON: {"space": "<edge-list path>", "atoms": [{"point": i, "weight": w}, ...]}.
/// "space" may also be an inline object {"n": n, "distances": [[...], ...]}.
struct MeasureDocument {
  std::string space_path; ///< empty when the table is inline
  MetricSpaceTable inline_space;
  FiniteMeasure measure;
};

MeasureDocument parse_measure_json(const std::string &text);
std::string measure_to_json(const FiniteMeasure &mu, const std::string &space_path);

} // namespace coarse
