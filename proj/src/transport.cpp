#include "coarse/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>

#include <json.hpp>

#include "coarse/rng.hpp"

namespace coarse {

MetricSpaceTable::MetricSpaceTable(int n, std::vector<double> distances)
    : n_(n), d_(std::move(distances)) {
  if (n <= 0)
    throw std::invalid_argument("metric space needs at least one point");
  if (d_.size() != static_cast<std::size_t>(n) * n)
    throw std::invalid_argument("metric table must have n*n entries");
  double scale = 0.0;
  for (double x : d_) {
    if (!std::isfinite(x) || x < 0.0)
      throw std::invalid_argument("metric table entries must be finite and nonnegative");
    scale = std::max(scale, x);
  }
  const double tol = 1e-12 * std::max(1.0, scale);
  for (int i = 0; i < n; ++i) {
    if ((*this)(i, i) != 0.0)
      throw std::invalid_argument("metric table diagonal must be zero");
    for (int j = i + 1; j < n; ++j) {
      if ((*this)(i, j) != (*this)(j, i))
        throw std::invalid_argument("metric table must be symmetric");
      if ((*this)(i, j) == 0.0)
        throw std::invalid_argument("distinct points at distance zero");
    }
  }
  auto check = [&](int i, int j, int k) {
    if ((*this)(i, k) > (*this)(i, j) + (*this)(j, k) + tol)
      throw std::invalid_argument("triangle inequality fails at (" + std::to_string(i) + "," +
                                  std::to_string(j) + "," + std::to_string(k) + ")");
  };
  if (n <= kExhaustiveMetricCheck) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          check(i, j, k);
  } else {
    Rng rng(0x7a61e);
    for (long s = 0; s < 4'000'000; ++s)
      check(rng.index(n), rng.index(n), rng.index(n));
  }
}

MetricSpaceTable MetricSpaceTable::from_graph(const FiniteGraph &g) {
  g.require_connected("MetricSpaceTable::from_graph");
  const auto table = all_pairs_distances(g);
  return MetricSpaceTable(g.vertex_count(), std::vector<double>(table.begin(), table.end()));
}

MetricSpaceTable MetricSpaceTable::from_grid(const GridBall &ball) {
  const int n = ball.size();
  std::vector<double> d(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      d[static_cast<std::size_t>(i) * n + j] =
          static_cast<double>(l1_distance(ball.point(i), ball.point(j)));
  return MetricSpaceTable(n, std::move(d));
}

double MetricSpaceTable::diameter() const { return *std::max_element(d_.begin(), d_.end()); }

FiniteMeasure::FiniteMeasure(std::vector<int> support, std::vector<double> weights)
    : support_(std::move(support)), weights_(std::move(weights)) {
  if (support_.size() != weights_.size())
    throw std::invalid_argument("measure support and weights differ in length");
  std::vector<int> sorted = support_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("measure support points must be distinct");
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (!(weights_[i] >= 0.0) || !std::isfinite(weights_[i]))
      throw std::invalid_argument("measure weights must be finite and nonnegative");
    if (support_[i] < 0)
      throw std::invalid_argument("measure support point must be nonnegative");
    total_mass_ += weights_[i];
  }
}

FiniteMeasure FiniteMeasure::dirac(int point, double mass) { return FiniteMeasure({point}, {mass}); }

namespace {

/// Network simplex specialised to the complete bipartite transportation
/// graph. Nodes 0..m-1 are sources, m..m+k-1 sinks; the basis is a spanning
/// tree with m+k-1 cells.
class TransportSimplex {
public:
  TransportSimplex(std::span<const double> supply, std::span<const double> demand,
                   std::span<const double> cost)
      : m_(static_cast<int>(supply.size())), k_(static_cast<int>(demand.size())), cost_(cost),
        flow_(static_cast<std::size_t>(m_) * k_, 0.0),
        basic_(static_cast<std::size_t>(m_) * k_, 0) {
    north_west_corner(supply, demand);
  }

  TransportPlan run() {
    double max_cost = 0.0;
    for (double c : cost_)
      max_cost = std::max(max_cost, std::abs(c));
    const double eps = 1e-12 * std::max(1.0, max_cost);
    const long dantzig_budget = 50L * (m_ + k_) * (m_ + k_) + 1000;
    const long total_budget = dantzig_budget + 200L * (m_ + k_) * (m_ + k_) * (m_ + k_) + 10000;

    TransportPlan plan;
    for (long pivot = 0;; ++pivot) {
      if (pivot > total_budget)
        throw std::runtime_error("solve_transport: pivot budget exhausted");
      compute_potentials();
      const bool bland = pivot >= dantzig_budget;
      int enter_i = -1, enter_j = -1;
      double best = -eps;
      for (int i = 0; i < m_ && !(bland && enter_i >= 0); ++i)
        for (int j = 0; j < k_; ++j) {
          if (basic_[cell(i, j)])
            continue;
          const double reduced = cost_[cell(i, j)] - u_[i] - v_[j];
          if (reduced < best) {
            best = reduced;
            enter_i = i;
            enter_j = j;
            if (bland)
              break;
          }
        }
      if (enter_i < 0) {
        plan.pivots = static_cast<int>(pivot);
        break;
      }
      pivot_on(enter_i, enter_j);
    }

    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < k_; ++j)
        if (basic_[cell(i, j)] && flow_[cell(i, j)] > 0.0) {
          plan.flows.push_back({i, j, flow_[cell(i, j)]});
          plan.cost += flow_[cell(i, j)] * cost_[cell(i, j)];
        }
    return plan;
  }

private:
  std::size_t cell(int i, int j) const { return static_cast<std::size_t>(i) * k_ + j; }

  void north_west_corner(std::span<const double> supply, std::span<const double> demand) {
    std::vector<double> a(supply.begin(), supply.end()), b(demand.begin(), demand.end());
    int i = 0, j = 0;
    while (true) {
      const std::size_t c = cell(i, j);
      basic_[c] = 1;
      if (i == m_ - 1 && j == k_ - 1) {
        // Absorb floating-point imbalance in the final cell.
        flow_[c] = std::max(0.0, std::min(a[i], b[j]));
        break;
      }
      const double x = (i == m_ - 1) ? b[j] : (j == k_ - 1 ? a[i] : std::min(a[i], b[j]));
      flow_[c] = std::max(0.0, x);
      a[i] -= x;
      b[j] -= x;
      if (i == m_ - 1)
        ++j;
      else if (j == k_ - 1)
        ++i;
      else if (a[i] <= b[j])
        ++i;
      else
        ++j;
    }
  }

  void build_tree() {
    tree_.assign(m_ + k_, {});
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < k_; ++j)
        if (basic_[cell(i, j)]) {
          tree_[i].push_back(m_ + j);
          tree_[m_ + j].push_back(i);
        }
  }

  void compute_potentials() {
    build_tree();
    u_.assign(m_, 0.0);
    v_.assign(k_, 0.0);
    std::vector<char> seen(m_ + k_, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      const int node = stack.back();
      stack.pop_back();
      for (int other : tree_[node]) {
        if (seen[other])
          continue;
        seen[other] = 1;
        if (node < m_)
          v_[other - m_] = cost_[cell(node, other - m_)] - u_[node];
        else
          u_[other] = cost_[cell(other, node - m_)] - v_[node - m_];
        stack.push_back(other);
      }
    }
  }

  /// Tree path from source node `from` to sink node `to`, as node sequence.
  std::vector<int> tree_path(int from, int to) const {
    std::vector<int> parent(m_ + k_, -1);
    std::vector<int> stack{from};
    parent[from] = from;
    while (!stack.empty()) {
      const int node = stack.back();
      stack.pop_back();
      if (node == to)
        break;
      for (int other : tree_[node])
        if (parent[other] < 0) {
          parent[other] = node;
          stack.push_back(other);
        }
    }
    if (parent[to] < 0)
      throw std::logic_error("transport basis is not a spanning tree");
    std::vector<int> path{to};
    while (path.back() != from)
      path.push_back(parent[path.back()]);
    std::reverse(path.begin(), path.end());
    return path;
  }

  void pivot_on(int enter_i, int enter_j) {
    const auto path = tree_path(enter_i, m_ + enter_j);
    // Cells along the path, from the source end. Odd positions (1-based)
    // lose flow, even positions gain it.
    std::vector<std::size_t> cells;
    for (std::size_t t = 0; t + 1 < path.size(); ++t) {
      const int a = path[t], b = path[t + 1];
      cells.push_back(a < m_ ? cell(a, b - m_) : cell(b, a - m_));
    }
    double theta = std::numeric_limits<double>::infinity();
    std::size_t leaving = 0;
    for (std::size_t t = 0; t < cells.size(); t += 2)
      if (flow_[cells[t]] < theta || (flow_[cells[t]] == theta && cells[t] < leaving)) {
        theta = flow_[cells[t]];
        leaving = cells[t];
      }
    for (std::size_t t = 0; t < cells.size(); ++t)
      flow_[cells[t]] += (t % 2 == 0) ? -theta : theta;
    flow_[leaving] = 0.0;
    const std::size_t entering = cell(enter_i, enter_j);
    flow_[entering] = theta;
    basic_[entering] = 1;
    basic_[leaving] = 0;
  }

  int m_, k_;
  std::span<const double> cost_;
  std::vector<double> flow_;
  std::vector<char> basic_;
  std::vector<double> u_, v_;
  std::vector<std::vector<int>> tree_;
};

} // namespace

TransportPlan solve_transport(std::span<const double> supply, std::span<const double> demand,
                              std::span<const double> cost) {
  if (supply.empty() || demand.empty())
    throw std::invalid_argument("solve_transport: empty supply or demand");
  if (cost.size() != supply.size() * demand.size())
    throw std::invalid_argument("solve_transport: cost matrix has the wrong size");
  for (double x : supply)
    if (!(x >= 0.0))
      throw std::invalid_argument("solve_transport: negative supply");
  for (double x : demand)
    if (!(x >= 0.0))
      throw std::invalid_argument("solve_transport: negative demand");
  return TransportSimplex(supply, demand, cost).run();
}

namespace {

void check_compatible(const FiniteMeasure &mu, const FiniteMeasure &nu,
                      const MetricSpaceTable &space) {
  if (mu.empty() || nu.empty())
    throw std::invalid_argument("kr_distance: empty measure");
  const double scale = std::max({1.0, mu.total_mass(), nu.total_mass()});
  if (std::abs(mu.total_mass() - nu.total_mass()) > kMassTolerance * scale)
    throw std::invalid_argument("kr_distance: measures have different total mass");
  for (const auto *m : {&mu, &nu})
    for (int p : m->support())
      if (p >= space.size())
        throw std::out_of_range("kr_distance: support point " + std::to_string(p) +
                                " outside the metric space");
}

} // namespace

TransportPlan kr_plan(const FiniteMeasure &mu, const FiniteMeasure &nu,
                      const MetricSpaceTable &space) {
  check_compatible(mu, nu, space);
  std::vector<double> cost;
  cost.reserve(mu.support().size() * nu.support().size());
  for (int a : mu.support())
    for (int b : nu.support())
      cost.push_back(space(a, b));
  return solve_transport(mu.weights(), nu.weights(), cost);
}

double kr_distance(const FiniteMeasure &mu, const FiniteMeasure &nu,
                   const MetricSpaceTable &space) {
  // Solve in a canonical argument order so the value is exactly symmetric.
  const auto key = [](const FiniteMeasure &m) { return std::tie(m.support(), m.weights()); };
  if (key(nu) < key(mu))
    return kr_plan(nu, mu, space).cost;
  return kr_plan(mu, nu, space).cost;
}

std::vector<double> bary_extend(std::span<const std::vector<double>> values,
                                const FiniteMeasure &mu) {
  std::vector<double> out;
  for (std::size_t i = 0; i < mu.support().size(); ++i) {
    const int p = mu.support()[i];
    if (static_cast<std::size_t>(p) >= values.size() || values[p].empty())
      throw std::out_of_range("bary_extend: map undefined at point " + std::to_string(p));
    if (out.empty())
      out.assign(values[p].size(), 0.0);
    if (values[p].size() != out.size())
      throw std::invalid_argument("bary_extend: inconsistent target dimension");
    for (std::size_t k = 0; k < out.size(); ++k)
      out[k] += mu.weights()[i] * values[p][k];
  }
  return out;
}

FiniteMeasure partition_map(const MetricSpaceTable &space, std::span<const int> net, double k,
                            int x) {
  if (!(k > 0.0))
    throw std::invalid_argument("partition_map: K must be positive");
  if (x < 0 || x >= space.size())
    throw std::out_of_range("partition_map: point outside the space");
  std::vector<int> support;
  std::vector<double> weights;
  double total = 0.0;
  for (int p : net) {
    if (p < 0 || p >= space.size())
      throw std::out_of_range("partition_map: net point outside the space");
    const double w = k - space(x, p);
    if (w > 0.0) {
      support.push_back(p);
      weights.push_back(w);
      total += w;
    }
  }
  if (support.empty())
    throw std::invalid_argument("partition_map: net is not K-dense at point " +
                                std::to_string(x));
  for (double &w : weights)
    w /= total;
  return FiniteMeasure(std::move(support), std::move(weights));
}

PsiAudit psi_lipschitz_audit(const MetricSpaceTable &space, std::span<const int> net, double k) {
  if (net.empty())
    throw std::invalid_argument("psi_lipschitz_audit: empty net");
  const int n = space.size();
  std::vector<FiniteMeasure> psi;
  psi.reserve(n);
  PsiAudit audit;
  for (int x = 0; x < n; ++x) {
    psi.push_back(partition_map(space, net, k, x));
    audit.multiplicity = std::max(audit.multiplicity, static_cast<int>(psi.back().support().size()));
  }
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y) {
      const double d = space(x, y);
      if (d > k)
        continue;
      const double ratio = kr_distance(psi[x], psi[y], space) / d;
      ++audit.pairs_checked;
      if (ratio > audit.lipschitz_empirical) {
        audit.lipschitz_empirical = ratio;
        audit.worst_x = x;
        audit.worst_y = y;
      }
    }
  return audit;
}

MeasureDocument parse_measure_json(const std::string &text) {
  MeasureDocument doc;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception &e) {
    throw std::runtime_error(std::string("measure json: ") + e.what());
  }
  if (!j.is_object() || !j.contains("space") || !j.contains("atoms"))
    throw std::runtime_error("measure json: expected keys \"space\" and \"atoms\"");
  for (const auto &item : j.items())
    if (item.key() != "space" && item.key() != "atoms")
      throw std::runtime_error("measure json: unknown key \"" + item.key() + "\"");
  const auto &space = j.at("space");
  if (space.is_string()) {
    doc.space_path = space.get<std::string>();
  } else if (space.is_object()) {
    const int n = space.at("n").get<int>();
    const auto rows = space.at("distances");
    if (!rows.is_array() || static_cast<int>(rows.size()) != n)
      throw std::runtime_error("measure json: inline distances must have n rows");
    std::vector<double> table;
    for (const auto &row : rows) {
      if (!row.is_array() || static_cast<int>(row.size()) != n)
        throw std::runtime_error("measure json: inline distances must have n columns");
      for (const auto &x : row)
        table.push_back(x.get<double>());
    }
    doc.inline_space = MetricSpaceTable(n, std::move(table));
  } else {
    throw std::runtime_error("measure json: \"space\" must be a path or an inline table");
  }
  std::vector<int> support;
  std::vector<double> weights;
  for (const auto &atom : j.at("atoms")) {
    support.push_back(atom.at("point").get<int>());
    weights.push_back(atom.at("weight").get<double>());
  }
  doc.measure = FiniteMeasure(std::move(support), std::move(weights));
  return doc;
}

std::string measure_to_json(const FiniteMeasure &mu, const std::string &space_path) {
  nlohmann::json j;
  j["space"] = space_path;
  j["atoms"] = nlohmann::json::array();
  for (std::size_t i = 0; i < mu.support().size(); ++i)
    j["atoms"].push_back({{"point", mu.support()[i]}, {"weight", mu.weights()[i]}});
  return j.dump(2) + "\n";
}

} // namespace coarse
