#include "coarse/embed.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "coarse/io.hpp"
#include "coarse/rng.hpp"

namespace coarse {

Embedding::Embedding(int vertex_count, int dim)
    : Embedding(vertex_count, dim,
                std::vector<double>(static_cast<std::size_t>(vertex_count) * std::max(dim, 0))) {}

Embedding::Embedding(int vertex_count, int dim, std::vector<double> coords)
    : vertex_count_(vertex_count), dim_(dim), coords_(std::move(coords)) {
  if (vertex_count <= 0 || dim <= 0)
    throw std::invalid_argument("embedding needs positive vertex count and dimension");
  if (coords_.size() != static_cast<std::size_t>(vertex_count) * dim)
    throw std::invalid_argument("embedding coordinate count does not match n * dim");
}

bool Embedding::nonconstant() const {
  for (int v = 1; v < vertex_count_; ++v)
    for (int k = 0; k < dim_; ++k)
      if (std::abs(point(v)[k] - point(0)[k]) > 1e-12)
        return true;
  return false;
}

std::vector<double> Embedding::mean() const {
  std::vector<double> m(dim_, 0.0);
  for (int v = 0; v < vertex_count_; ++v)
    for (int k = 0; k < dim_; ++k)
      m[k] += point(v)[k];
  for (double &x : m)
    x /= vertex_count_;
  return m;
}

std::vector<double> Embedding::center() {
  const auto m = mean();
  for (int v = 0; v < vertex_count_; ++v)
    for (int k = 0; k < dim_; ++k)
      point(v)[k] -= m[k];
  return m;
}

void Embedding::scale(double factor) {
  for (double &x : coords_)
    x *= factor;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

namespace {

void check_match(const FiniteGraph &g, const Embedding &e) {
  if (g.vertex_count() != e.vertex_count())
    throw std::invalid_argument("embedding vertex count " + std::to_string(e.vertex_count()) +
                                " does not match graph (" + std::to_string(g.vertex_count()) +
                                ")");
}

} // namespace

double lipschitz_constant(const FiniteGraph &g, const Embedding &e) {
  check_match(g, e);
  double worst = 0.0;
  for (const Edge &edge : g.edges())
    worst = std::max(worst, squared_distance(e.point(edge.u), e.point(edge.v)));
  return std::sqrt(worst);
}

double pair_energy(const Embedding &e) {
  double s = 0.0;
  for (int x = 0; x < e.vertex_count(); ++x)
    for (int y = x + 1; y < e.vertex_count(); ++y)
      s += squared_distance(e.point(x), e.point(y));
  return s;
}

double edge_energy(const FiniteGraph &g, const Embedding &e) {
  check_match(g, e);
  double s = 0.0;
  for (const Edge &edge : g.edges())
    s += squared_distance(e.point(edge.u), e.point(edge.v));
  return s;
}

double d_ratio(const FiniteGraph &g, const Embedding &e) {
  check_match(g, e);
  if (!e.nonconstant())
    throw std::invalid_argument("d_ratio: constant embedding");
  const double n = e.vertex_count();
  const double pairs = n * (n - 1) / 2.0;
  const double edges = static_cast<double>(g.edge_count());
  const double edge_sum = edge_energy(g, e);
  if (edge_sum <= 0.0)
    throw std::invalid_argument("d_ratio: every edge collapses to a point");
  return (pair_energy(e) / pairs) / (edge_sum / edges);
}

double c0_bound(const FiniteGraph &g, double lambda1) {
  if (!(lambda1 > 0.0))
    throw std::invalid_argument("c0_bound: lambda1 must be positive");
  const double n = g.vertex_count();
  return g.max_degree() * n / ((n - 1.0) * lambda1);
}

double c0_bound(const FiniteGraph &g) {
  g.require_connected("c0_bound");
  return c0_bound(g, lambda1(g).lambda1);
}

ConcentrationReport corollary_report(const FiniteGraph &g, const Embedding &e) {
  g.require_connected("corollary_report");
  return corollary_report(g, e, c0_bound(g));
}

ConcentrationReport corollary_report(const FiniteGraph &g, const Embedding &e, double c0) {
  check_match(g, e);
  if (!e.nonconstant())
    throw std::invalid_argument("corollary_report: constant embedding");
  Embedding f = e;
  ConcentrationReport r;
  r.c0 = c0;
  r.shift = f.center();
  const double lip = lipschitz_constant(g, f);
  if (lip > 1.0) {
    r.scale = 1.0 / lip;
    f.scale(r.scale);
  }
  const int n = f.vertex_count();
  r.total = n;
  r.pair_mean = pair_energy(f) / (n * (n - 1.0) / 2.0);
  double norm_sum = 0.0;
  r.radius = (1.0 + kRadiusMargin) * std::sqrt(c0);
  const double radius_sq = r.radius * r.radius;
  std::vector<double> zero(f.dim(), 0.0);
  for (int v = 0; v < n; ++v) {
    const double sq = squared_distance(f.point(v), zero);
    norm_sum += sq;
    if (sq <= radius_sq)
      ++r.inside_count;
  }
  r.mean_squared_norm = norm_sum / n;
  return r;
}

namespace {

double squared_norm_sum(const Embedding &e) {
  double s = 0.0;
  for (double x : e.coords())
    s += x * x;
  return s;
}

/// Centres and rescales to Lipschitz constant exactly 1; false when every
/// edge collapses.
bool normalize(const FiniteGraph &g, Embedding &e) {
  e.center();
  const double lip = lipschitz_constant(g, e);
  if (!(lip > 1e-300))
    return false;
  e.scale(1.0 / lip);
  return true;
}

/// Gradient of log(sum |f|^2) - (2/p) log(sum_e len_e^p) at a normalised f.
std::vector<double> smoothed_gradient(const FiniteGraph &g, const Embedding &f, double p) {
  const int dim = f.dim();
  std::vector<double> grad(f.coords().size());
  const double spread = squared_norm_sum(f);
  for (std::size_t i = 0; i < grad.size(); ++i)
    grad[i] = 2.0 * f.coords()[i] / spread;

  double max_len = 0.0;
  std::vector<double> lengths(g.edge_count());
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    const Edge &e = g.edges()[i];
    lengths[i] = std::sqrt(squared_distance(f.point(e.u), f.point(e.v)));
    max_len = std::max(max_len, lengths[i]);
  }
  double sum_p = 0.0;
  for (double &len : lengths) {
    len /= max_len;
    sum_p += std::pow(len, p);
  }
  const double factor = 2.0 / (sum_p * max_len * max_len);
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    const Edge &e = g.edges()[i];
    const double w = factor * std::pow(lengths[i], p - 2.0);
    for (int k = 0; k < dim; ++k) {
      const double delta = f.point(e.u)[k] - f.point(e.v)[k];
      grad[static_cast<std::size_t>(e.u) * dim + k] -= w * delta;
      grad[static_cast<std::size_t>(e.v) * dim + k] += w * delta;
    }
  }
  return grad;
}

} // namespace

MaxSpreadResult max_spread_embedding(const FiniteGraph &g, int dim, int iters,
                                     std::uint64_t seed) {
  g.require_connected("max_spread_embedding");
  if (dim < 1)
    throw std::invalid_argument("max_spread_embedding: dim must be at least 1");
  if (iters < 0)
    throw std::invalid_argument("max_spread_embedding: iters must be nonnegative");
  const int n = g.vertex_count();
  if (n < 2)
    throw std::invalid_argument("max_spread_embedding: need at least two vertices");

  Rng rng(seed);
  Embedding f(n, dim);
  do {
    for (double &x : f.coords())
      x = rng.normal();
  } while (!normalize(g, f));

  MaxSpreadResult result;
  double objective = squared_norm_sum(f);
  result.trace.push_back(objective);
  double step = 0.1;
  for (int it = 0; it < iters; ++it) {
    // p ramps from 8 to 512 so early steps see a smooth surrogate and late
    // steps track the true maximum edge length.
    const double p = 8.0 * std::pow(64.0, static_cast<double>(it) / std::max(1, iters - 1));
    const auto grad = smoothed_gradient(g, f, p);
    bool accepted = false;
    for (int attempt = 0; attempt < 8 && !accepted; ++attempt) {
      Embedding trial = f;
      for (std::size_t i = 0; i < grad.size(); ++i)
        trial.coords()[i] += step * objective * grad[i];
      if (normalize(g, trial)) {
        const double value = squared_norm_sum(trial);
        if (value > objective) {
          f = std::move(trial);
          objective = value;
          accepted = true;
          step = std::min(step * 1.5, 1.0);
          break;
        }
      }
      step *= 0.5;
    }
    if (step < 1e-12)
      step = 1e-12;
    result.trace.push_back(objective);
  }

  const double bound = n * c0_bound(g) / 2.0 + 1e-6;
  if (objective > bound)
    throw std::logic_error("max_spread_embedding: spread " + format_double(objective) +
                           " exceeds the Lipschitz concentration bound " + format_double(bound));
  result.spread = objective;
  result.embedding = std::move(f);
  return result;
}

Embedding spectral_embedding(const FiniteGraph &g, int dim) {
  const int n = g.vertex_count();
  if (dim < 1 || dim > n - 1)
    throw std::invalid_argument("spectral_embedding: dim must lie in [1, n-1]");
  const auto pairs = bottom_eigenpairs(g, dim);
  Embedding e(n, dim);
  for (int k = 0; k < dim; ++k)
    for (int v = 0; v < n; ++v)
      e.point(v)[k] = pairs[k].vector[v];
  e.center();
  const double lip = lipschitz_constant(g, e);
  e.scale(1.0 / lip);
  return e;
}

void write_embedding_csv(std::ostream &os, const Embedding &e) {
  os << "vertex";
  for (int k = 0; k < e.dim(); ++k)
    os << ",x" << k;
  os << '\n';
  for (int v = 0; v < e.vertex_count(); ++v) {
    os << v;
    for (double x : e.point(v))
      os << ',' << format_double(x);
    os << '\n';
  }
}

Embedding read_embedding_csv(std::istream &in) {
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("embedding csv: missing header");
  const int dim = static_cast<int>(std::count(line.begin(), line.end(), ','));
  if (dim < 1 || line.rfind("vertex", 0) != 0)
    throw std::runtime_error("embedding csv: header must be vertex,x0,...");
  std::vector<double> coords;
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty())
      continue;
    std::stringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');
    if (std::stoi(cell) != rows)
      throw std::runtime_error("embedding csv: rows must list vertices 0..n-1 in order");
    int cols = 0;
    while (std::getline(ss, cell, ',')) {
      coords.push_back(std::stod(cell));
      ++cols;
    }
    if (cols != dim)
      throw std::runtime_error("embedding csv: row " + std::to_string(rows) + " has " +
                               std::to_string(cols) + " coordinates, expected " +
                               std::to_string(dim));
    ++rows;
  }
  return Embedding(rows, dim, std::move(coords));
}

} // namespace coarse
