#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <vector>

#include "coarse/graphs.hpp"
#include "coarse/spectral.hpp"

namespace coarse {

/// Map from the vertices of a graph into R^dim, stored row-major.
class Embedding {
public:
  Embedding() = default;
  Embedding(int vertex_count, int dim);
  Embedding(int vertex_count, int dim, std::vector<double> coords);

  int vertex_count() const { return vertex_count_; }
  int dim() const { return dim_; }

  std::span<double> point(Vertex v) {
    return {coords_.data() + static_cast<std::size_t>(v) * dim_, static_cast<std::size_t>(dim_)};
  }
  std::span<const double> point(Vertex v) const {
    return {coords_.data() + static_cast<std::size_t>(v) * dim_, static_cast<std::size_t>(dim_)};
  }
  const std::vector<double> &coords() const { return coords_; }
  std::vector<double> &coords() { return coords_; }

  /// True when some pair of points differs by more than 1e-12.
  bool nonconstant() const;

  std::vector<double> mean() const;
  /// Subtracts the mean; returns the shift that was subtracted.
  std::vector<double> center();
  void scale(double factor);

private:
  int vertex_count_ = 0;
  int dim_ = 0;
  std::vector<double> coords_;
};

double squared_distance(std::span<const double> a, std::span<const double> b);

/// Max over edges of |f(x) - f(y)|; the Lipschitz constant for the path
/// metric since every edge has length one.
double lipschitz_constant(const FiniteGraph &g, const Embedding &e);

/// Sum over unordered pairs of distinct vertices of |f(x) - f(y)|^2.
double pair_energy(const Embedding &e);
/// Sum over edges, with multiplicity, of |f(x) - f(y)|^2.
double edge_energy(const FiniteGraph &g, const Embedding &e);

/// Mean squared pair distance over mean squared edge length. Throws
/// std::invalid_argument for a constant embedding.
double d_ratio(const FiniteGraph &g, const Embedding &e);

/// d_max * n / ((n - 1) * lambda1): an upper bound for d_ratio over every
/// nonconstant map of g into a Euclidean space.
double c0_bound(const FiniteGraph &g);
double c0_bound(const FiniteGraph &g, double lambda1);

struct ConcentrationReport {
  double c0 = 0.0;
  double radius = 0.0;
  int inside_count = 0;
  int total = 0;
  double mean_squared_norm = 0.0;
  double pair_mean = 0.0;
  std::vector<double> shift; ///< subtracted mean
  double scale = 1.0;        ///< factor applied to reach Lipschitz constant <= 1

  bool pair_mean_ok() const { return pair_mean <= c0 * (1.0 + 1e-12); }
  bool mean_squared_norm_ok() const { return mean_squared_norm <= 0.5 * c0 * (1.0 + 1e-12); }
  bool majority_inside() const { return 2 * inside_count > total; }
};

inline constexpr double kRadiusMargin = 1e-6;

/// Recentres and, if needed, shrinks the embedding to Lipschitz constant 1,
/// then measures the pair mean, the mean squared norm and the number of
/// points within (1 + kRadiusMargin) * sqrt(c0) of the origin.
ConcentrationReport corollary_report(const FiniteGraph &g, const Embedding &e);
ConcentrationReport corollary_report(const FiniteGraph &g, const Embedding &e, double c0);

struct MaxSpreadResult {
  Embedding embedding;
  double spread = 0.0; ///< sum of squared norms of the final embedding
  std::vector<double> trace;
};

/// Projected ascent on sum |f(x)|^2 over mean-zero maps, renormalised to
/// Lipschitz constant exactly 1 after every step. Steps follow the gradient
/// of a p-norm smoothing of the edge-length maximum and are only accepted
/// when they raise the exact objective, so `trace` is nondecreasing.
MaxSpreadResult max_spread_embedding(const FiniteGraph &g, int dim, int iters,
                                     std::uint64_t seed);

/// Bottom nontrivial Laplacian eigenvectors as coordinates, rescaled to
/// Lipschitz constant 1.
Embedding spectral_embedding(const FiniteGraph &g, int dim);

/// CSV with header "vertex,x0,...,x{dim-1}".
void write_embedding_csv(std::ostream &os, const Embedding &e);
Embedding read_embedding_csv(std::istream &in);

} // namespace coarse
