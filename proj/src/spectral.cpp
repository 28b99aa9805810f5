#include "coarse/spectral.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "coarse/io.hpp"
#include "coarse/rng.hpp"

namespace coarse {

namespace {

void check_length(const FiniteGraph &g, std::size_t length) {
  if (length != static_cast<std::size_t>(g.vertex_count()))
    throw std::invalid_argument("vector length " + std::to_string(length) +
                                " does not match vertex count " +
                                std::to_string(g.vertex_count()));
}

Eigen::MatrixXd dense_laplacian(const FiniteGraph &g) {
  const int n = g.vertex_count();
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  for (const Edge &e : g.edges()) {
    lap(e.u, e.u) += 1.0;
    lap(e.v, e.v) += 1.0;
    lap(e.u, e.v) -= 1.0;
    lap(e.v, e.u) -= 1.0;
  }
  return lap;
}

void apply_into(const FiniteGraph &g, const double *f, double *out) {
  const int n = g.vertex_count();
  for (int x = 0; x < n; ++x) {
    double acc = g.degree(x) * f[x];
    for (Vertex y : g.neighbors(x))
      acc -= f[y];
    out[x] = acc;
  }
}

/// Removes the constant component and normalises; returns the norm before
/// normalisation.
double center_and_normalize(Eigen::Ref<Eigen::VectorXd> v) {
  v.array() -= v.mean();
  const double norm = v.norm();
  if (norm > 0.0)
    v /= norm;
  return norm;
}

SpectralCertificate finish_certificate(const FiniteGraph &g, Eigen::VectorXd witness) {
  center_and_normalize(witness);
  SpectralCertificate cert;
  cert.witness.assign(witness.data(), witness.data() + witness.size());
  cert.lambda1 = rayleigh_quotient(g, cert.witness);
  cert.degree = g.max_degree();
  cert.conductance_lower_bound = cert.lambda1 / (2.0 * cert.degree);
  return cert;
}

SpectralCertificate lambda1_dense(const FiniteGraph &g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense_laplacian(g));
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("lambda1: dense eigensolve failed");
  return finish_certificate(g, solver.eigenvectors().col(1));
}

/// Thick-restart Lanczos on the complement of the constants. The basis is
/// kept fully orthogonal, so the projected matrix is formed explicitly.
SpectralCertificate lambda1_iterative(const FiniteGraph &g) {
  const int n = g.vertex_count();
  const int max_basis = std::min(n - 1, 120);
  const int keep = std::min(max_basis - 1, 12);
  const double tolerance = 1e-10 * std::max(1.0, 2.0 * g.max_degree());
  constexpr int kMaxRestarts = 5000;

  Eigen::MatrixXd basis(n, max_basis), image(n, max_basis);
  Eigen::VectorXd next(n);
  Rng rng(0x5eed);
  for (int i = 0; i < n; ++i)
    next[i] = rng.uniform(-1.0, 1.0);

  int cols = 0;
  auto orthogonalize = [&](Eigen::VectorXd &v) {
    for (int pass = 0; pass < 2; ++pass) {
      v.array() -= v.mean();
      if (cols > 0)
        v -= basis.leftCols(cols) * (basis.leftCols(cols).transpose() * v);
    }
    return v.norm();
  };

  for (int restart = 0; restart < kMaxRestarts; ++restart) {
    while (cols < max_basis) {
      const double norm = orthogonalize(next);
      if (norm < 1e-13)
        break;
      basis.col(cols) = next / norm;
      apply_into(g, basis.col(cols).data(), image.col(cols).data());
      next = image.col(cols);
      ++cols;
    }
    Eigen::MatrixXd projected = basis.leftCols(cols).transpose() * image.leftCols(cols);
    projected = 0.5 * (projected + projected.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(projected);
    const int kept = std::min(keep, cols);
    Eigen::MatrixXd ritz = small.eigenvectors().leftCols(kept);
    Eigen::MatrixXd new_basis = basis.leftCols(cols) * ritz;
    Eigen::MatrixXd new_image = image.leftCols(cols) * ritz;
    basis.leftCols(kept) = new_basis;
    image.leftCols(kept) = new_image;
    cols = kept;

    const double theta = small.eigenvalues()[0];
    Eigen::VectorXd residual = image.col(0) - theta * basis.col(0);
    if (residual.norm() <= tolerance || cols == n - 1)
      return finish_certificate(g, basis.col(0));
    next = residual;
  }
  throw std::runtime_error("lambda1: Lanczos did not converge");
}

} // namespace

std::vector<double> laplacian_apply(const FiniteGraph &g, std::span<const double> f) {
  check_length(g, f.size());
  std::vector<double> out(f.size());
  apply_into(g, f.data(), out.data());
  return out;
}

double rayleigh_quotient(const FiniteGraph &g, std::span<const double> f) {
  check_length(g, f.size());
  const double n = static_cast<double>(f.size());
  double mean = 0.0;
  for (double v : f)
    mean += v;
  mean /= n;
  double norm_sq = 0.0;
  double scale = 0.0;
  for (double v : f) {
    norm_sq += (v - mean) * (v - mean);
    scale = std::max(scale, std::abs(v));
  }
  if (norm_sq <= 1e-24 * std::max(1.0, scale * scale) * n)
    throw std::invalid_argument("rayleigh_quotient: constant vector");
  double energy = 0.0;
  for (const Edge &e : g.edges()) {
    const double d = f[e.u] - f[e.v];
    energy += d * d;
  }
  return energy / norm_sq;
}

SpectralCertificate lambda1(const FiniteGraph &g, EigenMethod method) {
  if (g.vertex_count() < 2)
    throw std::invalid_argument("lambda1: need at least two vertices");
  g.require_connected("lambda1");
  if (method == EigenMethod::automatic)
    method = g.vertex_count() <= kDenseEigenLimit ? EigenMethod::dense : EigenMethod::iterative;
  return method == EigenMethod::dense ? lambda1_dense(g) : lambda1_iterative(g);
}

std::vector<EigenPair> bottom_eigenpairs(const FiniteGraph &g, int count) {
  const int n = g.vertex_count();
  if (count < 1 || count > n - 1)
    throw std::invalid_argument("bottom_eigenpairs: count must lie in [1, n-1]");
  g.require_connected("bottom_eigenpairs");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense_laplacian(g));
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("bottom_eigenpairs: dense eigensolve failed");
  std::vector<EigenPair> out;
  for (int k = 1; k <= count; ++k) {
    const Eigen::VectorXd v = solver.eigenvectors().col(k);
    out.push_back({solver.eigenvalues()[k], std::vector<double>(v.data(), v.data() + n)});
  }
  return out;
}

namespace {

struct EdgeExpansionSearch {
  const FiniteGraph *g = nullptr;
  int n = 0;
  int limit = 0;
  std::int64_t best_num = 1;
  std::int64_t best_den = 0;
  std::uint32_t best_set = 0;

  void visit(int next, std::uint32_t set, std::int64_t cut, int size) {
    if (size > 0 && (best_den == 0 || cut * best_den < best_num * size)) {
      best_num = cut;
      best_den = size;
      best_set = set;
    }
    if (size == limit)
      return;
    for (int v = next; v < n; ++v) {
      int inside = 0;
      for (Vertex y : g->neighbors(v))
        if (set & (1u << y))
          ++inside;
      visit(v + 1, set | (1u << v), cut + g->degree(v) - 2 * inside, size + 1);
    }
  }
};

} // namespace

std::pair<Rational, std::vector<Vertex>> edge_expansion_exact(const FiniteGraph &g) {
  const int n = g.vertex_count();
  if (n > kExhaustiveCheegerLimit)
    throw std::invalid_argument("edge_expansion_exact: " + std::to_string(n) +
                                " vertices exceeds the exhaustive limit of " +
                                std::to_string(kExhaustiveCheegerLimit));
  if (n < 2)
    throw std::invalid_argument("edge_expansion_exact: need at least two vertices");
  EdgeExpansionSearch search;
  search.g = &g;
  search.n = n;
  search.limit = n / 2;
  search.visit(0, 0, 0, 0);
  std::vector<Vertex> witness;
  for (int v = 0; v < n; ++v)
    if (search.best_set & (1u << v))
      witness.push_back(v);
  return {Rational(search.best_num, search.best_den), witness};
}

CheegerReport cheeger_crosscheck(const FiniteGraph &g) {
  g.require_connected("cheeger_crosscheck");
  CheegerReport report;
  std::tie(report.h_exact, report.witness) = edge_expansion_exact(g);
  report.lambda1 = lambda1(g).lambda1;
  report.d_max = g.max_degree();
  const double h = report.h_exact.value();
  constexpr double slack = 1e-12;
  report.lower_ok = report.lambda1 <= 2.0 * h * (1.0 + slack);
  report.upper_ok = h <= std::sqrt(2.0 * report.d_max * report.lambda1) * (1.0 + slack);
  report.bounds_ok = report.lower_ok && report.upper_ok;
  return report;
}

FamilyCertification certify_family(const ExpanderFamily &fam) {
  FamilyCertification out;
  for (std::size_t i = 0; i < fam.members.size(); ++i) {
    const FiniteGraph &g = fam.members[i];
    if (!g.connected())
      throw std::invalid_argument("certify_family: member " + std::to_string(i) +
                                  " is disconnected");
    out.certificates.push_back(lambda1(g));
  }
  if (out.certificates.empty())
    throw std::invalid_argument("certify_family: empty family");
  out.delta = out.certificates.front().lambda1;
  for (const auto &c : out.certificates)
    out.delta = std::min(out.delta, c.lambda1);

  const std::size_t m = out.certificates.size();
  const std::size_t first = m >= 4 ? m / 2 : (m >= 2 ? m - 2 : m - 1);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double count = static_cast<double>(m - first);
  for (std::size_t i = first; i < m; ++i) {
    const double x = std::log(static_cast<double>(fam.members[i].vertex_count()));
    const double y = std::log(out.certificates[i].lambda1);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = count * sxx - sx * sx;
  out.decay_exponent = (count >= 2 && denom > 0) ? -(count * sxy - sx * sy) / denom : 0.0;
  out.uniformly_gapped = out.delta > 0.0 && out.decay_exponent < kGapDecayThreshold;
  return out;
}

void write_certificate_csv_header(std::ostream &os) {
  os << "n,m,d_max,lambda1,h_exact,conductance_lower_bound\n";
}

void write_certificate_csv_row(std::ostream &os, const FiniteGraph &g,
                               const SpectralCertificate &cert,
                               const std::optional<Rational> &h_exact) {
  os << g.vertex_count() << ',' << g.edge_count() << ',' << g.max_degree() << ','
     << format_double(cert.lambda1) << ',';
  if (h_exact)
    os << format_double(h_exact->value());
  os << ',' << format_double(cert.conductance_lower_bound) << '\n';
}

} // namespace coarse
