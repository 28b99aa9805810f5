#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "coarse/graphs.hpp"

namespace coarse {

/// (Lf)(x) = deg(x) f(x) - sum_{y ~ x} f(y), parallel edges counted.
std::vector<double> laplacian_apply(const FiniteGraph &g, std::span<const double> f);

/// sum over edges (f(x) - f(y))^2 of the mean-centred f, divided by its
/// squared norm. Throws std::invalid_argument for constant f.
double rayleigh_quotient(const FiniteGraph &g, std::span<const double> f);

struct SpectralCertificate {
  double lambda1 = 0.0;
  /// Unit-norm eigenvector orthogonal to the constants.
  std::vector<double> witness;
  int degree = 0;
  /// lambda1 / (2 * degree): lower bound on the vertex conductance.
  double conductance_lower_bound = 0.0;
};

enum class EigenMethod { automatic, dense, iterative };

inline constexpr int kDenseEigenLimit = 2000;

/// First positive eigenvalue of the combinatorial Laplacian of a connected
/// graph. `automatic` uses a dense symmetric solve up to kDenseEigenLimit
/// vertices and restarted Lanczos, deflated against the constants, above.
SpectralCertificate lambda1(const FiniteGraph &g, EigenMethod method = EigenMethod::automatic);

struct EigenPair {
  double value;
  std::vector<double> vector;
};

/// Dense solve: the `count` smallest eigenpairs after the constant one,
/// ascending, with orthonormal vectors.
std::vector<EigenPair> bottom_eigenpairs(const FiniteGraph &g, int count);

inline constexpr int kExhaustiveCheegerLimit = 20;

struct CheegerReport {
  Rational h_exact;
  std::vector<Vertex> witness;
  double lambda1 = 0.0;
  int d_max = 0;
  bool lower_ok = false; ///< lambda1 <= 2h
  bool upper_ok = false; ///< h <= sqrt(2 d_max lambda1)
  bool bounds_ok = false;
};

/// Exact edge-expansion constant min e(A, A^c)/|A| over 0 < |A| <= n/2.
std::pair<Rational, std::vector<Vertex>> edge_expansion_exact(const FiniteGraph &g);

CheegerReport cheeger_crosscheck(const FiniteGraph &g);

/// Largest decay exponent alpha (lambda1 ~ |X|^-alpha over the upper half of
/// the members) for which a family still counts as uniformly gapped.
inline constexpr double kGapDecayThreshold = 0.75;

struct FamilyCertification {
  std::vector<SpectralCertificate> certificates;
  double delta = 0.0; ///< min lambda1 over the members
  double decay_exponent = 0.0;
  bool uniformly_gapped = false;
};

/// Certifies every member. A finite family cannot prove a uniform gap; the
/// verdict uses the least-squares slope of log lambda1 against log |X_n|
/// over the larger half of the members and compares it with
/// kGapDecayThreshold.
FamilyCertification certify_family(const ExpanderFamily &fam);

/// CSV header "n,m,d_max,lambda1,h_exact,conductance_lower_bound".
void write_certificate_csv_header(std::ostream &os);
void write_certificate_csv_row(std::ostream &os, const FiniteGraph &g,
                               const SpectralCertificate &cert,
                               const std::optional<Rational> &h_exact);

} // namespace coarse
