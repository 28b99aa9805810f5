#pragma once

#include <array>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "coarse/embed.hpp"
#include "coarse/graphs.hpp"
#include "coarse/grid.hpp"
#include "coarse/spectral.hpp"

namespace coarse {

/// A map from the vertices of a graph into the lattice Z^2 with its l1 word
/// metric (the Cayley graph of Z^2 for the standard generators).
struct QuasiEmbeddingCandidate {
  std::vector<Lattice2> image;
  bool lipschitz_verified = false;
};

/// Wraps `image`, setting lipschitz_verified when every edge of g moves at
/// most one lattice step.
QuasiEmbeddingCandidate make_candidate(const FiniteGraph &g, std::vector<Lattice2> image);

bool is_one_lipschitz(const FiniteGraph &g, const std::vector<Lattice2> &image);

/// Scales a real embedding (first two coordinates; a single coordinate is
/// padded with zero) and rounds it to Z^2, shrinking the scale by 10% until
/// the rounded map is 1-Lipschitz.
QuasiEmbeddingCandidate round_to_grid(const FiniteGraph &g, const Embedding &e);

struct ConcentrationPeak {
  double fraction = 0.0;
  Lattice2 center{0, 0};
  int count = 0;
};

/// max over lattice centres x of |xi^{-1}(B_r(x))| / |X|, l1 balls.
ConcentrationPeak preimage_concentration(const QuasiEmbeddingCandidate &cand, double r);

/// The translation field f(x, w) = x + w on Z^2 x R^2.
struct TranslationField {
  std::array<double, 2> operator()(const Lattice2 &x, const std::array<double, 2> &w) const {
    return {static_cast<double>(x[0]) + w[0], static_cast<double>(x[1]) + w[1]};
  }
};

struct AveragingResult {
  std::array<double, 2> shift{0.0, 0.0};
  double residual = 0.0; ///< |sum_v f(xi(v), w)|
};

/// The zero w of F(y) = mean_v f(xi(v), y); for the translation field this is
/// minus the mean of the image.
AveragingResult averaging_center(const QuasiEmbeddingCandidate &cand,
                                 const TranslationField &field = {});

struct ConcentrationWitness {
  Lattice2 center{0, 0};
  double radius = 0.0; ///< c(R) = 2R with R = (1 + kRadiusMargin) sqrt(c0)
  double fraction = 0.0;
  int count = 0;
  int inside_euclidean = 0; ///< points within Euclidean R of the averaging centre
};

/// c(r) for the translation field on Z^2.
inline double translation_c_of_r(double r) { return 2.0 * r; }

/// Recentres the candidate with averaging_center, takes the vertices whose
/// recentred image lies in the Euclidean R-ball, and returns a lattice l1
/// ball of radius c(R) holding the largest share of the image. Throws
/// std::invalid_argument when the candidate is not 1-Lipschitz.
ConcentrationWitness concentration_witness(const FiniteGraph &g,
                                           const QuasiEmbeddingCandidate &cand, double c0);

enum class BaselineStrategy { spectral, max_spread };

BaselineStrategy parse_baseline(const std::string &name);

struct ObstructionRow {
  int n = 0;
  int d_max = 0;
  double lambda1 = 0.0;
  double c0 = 0.0; ///< constant used for R; the family maximum when gapped
  double member_c0 = 0.0;
  int r = 0;
  double c_of_r = 0.0;
  std::int64_t capacity = 0;
  double forced_fraction = 0.0;
  double baseline_fraction = 0.0;
  double witness_fraction = 0.0;
  std::string verdict;
};

struct ObstructionReport {
  std::vector<ObstructionRow> rows;
  bool uniformly_gapped = false;
  double family_c0 = 0.0;
  double decay_exponent = 0.0;

  /// Every witness found at least half of the vertices.
  bool witnesses_ok() const;
};

inline constexpr const char *kVerdictExcluded = "quasi-embedding excluded at these scales";
inline constexpr const char *kVerdictNone = "no obstruction";

struct ObstructionOptions {
  BaselineStrategy baseline = BaselineStrategy::spectral;
  int iters = 300;
  std::uint64_t seed = 1;
  int threads = 1;
};

/// Runs the averaging argument against the translation field on Z^2 for
/// every member. For a uniformly gapped family one constant c0 (the largest
/// member bound) fixes R = floor(sqrt(c0)) + 1 for all rows; otherwise each
/// row uses its own member bound.
ObstructionReport obstruction_bound(const ExpanderFamily &fam,
                                    const ObstructionOptions &options = {});

/// Report CSV: n,d_max,lambda1,c0,R,c_of_R,capacity,forced_fraction,
/// baseline_fraction,verdict.
void write_obstruction_csv(std::ostream &os, const ObstructionReport &report);

} // namespace coarse
