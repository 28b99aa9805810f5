#include "coarse/obstruction.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <thread>

#include "coarse/io.hpp"
#include "coarse/rng.hpp"

namespace coarse {

bool is_one_lipschitz(const FiniteGraph &g, const std::vector<Lattice2> &image) {
  if (image.size() != static_cast<std::size_t>(g.vertex_count()))
    throw std::invalid_argument("candidate image size does not match the graph");
  for (const Edge &e : g.edges())
    if (l1_distance(image[e.u], image[e.v]) > 1)
      return false;
  return true;
}

QuasiEmbeddingCandidate make_candidate(const FiniteGraph &g, std::vector<Lattice2> image) {
  QuasiEmbeddingCandidate cand;
  cand.lipschitz_verified = is_one_lipschitz(g, image);
  cand.image = std::move(image);
  return cand;
}

QuasiEmbeddingCandidate round_to_grid(const FiniteGraph &g, const Embedding &e) {
  if (e.vertex_count() != g.vertex_count())
    throw std::invalid_argument("round_to_grid: embedding does not match the graph");
  std::vector<Lattice2> image(g.vertex_count());
  for (double scale = 1.0;; scale *= 0.9) {
    for (int v = 0; v < g.vertex_count(); ++v) {
      const auto p = e.point(v);
      image[v] = {std::llround(scale * p[0]), e.dim() > 1 ? std::llround(scale * p[1]) : 0};
    }
    if (is_one_lipschitz(g, image))
      break;
  }
  return make_candidate(g, std::move(image));
}

namespace {

/// Distinct image points with multiplicities.
std::map<Lattice2, int> image_counts(const std::vector<Lattice2> &image) {
  std::map<Lattice2, int> counts;
  for (const Lattice2 &p : image)
    ++counts[p];
  return counts;
}

int count_within(const std::map<Lattice2, int> &counts, const Lattice2 &center, double r) {
  int total = 0;
  for (const auto &[p, c] : counts)
    if (static_cast<double>(l1_distance(p, center)) <= r)
      total += c;
  return total;
}

} // namespace

ConcentrationPeak preimage_concentration(const QuasiEmbeddingCandidate &cand, double r) {
  if (cand.image.empty())
    throw std::invalid_argument("preimage_concentration: empty candidate");
  if (!(r >= 0.0))
    throw std::invalid_argument("preimage_concentration: negative radius");
  const auto counts = image_counts(cand.image);
  Lattice2 lo = cand.image.front(), hi = cand.image.front();
  for (const Lattice2 &p : cand.image)
    for (int k = 0; k < 2; ++k) {
      lo[k] = std::min(lo[k], p[k]);
      hi[k] = std::max(hi[k], p[k]);
    }
  // A centre further than r from the bounding box reaches no image point.
  const auto reach = static_cast<std::int64_t>(std::floor(r));
  ConcentrationPeak best;
  for (std::int64_t x = lo[0] - reach; x <= hi[0] + reach; ++x)
    for (std::int64_t y = lo[1] - reach; y <= hi[1] + reach; ++y) {
      const int c = count_within(counts, {x, y}, r);
      if (c > best.count) {
        best.count = c;
        best.center = {x, y};
      }
    }
  best.fraction = static_cast<double>(best.count) / cand.image.size();
  return best;
}

AveragingResult averaging_center(const QuasiEmbeddingCandidate &cand,
                                 const TranslationField &field) {
  if (cand.image.empty())
    throw std::invalid_argument("averaging_center: empty candidate");
  double sx = 0.0, sy = 0.0;
  for (const Lattice2 &p : cand.image) {
    sx += static_cast<double>(p[0]);
    sy += static_cast<double>(p[1]);
  }
  const double n = static_cast<double>(cand.image.size());
  AveragingResult out;
  out.shift = {-sx / n, -sy / n};
  double rx = 0.0, ry = 0.0;
  for (const Lattice2 &p : cand.image) {
    const auto v = field(p, out.shift);
    rx += v[0];
    ry += v[1];
  }
  out.residual = std::hypot(rx, ry);
  return out;
}

ConcentrationWitness concentration_witness(const FiniteGraph &g,
                                           const QuasiEmbeddingCandidate &cand, double c0) {
  if (!is_one_lipschitz(g, cand.image))
    throw std::invalid_argument("concentration_witness: candidate is not 1-Lipschitz");
  if (!(c0 > 0.0))
    throw std::invalid_argument("concentration_witness: c0 must be positive");
  const auto avg = averaging_center(cand);
  const double radius = (1.0 + kRadiusMargin) * std::sqrt(c0);
  const TranslationField field;

  ConcentrationWitness w;
  w.radius = translation_c_of_r(radius);
  for (const Lattice2 &p : cand.image) {
    const auto v = field(p, avg.shift);
    if (std::hypot(v[0], v[1]) <= radius)
      ++w.inside_euclidean;
  }

  const auto counts = image_counts(cand.image);
  const Lattice2 mean{std::llround(-avg.shift[0]), std::llround(-avg.shift[1])};
  w.count = -1;
  for (std::int64_t dx = -3; dx <= 3; ++dx)
    for (std::int64_t dy = -3; dy <= 3; ++dy) {
      const Lattice2 c{mean[0] + dx, mean[1] + dy};
      const int k = count_within(counts, c, w.radius);
      if (k > w.count) {
        w.count = k;
        w.center = c;
      }
    }
  w.fraction = static_cast<double>(w.count) / cand.image.size();
  return w;
}

BaselineStrategy parse_baseline(const std::string &name) {
  if (name == "spectral")
    return BaselineStrategy::spectral;
  if (name == "max-spread" || name == "max_spread")
    return BaselineStrategy::max_spread;
  throw std::invalid_argument("unknown baseline strategy: " + name);
}

bool ObstructionReport::witnesses_ok() const {
  return std::all_of(rows.begin(), rows.end(),
                     [](const ObstructionRow &r) { return 2.0 * r.witness_fraction >= 1.0; });
}

ObstructionReport obstruction_bound(const ExpanderFamily &fam, const ObstructionOptions &options) {
  const FamilyCertification cert = certify_family(fam);
  ObstructionReport report;
  report.uniformly_gapped = cert.uniformly_gapped;
  report.decay_exponent = cert.decay_exponent;
  const std::size_t m = fam.members.size();
  report.rows.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    ObstructionRow &row = report.rows[i];
    const FiniteGraph &g = fam.members[i];
    row.n = g.vertex_count();
    row.d_max = g.max_degree();
    row.lambda1 = cert.certificates[i].lambda1;
    row.member_c0 = c0_bound(g, row.lambda1);
    report.family_c0 = std::max(report.family_c0, row.member_c0);
  }

  auto fill = [&](std::size_t i) {
    ObstructionRow &row = report.rows[i];
    const FiniteGraph &g = fam.members[i];
    row.c0 = report.uniformly_gapped ? report.family_c0 : row.member_c0;
    row.r = static_cast<int>(std::floor(std::sqrt(row.c0))) + 1;
    row.c_of_r = translation_c_of_r(row.r);
    const auto k = static_cast<std::int64_t>(std::ceil(row.c_of_r));
    row.capacity = GridBall::capacity(k);
    row.forced_fraction = 0.5 / static_cast<double>(row.capacity);

    Embedding baseline = options.baseline == BaselineStrategy::spectral
                             ? spectral_embedding(g, std::min(2, g.vertex_count() - 1))
                             : max_spread_embedding(g, 2, options.iters,
                                                    derive_seed(options.seed, i))
                                   .embedding;
    const auto cand = round_to_grid(g, baseline);
    row.baseline_fraction = preimage_concentration(cand, row.c_of_r).fraction;
    row.witness_fraction = concentration_witness(g, cand, row.member_c0).fraction;
    row.verdict = report.uniformly_gapped ? kVerdictExcluded : kVerdictNone;
  };

  const int threads = std::max(1, std::min<int>(options.threads, static_cast<int>(m)));
  if (threads == 1) {
    for (std::size_t i = 0; i < m; ++i)
      fill(i);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        try {
          for (std::size_t i = t; i < m; i += threads)
            fill(i);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    for (auto &th : pool)
      th.join();
    for (auto &e : errors)
      if (e)
        std::rethrow_exception(e);
  }
  return report;
}

void write_obstruction_csv(std::ostream &os, const ObstructionReport &report) {
  os << "n,d_max,lambda1,c0,R,c_of_R,capacity,forced_fraction,baseline_fraction,verdict\n";
  for (const auto &r : report.rows)
    os << r.n << ',' << r.d_max << ',' << format_double(r.lambda1) << ','
       << format_double(r.c0) << ',' << r.r << ',' << format_double(r.c_of_r) << ','
       << r.capacity << ',' << format_double(r.forced_fraction) << ','
       << format_double(r.baseline_fraction) << ',' << r.verdict << '\n';
}

} // namespace coarse
