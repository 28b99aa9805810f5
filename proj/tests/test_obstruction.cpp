#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>
#include <vector>

#include "coarse/embed.hpp"
#include "coarse/graphs.hpp"
#include "coarse/obstruction.hpp"
#include "coarse/rng.hpp"

using namespace coarse;
using doctest::Approx;

namespace {

/// Exhaustive scan over every lattice centre within r of some image point.
double brute_concentration(const std::vector<Lattice2> &image, double r) {
  const auto reach = static_cast<std::int64_t>(std::floor(r));
  int best = 0;
  for (const auto &p : image)
    for (std::int64_t dx = -reach; dx <= reach; ++dx)
      for (std::int64_t dy = -reach; dy <= reach; ++dy) {
        const Lattice2 c{p[0] + dx, p[1] + dy};
        int count = 0;
        for (const auto &q : image)
          count += static_cast<double>(l1_distance(q, c)) <= r;
        best = std::max(best, count);
      }
  return static_cast<double>(best) / image.size();
}

/// 1-Lipschitz lattice map: compose vertex distances to anchors with a
/// random lattice walk indexed by distance.
std::vector<Lattice2> random_lipschitz_image(const FiniteGraph &g, Rng &rng) {
  const int n = g.vertex_count();
  const auto d = bfs_distances(g, rng.index(n));
  std::vector<Lattice2> walk{{rng.index(7) - 3, rng.index(7) - 3}};
  for (int k = 1; k <= n; ++k) {
    Lattice2 next = walk.back();
    switch (rng.index(5)) {
    case 0: ++next[0]; break;
    case 1: --next[0]; break;
    case 2: ++next[1]; break;
    case 3: --next[1]; break;
    default: break;
    }
    walk.push_back(next);
  }
  std::vector<Lattice2> image(n);
  for (int v = 0; v < n; ++v)
    image[v] = walk[d[v]];
  return image;
}

} // namespace

TEST_CASE("candidate Lipschitz flag") {
  const auto c4 = cycle_graph(4);
  CHECK(make_candidate(c4, {{0, 0}, {1, 0}, {1, 1}, {0, 1}}).lipschitz_verified);
  CHECK_FALSE(make_candidate(c4, {{0, 0}, {2, 0}, {1, 1}, {0, 1}}).lipschitz_verified);
  CHECK_THROWS(make_candidate(c4, {{0, 0}}));
}

TEST_CASE("preimage_concentration examples") {
  const auto c4 = cycle_graph(4);
  const auto constant = make_candidate(c4, std::vector<Lattice2>(4, Lattice2{3, -2}));
  const auto peak = preimage_concentration(constant, 0.0);
  CHECK(peak.fraction == 1.0);
  CHECK(peak.center == Lattice2{3, -2});

  const auto spread = make_candidate(c4, {{0, 0}, {10, 0}, {0, 10}, {10, 10}});
  CHECK(preimage_concentration(spread, 0.0).fraction == Approx(0.25));

  const auto g = margulis_graph(6);
  const auto cand = round_to_grid(g, spectral_embedding(g, 2));
  CHECK(cand.lipschitz_verified);
  CHECK(preimage_concentration(cand, 2.0).fraction == brute_concentration(cand.image, 2.0));
}

TEST_CASE("preimage_concentration matches brute force on random maps") {
  Rng rng(3);
  const auto g = margulis_graph(5);
  for (int t = 0; t < 50; ++t) {
    const auto image = random_lipschitz_image(g, rng);
    const double r = rng.index(5);
    CHECK(preimage_concentration(make_candidate(g, image), r).fraction ==
          brute_concentration(image, r));
  }
}

TEST_CASE("averaging_center") {
  const auto c4 = cycle_graph(4);
  const auto same = averaging_center(make_candidate(c4, std::vector<Lattice2>(4, Lattice2{2, 5})));
  CHECK(same.shift[0] == -2.0);
  CHECK(same.shift[1] == -5.0);
  const auto k2 = complete_graph(2);
  const auto sym = averaging_center(make_candidate(k2, {{3, -1}, {-3, 1}}));
  CHECK(sym.shift[0] == 0.0);
  CHECK(sym.shift[1] == 0.0);

  const auto g = margulis_graph(4);
  const auto cand = round_to_grid(g, spectral_embedding(g, 2));
  const auto avg = averaging_center(cand);
  double mx = 0.0, my = 0.0;
  for (const auto &p : cand.image) {
    mx += static_cast<double>(p[0]);
    my += static_cast<double>(p[1]);
  }
  CHECK(avg.shift[0] == Approx(-mx / 16.0));
  CHECK(avg.shift[1] == Approx(-my / 16.0));
  CHECK(avg.residual < 1e-12);
}

TEST_CASE("concentration_witness") {
  const auto g = margulis_graph(4);
  const double c0 = c0_bound(g);
  const auto spectral = round_to_grid(g, spectral_embedding(g, 2));
  const auto w = concentration_witness(g, spectral, c0);
  CHECK(w.fraction > 0.5);
  CHECK(w.radius == Approx(2.0 * (1.0 + kRadiusMargin) * std::sqrt(c0)));
  CHECK(2 * w.inside_euclidean > g.vertex_count());

  const auto constant = make_candidate(g, std::vector<Lattice2>(16, Lattice2{4, 4}));
  const auto wc = concentration_witness(g, constant, c0);
  CHECK(wc.fraction == 1.0);

  const auto spread = max_spread_embedding(g, 2, 200, 3);
  const auto rounded = round_to_grid(g, spread.embedding);
  CHECK(rounded.lipschitz_verified);
  CHECK(concentration_witness(g, rounded, c0).fraction > 0.5);

  const auto bad = make_candidate(g, std::vector<Lattice2>(16, Lattice2{0, 0}));
  auto broken = bad;
  broken.image[0] = {5, 5};
  CHECK_THROWS_AS(concentration_witness(g, broken, c0), std::invalid_argument);
}

TEST_CASE("witness finds half the vertices for random Lipschitz candidates") {
  Rng rng(7);
  for (const auto &g : {margulis_graph(3), margulis_graph(5), random_regular(32, 4, 1)}) {
    const double c0 = c0_bound(g);
    for (int t = 0; t < 200; ++t) {
      const auto cand = make_candidate(g, random_lipschitz_image(g, rng));
      REQUIRE(cand.lipschitz_verified);
      const auto w = concentration_witness(g, cand, c0);
      CHECK(2.0 * w.fraction >= 1.0);
    }
  }
}

TEST_CASE("obstruction row arithmetic") {
  // c0 = 4 -> R = 3, c(R) = 6, capacity 85.
  const int r = static_cast<int>(std::floor(std::sqrt(4.0))) + 1;
  CHECK(r == 3);
  CHECK(translation_c_of_r(r) == 6.0);
  CHECK(GridBall::capacity(6) == 85);
  CHECK(0.5 / GridBall::capacity(6) == Approx(1.0 / 170.0));
}

TEST_CASE("obstruction_bound on margulis and cycles") {
  const auto fam = make_family(FamilyKind::margulis, {3, 4, 5, 6, 7, 8});
  const auto report = obstruction_bound(fam);
  CHECK(report.uniformly_gapped);
  CHECK(report.witnesses_ok());
  for (const auto &row : report.rows) {
    CHECK(row.forced_fraction == report.rows.front().forced_fraction);
    CHECK(row.c0 == report.family_c0);
    CHECK(row.r == static_cast<int>(std::floor(std::sqrt(row.c0))) + 1);
    const auto k = static_cast<std::int64_t>(std::ceil(2.0 * row.r));
    CHECK(row.capacity == 2 * k * k + 2 * k + 1);
    CHECK(row.forced_fraction == 0.5 / row.capacity);
    CHECK(row.verdict == kVerdictExcluded);
  }
  const auto threaded = obstruction_bound(fam, {BaselineStrategy::spectral, 300, 1, 4});
  std::ostringstream a, b;
  write_obstruction_csv(a, report);
  write_obstruction_csv(b, threaded);
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("n,d_max,lambda1,c0,R,c_of_R,capacity,forced_fraction,baseline_fraction,verdict\n",
                      0) == 0);

  const auto cycles = obstruction_bound(make_family(FamilyKind::cycle, {8, 16, 32, 64}));
  CHECK_FALSE(cycles.uniformly_gapped);
  for (std::size_t i = 1; i < cycles.rows.size(); ++i)
    CHECK(cycles.rows[i].forced_fraction < cycles.rows[i - 1].forced_fraction);
  CHECK(cycles.rows.back().verdict == kVerdictNone);
  CHECK(cycles.witnesses_ok());
}

TEST_CASE("max-spread baseline") {
  const auto fam = make_family(FamilyKind::margulis, {3, 4, 5});
  const auto report = obstruction_bound(fam, {BaselineStrategy::max_spread, 100, 5, 1});
  CHECK(report.witnesses_ok());
  CHECK(parse_baseline("max-spread") == BaselineStrategy::max_spread);
  CHECK_THROWS(parse_baseline("isomap"));
}
