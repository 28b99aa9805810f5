#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "coarse/cayley.hpp"
#include "coarse/rng.hpp"
#include "coarse/spectral.hpp"

using namespace coarse;
using doctest::Approx;

namespace {

std::vector<Point> z2_points(int radius) {
  std::vector<Point> pts;
  for (int x = -radius; x <= radius; ++x)
    for (int y = -radius; y <= radius; ++y)
      if (std::abs(x) + std::abs(y) <= radius)
        pts.push_back({x, y});
  return pts;
}

PointMap scaled_identity(double s) {
  return [s](const Point &x) {
    return std::vector<double>{s * static_cast<double>(x[0]), s * static_cast<double>(x[1])};
  };
}

} // namespace

TEST_CASE("marked groups have symmetric generating sets without the identity") {
  for (const auto &g : {MarkedGroup::free_abelian(2), MarkedGroup::free(2),
                        MarkedGroup::cyclic_product(3, 4), MarkedGroup::sl2_mod_p(5)}) {
    const auto &gens = g.generators();
    for (const auto &s : gens) {
      CHECK(s != g.identity());
      CHECK(std::find(gens.begin(), gens.end(), g.inverse(s)) != gens.end());
      CHECK(g.multiply(s, g.inverse(s)) == g.identity());
    }
  }
  CHECK(MarkedGroup::free_abelian(2).generators().size() == 4);
  CHECK(MarkedGroup::cyclic_product(2, 2).generators().size() == 2);
}

TEST_CASE("cayley_ball examples") {
  CHECK(cayley_ball(MarkedGroup::free_abelian(2), 1).size() == 5);
  CHECK(cayley_ball(MarkedGroup::free(2), 2).size() == 17);
  CHECK(cayley_ball(MarkedGroup::free(2), 3).size() == 1 + 4 + 12 + 36);
  CHECK(cayley_ball(MarkedGroup::cyclic_product(3, 3), 2).size() == 9);
  CHECK(cayley_ball(MarkedGroup::free_abelian(2), 6).size() == GridBall::capacity(6));
  CHECK_THROWS_AS(cayley_ball(MarkedGroup::free(3), 12, 1000), std::length_error);
}

TEST_CASE("sl2 mod p gives the full group") {
  const auto ball = cayley_ball(MarkedGroup::sl2_mod_p(5), 30);
  CHECK(ball.size() == 120);
  const auto g = ball.graph();
  CHECK(g.connected());
  CHECK(g.max_degree() == 4);
  CHECK(lambda1(g).lambda1 > 0.0);
}

TEST_CASE("word_norm examples") {
  const auto ball = cayley_ball(MarkedGroup::free_abelian(2), 6);
  CHECK(word_norm(ball, {2, -3}) == 5);
  CHECK(word_norm(ball, {0, 0}) == 0);
  for (const auto &s : ball.group().generators())
    CHECK(word_norm(ball, s) == 1);
  CHECK_THROWS_AS(word_norm(ball, {7, 0}), std::out_of_range);
  CHECK(word_distance(ball, {1, 1}, {-1, 2}) == 3);
}

TEST_CASE("ball norms are consistent under generator steps") {
  for (const auto &ball : {cayley_ball(MarkedGroup::free(2), 4),
                           cayley_ball(MarkedGroup::cyclic_product(4, 5), 6),
                           cayley_ball(MarkedGroup::sl2_mod_p(3), 10)}) {
    for (int i = 0; i < ball.size(); ++i) {
      CHECK((ball.norm(i) == 0) == (ball.element(i) == ball.group().identity()));
      for (std::size_t s = 0; s < ball.group().generators().size(); ++s) {
        const int j = ball.neighbor(i, static_cast<int>(s));
        if (j >= 0)
          CHECK(std::abs(ball.norm(j) - ball.norm(i)) <= 1);
      }
    }
  }
}

TEST_CASE("word norm is subadditive and the word metric left invariant") {
  for (const auto &group : {MarkedGroup::free(2), MarkedGroup::free_abelian(2),
                            MarkedGroup::sl2_mod_p(5)}) {
    const auto ball = cayley_ball(group, 6);
    const auto &els = ball.elements();
    Rng rng(4);
    for (int t = 0; t < 3000; ++t) {
      const auto &a = els[rng.below(els.size())];
      const auto &b = els[rng.below(els.size())];
      const auto ab = group.multiply(a, b);
      if (ball.index_of(ab))
        CHECK(word_norm(ball, ab) <= word_norm(ball, a) + word_norm(ball, b));
      const auto &g = els[rng.below(els.size())];
      const auto ga = group.multiply(g, a), gb = group.multiply(g, b);
      const auto diff = group.multiply(group.inverse(a), b);
      if (ball.index_of(ga) && ball.index_of(gb) && ball.index_of(diff))
        CHECK(word_distance(ball, ga, gb) == word_distance(ball, a, b));
    }
  }
}

TEST_CASE("displacement_check examples") {
  const auto ball = cayley_ball(MarkedGroup::free_abelian(2), 6);
  const auto pts = z2_points(4);
  CHECK(displacement_check(ball, translation_action(), scaled_identity(1.0), pts).pass);
  const auto bad = displacement_check(ball, translation_action(), scaled_identity(2.0), pts);
  CHECK_FALSE(bad.pass);
  CHECK(bad.worst.displacement == Approx(2.0 * bad.worst.norm));

  const auto gens_only = cayley_ball(MarkedGroup::free_abelian(2), 1);
  const auto first = displacement_check(gens_only, translation_action(), scaled_identity(2.0), pts);
  CHECK(first.worst.gamma == Element{1, 0});
  CHECK(first.worst.displacement == Approx(2.0));

  const auto z = cayley_ball(MarkedGroup::free_abelian(1), 5);
  std::vector<Point> line;
  for (int x = -10; x <= 10; ++x)
    line.push_back({x});
  const PointMap half = [](const Point &x) { return std::vector<double>{x[0] / 2.0}; };
  CHECK(displacement_check(z, translation_action(), half, line).pass);

  const DomainTest small = [](const Point &x) { return std::abs(x[0]) <= 10; };
  CHECK_THROWS_AS(displacement_check(z, translation_action(), half, line, small),
                  std::out_of_range);
}

TEST_CASE("generator-level pass implies the full condition") {
  Rng rng(19);
  for (int radius = 1; radius <= 6; ++radius) {
    const auto ball = cayley_ball(MarkedGroup::free_abelian(2), radius);
    const auto pts = z2_points(4);
    for (int t = 0; t < 20; ++t) {
      const double a = rng.uniform(-1, 1), b = rng.uniform(-1, 1);
      const double c = rng.uniform(-1, 1), d = rng.uniform(-1, 1);
      const PointMap p = [=](const Point &x) {
        const double u = static_cast<double>(x[0]), v = static_cast<double>(x[1]);
        return std::vector<double>{std::max(a * u, b * v) / std::sqrt(2.0),
                                   std::min(c * u, d * v) / std::sqrt(2.0)};
      };
      const bool gen_pass = displacement_check(ball, translation_action(), p, pts, {}, 0).pass;
      bool full = true;
      for (const auto &x : pts)
        for (int i = 0; i < ball.size(); ++i) {
          const auto y = translation_action()(ball.element(i), x);
          const auto px = p(x), py = p(y);
          const double disp = std::hypot(px[0] - py[0], px[1] - py[1]);
          if (disp > ball.norm(i) + 1e-12)
            full = false;
        }
      CHECK(gen_pass);
      CHECK(full);
    }
  }

  const auto free_ball = cayley_ball(MarkedGroup::free(2), 6);
  const auto &group = free_ball.group();
  std::vector<Point> words;
  for (int i = 0; i < free_ball.size(); ++i)
    if (free_ball.norm(i) <= 2)
      words.push_back(free_ball.element(i));
  const Action left = [&](const Element &g, const Point &x) { return group.multiply(g, x); };
  const PointMap norm_map = [&](const Point &x) {
    return std::vector<double>{static_cast<double>(word_norm(free_ball, x))};
  };
  CHECK(displacement_check(cayley_ball(MarkedGroup::free(2), 4), left, norm_map, words, {}, 0).pass);
  for (const auto &x : words)
    for (int i = 0; i < free_ball.size(); ++i)
      if (free_ball.norm(i) <= 4)
        CHECK(std::abs(norm_map(x)[0] - norm_map(left(free_ball.element(i), x))[0]) <=
              free_ball.norm(i));
}

TEST_CASE("prop2_crosscheck") {
  const auto ball = cayley_ball(MarkedGroup::free_abelian(2), 8);
  const auto pts = z2_points(8);
  const auto ok = prop2_crosscheck(ball, translation_action(), scaled_identity(1.0), pts);
  CHECK(ok.pass);
  CHECK(ok.displacement_pass);
  CHECK(ok.agree);
  const auto bad = prop2_crosscheck(ball, translation_action(), scaled_identity(2.0), pts);
  CHECK_FALSE(bad.pass);
  CHECK_FALSE(bad.displacement_pass);
  CHECK(bad.agree);
  CHECK(bad.worst_excess > 0.0);
}

TEST_CASE("prop2 and displacement verdicts agree on random piecewise maps") {
  const auto ball = cayley_ball(MarkedGroup::free_abelian(2), 8);
  const auto pts = z2_points(8);
  Rng rng(23);
  int passes = 0;
  for (int t = 0; t < 100; ++t) {
    const double scale = rng.uniform(0.5, 1.5);
    std::vector<std::array<double, 5>> pieces(3);
    for (auto &pc : pieces)
      for (double &x : pc)
        x = rng.uniform(-1, 1);
    const PointMap p = [=](const Point &x) {
      const double u = static_cast<double>(x[0]), v = static_cast<double>(x[1]);
      double a = -1e300, b = -1e300;
      for (const auto &pc : pieces) {
        a = std::max(a, pc[0] * (u - pc[4]) + pc[1] * v);
        b = std::max(b, pc[2] * u + pc[3] * (v + pc[4]));
      }
      return std::vector<double>{scale * a / std::sqrt(2.0), scale * b / std::sqrt(2.0)};
    };
    const auto r = prop2_crosscheck(ball, translation_action(), p, pts, {}, 200, t + 1);
    CHECK(r.agree);
    passes += r.pass;
  }
  CHECK(passes > 0);
  CHECK(passes < 100);
}

TEST_CASE("variations") {
  const auto z = cayley_ball(MarkedGroup::free_abelian(1), 3);
  const ScalarMap constant = [](const Point &) { return 4.0; };
  CHECK(gamma_variation(z, translation_action(), constant, 2, {0}) == 0.0);
  const ScalarMap squash = [](const Point &x) {
    return static_cast<double>(x[0]) / (1.0 + std::abs(static_cast<double>(x[0])));
  };
  CHECK(gamma_variation(z, translation_action(), squash, 1, {0}) == Approx(0.5));
  CHECK_THROWS(gamma_variation(z, translation_action(), squash, 4, {0}));

  std::vector<Point> line;
  for (int x = -5; x <= 5; ++x)
    line.push_back({x});
  const auto dist = [](const Point &a, const Point &b) {
    return static_cast<double>(std::abs(a[0] - b[0]));
  };
  const double var = ball_variation(line, dist, squash, 1.0, {0});
  CHECK(var >= 0.0);
  CHECK(var == Approx(0.5));
}

TEST_CASE("radial map") {
  const auto map = radial_map_build(32, 2.0, 0.1);
  CHECK(map.displacement_ok());
  CHECK(map.winding_number == 1);
  CHECK(map.interior_points > 0);
  for (const auto &x : map.ball.points())
    if (l1_norm(x) <= 2) {
      CHECK(map(x)[0] == 0.0);
      CHECK(map(x)[1] == 0.0);
    }
  for (std::size_t t = 1; t < map.profile.size(); ++t) {
    CHECK(map.profile[t] >= map.profile[t - 1]);
    CHECK(map.profile[t] - map.profile[t - 1] <= 1.0 - 0.1 + 1e-12);
    if (map.nu[t] > 0)
      CHECK(map.profile[t] <= 1.0 / map.nu[t] + 1e-12);
  }
  // Independent generator scan over interior points.
  double worst = 0.0;
  const Lattice2 steps[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  for (const auto &x : map.ball.points())
    if (l1_norm(x) < 32)
      for (const auto &s : steps) {
        const Lattice2 y{x[0] + s[0], x[1] + s[1]};
        const auto px = map(x), py = map(y);
        worst = std::max(worst, std::hypot(px[0] - py[0], px[1] - py[1]));
      }
  CHECK(worst <= 1.0 + 1e-12);
  CHECK(worst == Approx(map.max_generator_displacement));

  CHECK_THROWS(radial_map_build(32, 1.0, 0.1));
  CHECK_THROWS(radial_map_build(32, 2.0, 1.5));
  CHECK_THROWS(radial_map_build(2, 2.0, 0.1));
}

TEST_CASE("norm table csv") {
  const auto csv = norm_table_csv(cayley_ball(MarkedGroup::free_abelian(2), 1));
  CHECK(csv.rfind("element_id,word_norm\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
}
