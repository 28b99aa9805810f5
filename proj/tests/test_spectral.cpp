#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "coarse/graphs.hpp"
#include "coarse/rng.hpp"
#include "coarse/spectral.hpp"
#include "oracles.hpp"

using namespace coarse;
using doctest::Approx;

namespace {

double cycle_lambda1(int n) { return 2.0 * (1.0 - std::cos(2.0 * std::numbers::pi / n)); }

std::vector<double> random_vector(int n, Rng &rng) {
  std::vector<double> f(n);
  for (double &x : f)
    x = rng.normal();
  return f;
}

double dot(const std::vector<double> &a, const std::vector<double> &b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += a[i] * b[i];
  return s;
}

} // namespace

TEST_CASE("laplacian_apply examples") {
  const auto c4 = cycle_graph(4);
  const std::vector<double> f{1, 0, -1, 0};
  CHECK(laplacian_apply(c4, f) == std::vector<double>{2, 0, -2, 0});
  const std::vector<double> k2f{1, -1};
  CHECK(laplacian_apply(complete_graph(2), k2f) == std::vector<double>{2, -2});
  const std::vector<double> ones(9, 3.5);
  for (double x : laplacian_apply(margulis_graph(3), ones))
    CHECK(x == 0.0);
  CHECK_THROWS(laplacian_apply(c4, std::vector<double>{1, 2}));
}

TEST_CASE("laplacian_apply is symmetric") {
  Rng rng(3);
  for (const auto &g : {margulis_graph(5), random_regular(32, 4, 1), cycle_graph(11)}) {
    for (int t = 0; t < 50; ++t) {
      const auto f = random_vector(g.vertex_count(), rng);
      const auto h = random_vector(g.vertex_count(), rng);
      CHECK(dot(laplacian_apply(g, f), h) == Approx(dot(f, laplacian_apply(g, h))).epsilon(1e-12));
    }
  }
}

TEST_CASE("rayleigh_quotient examples") {
  const auto c4 = cycle_graph(4);
  CHECK(rayleigh_quotient(c4, std::vector<double>{1, 0, -1, 0}) == Approx(2.0));
  CHECK(rayleigh_quotient(complete_graph(2), std::vector<double>{1, -1}) == Approx(2.0));
  CHECK(rayleigh_quotient(c4, std::vector<double>{1, 1, -1, -1}) == Approx(2.0));
  CHECK_THROWS(rayleigh_quotient(c4, std::vector<double>{2, 2, 2, 2}));
}

TEST_CASE("rayleigh quotient never undercuts lambda1") {
  Rng rng(8);
  for (const auto &g : {margulis_graph(4), cycle_graph(10), complete_graph(6), path_graph(7)}) {
    const double l1 = lambda1(g).lambda1;
    for (int t = 0; t < 2000; ++t)
      CHECK(rayleigh_quotient(g, random_vector(g.vertex_count(), rng)) >= l1 - 1e-9);
  }
}

TEST_CASE("lambda1 closed forms against the Jacobi oracle") {
  for (int n = 3; n <= 24; ++n) {
    const double cyc = lambda1(cycle_graph(n)).lambda1;
    CHECK(cyc == Approx(cycle_lambda1(n)).epsilon(1e-9));
    CHECK(oracle::lambda1_jacobi(cycle_graph(n)) == Approx(cycle_lambda1(n)).epsilon(1e-9));
    CHECK(lambda1(complete_graph(n)).lambda1 == Approx(n).epsilon(1e-9));
    CHECK(oracle::lambda1_jacobi(complete_graph(n)) == Approx(n).epsilon(1e-9));
  }
  CHECK(lambda1(path_graph(3)).lambda1 == Approx(1.0).epsilon(1e-9));
}

TEST_CASE("lambda1 matches Jacobi on irregular graphs") {
  Rng rng(21);
  for (int t = 0; t < 20; ++t) {
    const auto g = oracle::random_connected_graph(4 + rng.index(20), 0.25, rng);
    CHECK(lambda1(g).lambda1 == Approx(oracle::lambda1_jacobi(g)).epsilon(1e-9));
  }
  CHECK(lambda1(margulis_graph(8)).lambda1 ==
        Approx(oracle::lambda1_jacobi(margulis_graph(8))).epsilon(1e-9));
  CHECK(lambda1(margulis_graph(8)).lambda1 > 0.3);
}

TEST_CASE("certificate invariants") {
  for (const auto &g : {margulis_graph(6), random_regular(64, 4, 2), cycle_graph(30)}) {
    const auto cert = lambda1(g);
    double sum = 0.0, norm2 = 0.0;
    for (double x : cert.witness) {
      sum += x;
      norm2 += x * x;
    }
    CHECK(std::abs(sum) <= 1e-9 * std::sqrt(norm2));
    CHECK(rayleigh_quotient(g, cert.witness) == Approx(cert.lambda1).epsilon(1e-9));
    const auto lw = laplacian_apply(g, cert.witness);
    double res = 0.0;
    for (std::size_t i = 0; i < lw.size(); ++i)
      res += std::pow(lw[i] - cert.lambda1 * cert.witness[i], 2);
    CHECK(std::sqrt(res) <= 1e-8 * std::sqrt(norm2));
    CHECK(cert.degree == g.max_degree());
    CHECK(cert.conductance_lower_bound == Approx(cert.lambda1 / (2.0 * g.max_degree())));
  }
  CHECK_THROWS(lambda1(build_graph(4, {{0, 1}, {2, 3}})));
}

TEST_CASE("iterative solver agrees with dense on overlap sizes") {
  for (const auto &g : {margulis_graph(20), random_regular(500, 4, 5), cycle_graph(200)}) {
    const double dense = lambda1(g, EigenMethod::dense).lambda1;
    const auto it = lambda1(g, EigenMethod::iterative);
    CHECK(it.lambda1 == Approx(dense).epsilon(1e-9));
    CHECK(rayleigh_quotient(g, it.witness) == Approx(dense).epsilon(1e-9));
  }
}

TEST_CASE("bottom_eigenpairs are orthonormal and ascending") {
  const auto pairs = bottom_eigenpairs(margulis_graph(4), 3);
  REQUIRE(pairs.size() == 3);
  CHECK(pairs[0].value <= pairs[1].value);
  CHECK(pairs[1].value <= pairs[2].value);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(dot(pairs[i].vector, pairs[j].vector) == Approx(i == j ? 1.0 : 0.0).epsilon(1e-10));
}

TEST_CASE("conductance dominates lambda1 / (2 d_max)") {
  Rng rng(31);
  for (int t = 0; t < 60; ++t) {
    const auto g = oracle::random_connected_graph(2 + rng.index(11), rng.uniform(0.05, 0.7), rng);
    const double bound = lambda1(g).lambda1 / (2.0 * g.max_degree());
    CHECK(conductance_exact(g).value.value() >= bound - 1e-12);
  }
}

TEST_CASE("cheeger_crosscheck examples") {
  const auto k4 = cheeger_crosscheck(complete_graph(4));
  CHECK(k4.h_exact == Rational(2));
  CHECK(k4.lambda1 == Approx(4.0));
  CHECK(k4.bounds_ok);
  const auto c4 = cheeger_crosscheck(cycle_graph(4));
  CHECK(c4.h_exact == Rational(1));
  CHECK(c4.lambda1 == Approx(2.0));
  CHECK(c4.bounds_ok);
  const auto c8 = cheeger_crosscheck(cycle_graph(8));
  CHECK(c8.lambda1 == Approx(2.0 * (1.0 - std::cos(std::numbers::pi / 4))));
  CHECK(c8.bounds_ok);
  CHECK_THROWS(cheeger_crosscheck(cycle_graph(21)));
}

TEST_CASE("edge expansion matches brute force") {
  Rng rng(41);
  for (int t = 0; t < 30; ++t) {
    const auto g = oracle::random_connected_graph(2 + rng.index(11), rng.uniform(0.05, 0.7), rng);
    const auto [num, den] = oracle::edge_expansion_brute(g);
    CHECK(edge_expansion_exact(g).first == Rational(num, den));
  }
  const auto [num, den] = oracle::edge_expansion_brute(margulis_graph(3));
  CHECK(edge_expansion_exact(margulis_graph(3)).first == Rational(num, den));
}

TEST_CASE("family certification") {
  // Pinned from the first eigensolve: min lambda1 over Margulis sides 3..10
  // is attained at side 10.
  const auto margulis = certify_family(make_family(FamilyKind::margulis, {3, 4, 5, 6, 7, 8, 9, 10}));
  CHECK(margulis.uniformly_gapped);
  CHECK(margulis.delta > 1.14);
  CHECK(margulis.delta == Approx(1.1440).epsilon(1e-3));
  for (const auto &c : margulis.certificates)
    CHECK(c.lambda1 > 0.0);

  const auto rr = certify_family(make_family(FamilyKind::random_regular, {16, 32, 64}, 4, 1));
  for (const auto &c : rr.certificates)
    CHECK(c.lambda1 > 0.0);

  const auto cycles = certify_family(make_family(FamilyKind::cycle, {8, 16, 32, 64, 128}));
  CHECK_FALSE(cycles.uniformly_gapped);
  CHECK(cycles.decay_exponent > 1.5);
  CHECK(cycles.delta == Approx(cycle_lambda1(128)).epsilon(1e-9));
}

TEST_CASE("certificate csv") {
  std::ostringstream os;
  write_certificate_csv_header(os);
  const auto g = complete_graph(4);
  write_certificate_csv_row(os, g, lambda1(g), Rational(2));
  write_certificate_csv_row(os, g, lambda1(g), std::nullopt);
  const std::string s = os.str();
  CHECK(s.rfind("n,m,d_max,lambda1,h_exact,conductance_lower_bound\n", 0) == 0);
  CHECK(s.find("\n4,6,3,") != std::string::npos);
  CHECK(s.find(",,") != std::string::npos);
}
