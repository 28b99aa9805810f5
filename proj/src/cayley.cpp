#include "coarse/cayley.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "coarse/rng.hpp"

namespace coarse {

std::size_t ElementHash::operator()(const Element &e) const noexcept {
  std::uint64_t h = 0x84222325cbf29ce4ULL ^ e.size();
  for (std::int64_t x : e)
    h = splitmix64(h ^ static_cast<std::uint64_t>(x));
  return static_cast<std::size_t>(h);
}

namespace {

std::int64_t mod(std::int64_t a, std::int64_t n) {
  const std::int64_t r = a % n;
  return r < 0 ? r + n : r;
}

bool is_prime(std::int64_t p) {
  if (p < 2)
    return false;
  for (std::int64_t q = 2; q * q <= p; ++q)
    if (p % q == 0)
      return false;
  return true;
}

} // namespace

MarkedGroup::MarkedGroup(GroupKind kind, std::vector<std::int64_t> params)
    : kind_(kind), params_(std::move(params)) {
  auto add = [this](Element g) {
    if (g == identity())
      return;
    if (std::find(generators_.begin(), generators_.end(), g) == generators_.end())
      generators_.push_back(std::move(g));
  };
  switch (kind_) {
  case GroupKind::free_abelian:
    for (std::int64_t i = 0; i < params_[0]; ++i)
      for (std::int64_t sign : {1, -1}) {
        Element g(params_[0], 0);
        g[i] = sign;
        add(g);
      }
    break;
  case GroupKind::free:
    for (std::int64_t i = 1; i <= params_[0]; ++i) {
      add({i});
      add({-i});
    }
    break;
  case GroupKind::cyclic_product:
    for (int i = 0; i < 2; ++i)
      for (std::int64_t sign : {1, -1}) {
        Element g{0, 0};
        g[i] = mod(sign, params_[i]);
        add(g);
      }
    break;
  case GroupKind::sl2_mod_p: {
    const std::int64_t p = params_[0];
    add({1, 1, 0, 1});
    add({1, p - 1, 0, 1});
    add({1, 0, 1, 1});
    add({1, 0, p - 1, 1});
    break;
  }
  }
}

MarkedGroup MarkedGroup::free_abelian(int rank) {
  if (rank < 1)
    throw std::invalid_argument("free_abelian: rank must be positive");
  return MarkedGroup(GroupKind::free_abelian, {rank});
}

MarkedGroup MarkedGroup::free(int rank) {
  if (rank < 1)
    throw std::invalid_argument("free: rank must be positive");
  return MarkedGroup(GroupKind::free, {rank});
}

MarkedGroup MarkedGroup::cyclic_product(int n, int m) {
  if (n < 2 || m < 2)
    throw std::invalid_argument("cyclic_product: both factors need order at least 2");
  return MarkedGroup(GroupKind::cyclic_product, {n, m});
}

MarkedGroup MarkedGroup::sl2_mod_p(int p) {
  if (!is_prime(p))
    throw std::invalid_argument("sl2_mod_p: p must be prime");
  return MarkedGroup(GroupKind::sl2_mod_p, {p});
}

Element MarkedGroup::identity() const {
  switch (kind_) {
  case GroupKind::free_abelian:
    return Element(params_[0], 0);
  case GroupKind::free:
    return {};
  case GroupKind::cyclic_product:
    return {0, 0};
  case GroupKind::sl2_mod_p:
    return {1, 0, 0, 1};
  }
  return {};
}

Element MarkedGroup::multiply(const Element &a, const Element &b) const {
  switch (kind_) {
  case GroupKind::free_abelian: {
    Element c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
      c[i] = a[i] + b[i];
    return c;
  }
  case GroupKind::free: {
    Element c = a;
    for (std::int64_t letter : b) {
      if (!c.empty() && c.back() == -letter)
        c.pop_back();
      else
        c.push_back(letter);
    }
    return c;
  }
  case GroupKind::cyclic_product:
    return {mod(a[0] + b[0], params_[0]), mod(a[1] + b[1], params_[1])};
  case GroupKind::sl2_mod_p: {
    const std::int64_t p = params_[0];
    return {mod(a[0] * b[0] + a[1] * b[2], p), mod(a[0] * b[1] + a[1] * b[3], p),
            mod(a[2] * b[0] + a[3] * b[2], p), mod(a[2] * b[1] + a[3] * b[3], p)};
  }
  }
  return {};
}

Element MarkedGroup::inverse(const Element &a) const {
  switch (kind_) {
  case GroupKind::free_abelian: {
    Element c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
      c[i] = -a[i];
    return c;
  }
  case GroupKind::free: {
    Element c(a.rbegin(), a.rend());
    for (auto &x : c)
      x = -x;
    return c;
  }
  case GroupKind::cyclic_product:
    return {mod(-a[0], params_[0]), mod(-a[1], params_[1])};
  case GroupKind::sl2_mod_p: {
    const std::int64_t p = params_[0];
    return {a[3], mod(-a[1], p), mod(-a[2], p), a[0]};
  }
  }
  return {};
}

std::string MarkedGroup::format(const Element &a) const {
  std::ostringstream os;
  if (kind_ == GroupKind::free) {
    if (a.empty())
      return "e";
    for (std::int64_t letter : a) {
      os << static_cast<char>('a' + (std::llabs(letter) - 1) % 26);
      if (letter < 0)
        os << "^-1";
    }
    return os.str();
  }
  os << '(';
  for (std::size_t i = 0; i < a.size(); ++i)
    os << (i ? " " : "") << a[i];
  os << ')';
  return os.str();
}

CayleyBall::CayleyBall(MarkedGroup group, int radius, std::size_t cap)
    : group_(std::move(group)), radius_(radius),
      degree_(static_cast<int>(group_.generators().size())) {
  if (radius < 0)
    throw std::invalid_argument("cayley_ball: negative radius");
  elements_.push_back(group_.identity());
  norms_.push_back(0);
  index_.emplace(elements_[0], 0);
  for (std::size_t head = 0; head < elements_.size(); ++head) {
    if (norms_[head] == radius)
      continue;
    for (const Element &s : group_.generators()) {
      Element next = group_.multiply(elements_[head], s);
      if (index_.count(next))
        continue;
      if (elements_.size() >= cap)
        throw std::length_error("cayley_ball: more than " + std::to_string(cap) +
                                " elements; lower the radius or raise the cap");
      index_.emplace(next, static_cast<int>(elements_.size()));
      elements_.push_back(std::move(next));
      norms_.push_back(norms_[head] + 1);
    }
  }
  adjacency_.assign(elements_.size() * degree_, -1);
  for (std::size_t i = 0; i < elements_.size(); ++i)
    for (int s = 0; s < degree_; ++s) {
      auto it = index_.find(group_.multiply(elements_[i], group_.generators()[s]));
      if (it != index_.end())
        adjacency_[i * degree_ + s] = it->second;
    }
}

std::optional<int> CayleyBall::index_of(const Element &e) const {
  auto it = index_.find(e);
  if (it == index_.end())
    return std::nullopt;
  return it->second;
}

FiniteGraph CayleyBall::graph() const {
  std::vector<Edge> edges;
  for (int i = 0; i < size(); ++i)
    for (int s = 0; s < degree_; ++s) {
      const int j = neighbor(i, s);
      if (j > i)
        edges.push_back({i, j});
    }
  return FiniteGraph(size(), std::move(edges));
}

CayleyBall cayley_ball(const MarkedGroup &group, int radius, std::size_t cap) {
  return CayleyBall(group, radius, cap);
}

int word_norm(const CayleyBall &ball, const Element &gamma) {
  auto i = ball.index_of(gamma);
  if (!i)
    throw std::out_of_range("word_norm: " + ball.group().format(gamma) +
                            " lies outside the enumerated ball of radius " +
                            std::to_string(ball.radius()));
  return ball.norm(*i);
}

int word_distance(const CayleyBall &ball, const Element &x, const Element &y) {
  return word_norm(ball, ball.group().multiply(ball.group().inverse(x), y));
}

Action translation_action() {
  return [](const Element &g, const Point &x) {
    if (g.size() != x.size())
      throw std::invalid_argument("translation_action: dimension mismatch");
    Point y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
      y[i] = g[i] + x[i];
    return y;
  };
}

namespace {

double euclidean(const std::vector<double> &a, const std::vector<double> &b) {
  if (a.size() != b.size())
    throw std::invalid_argument("point map returned vectors of different length");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

void require_in_domain(const DomainTest &domain, const Point &x, const char *what) {
  if (domain && !domain(x))
    throw std::out_of_range(std::string("displacement_check: ") + what +
                            " leaves the tested domain");
}

using PointSet = std::unordered_set<Point, ElementHash>;

/// Tested points together with their generator neighbours inside the domain.
PointSet generator_closure(const CayleyBall &ball, const Action &action,
                           const std::vector<Point> &points, const DomainTest &domain) {
  PointSet out(points.begin(), points.end());
  for (const Point &x : points)
    for (const Element &s : ball.group().generators()) {
      Point y = action(s, x);
      if (!domain || domain(y))
        out.insert(std::move(y));
    }
  return out;
}

} // namespace

DisplacementResult displacement_check(const CayleyBall &ball, const Action &action,
                                      const PointMap &p, const std::vector<Point> &points,
                                      const DomainTest &domain, int spot_samples,
                                      std::uint64_t seed) {
  DisplacementResult result;
  double worst_excess = -std::numeric_limits<double>::infinity();
  auto record = [&](const Element &gamma, const Point &x, double disp, int norm) {
    const double excess = disp - norm;
    if (excess > norm * kDisplacementSlack)
      result.pass = false;
    if (excess > worst_excess) {
      worst_excess = excess;
      result.worst = {gamma, x, disp, norm};
    }
  };

  const auto &gens = ball.group().generators();
  for (const Point &x : points) {
    require_in_domain(domain, x, "a tested point");
    const auto px = p(x);
    for (const Element &s : gens) {
      const Point y = action(s, x);
      require_in_domain(domain, y, "a generator move");
      record(s, x, euclidean(px, p(y)), 1);
      ++result.generator_checks;
    }
  }

  std::vector<int> candidates;
  for (int i = 0; i < ball.size(); ++i)
    if (ball.norm(i) >= 2)
      candidates.push_back(i);
  if (!candidates.empty() && !points.empty() && spot_samples > 0) {
    const PointSet reach = generator_closure(ball, action, points, domain);
    Rng rng(seed);
    for (int k = 0; k < spot_samples; ++k) {
      const Point &x = points[rng.below(points.size())];
      const int gi = candidates[rng.below(candidates.size())];
      const Point y = action(ball.element(gi), x);
      if (!reach.contains(y))
        continue;
      record(ball.element(gi), x, euclidean(p(x), p(y)), ball.norm(gi));
      ++result.spot_checks;
    }
  }
  return result;
}

Prop2Result prop2_crosscheck(const CayleyBall &ball, const Action &action, const PointMap &p,
                             const std::vector<Point> &points, const DomainTest &domain,
                             int samples, std::uint64_t seed) {
  Prop2Result result;
  const MarkedGroup &group = ball.group();
  const PointSet reach = generator_closure(ball, action, points, domain);
  auto test = [&](int g1, int g2, const Point &x) {
    const Element diff = group.multiply(group.inverse(ball.element(g1)), ball.element(g2));
    const auto d = ball.index_of(diff);
    if (!d)
      return;
    const Point a = action(group.inverse(ball.element(g1)), x);
    const Point b = action(group.inverse(ball.element(g2)), x);
    if (!reach.contains(a) || !reach.contains(b))
      return;
    const double excess = euclidean(p(a), p(b)) - ball.norm(*d);
    ++result.checks;
    if (excess > std::max(1, ball.norm(*d)) * kDisplacementSlack) {
      if (result.pass || excess > result.worst_excess) {
        result.worst_excess = excess;
        result.gamma1 = ball.element(g1);
        result.gamma2 = ball.element(g2);
        result.x = x;
      }
      result.pass = false;
    }
  };

  std::vector<int> unit, half;
  for (int i = 0; i < ball.size(); ++i) {
    if (ball.norm(i) <= 1)
      unit.push_back(i);
    if (2 * ball.norm(i) <= ball.radius())
      half.push_back(i);
  }
  for (const Point &x : points)
    for (int g1 : unit)
      for (int g2 : unit)
        if (g1 != g2)
          test(g1, g2, x);
  if (!points.empty()) {
    Rng rng(seed ^ 0x9e37);
    for (int k = 0; k < samples; ++k) {
      const Point &x = points[rng.below(points.size())];
      test(half[rng.below(half.size())], half[rng.below(half.size())], x);
    }
  }
  result.displacement_pass =
      displacement_check(ball, action, p, points, domain, samples, seed).pass;
  result.agree = result.pass == result.displacement_pass;
  return result;
}

double gamma_variation(const CayleyBall &ball, const Action &action, const ScalarMap &f, int r,
                       const Point &x) {
  if (r < 0 || r > ball.radius())
    throw std::out_of_range("gamma_variation: R exceeds the enumerated radius");
  const double fx = f(x);
  double worst = 0.0;
  for (int i = 0; i < ball.size(); ++i)
    if (ball.norm(i) <= r)
      worst = std::max(worst, std::abs(fx - f(action(ball.element(i), x))));
  return worst;
}

double ball_variation(const std::vector<Point> &points,
                      const std::function<double(const Point &, const Point &)> &distance,
                      const ScalarMap &f, double r, const Point &x) {
  const double fx = f(x);
  double worst = 0.0;
  for (const Point &y : points)
    if (distance(x, y) <= r)
      worst = std::max(worst, std::abs(fx - f(y)));
  return worst;
}

namespace {

double angular_distance(double a, double b) {
  double d = std::fmod(std::abs(a - b), 2.0 * std::numbers::pi);
  return d > std::numbers::pi ? 2.0 * std::numbers::pi - d : d;
}

double wrap_to_pi(double a) {
  while (a > std::numbers::pi)
    a -= 2.0 * std::numbers::pi;
  while (a <= -std::numbers::pi)
    a += 2.0 * std::numbers::pi;
  return a;
}

const Lattice2 kUnitSteps[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};

} // namespace

double RadialMap::f(double t) const {
  if (t <= r0)
    return 0.0;
  const int hi = static_cast<int>(std::ceil(t));
  if (hi >= static_cast<int>(profile.size()))
    return profile.back();
  const double lo_t = std::max(static_cast<double>(hi - 1), r0);
  const double lo_f = (hi - 1 <= r0) ? 0.0 : profile[hi - 1];
  return lo_f + (profile[hi] - lo_f) * (t - lo_t) / (hi - lo_t);
}

std::array<double, 2> RadialMap::operator()(const Lattice2 &x) const {
  auto i = ball.index_of(x);
  if (!i)
    throw std::out_of_range("radial map: point outside the domain");
  return values[*i];
}

RadialMap radial_map_build(int domain_radius, double r0, double epsilon,
                           const DirectionMap &phi_in) {
  if (!(r0 >= 2.0))
    throw std::invalid_argument("radial_map_build: r0 must be at least 2");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("radial_map_build: epsilon must lie in (0, 1)");
  if (domain_radius <= r0)
    throw std::invalid_argument("radial_map_build: domain too small to contain r0");

  const DirectionMap phi = phi_in ? phi_in : [](const Lattice2 &x) {
    return std::atan2(static_cast<double>(x[1]), static_cast<double>(x[0]));
  };

  RadialMap map;
  map.domain_radius = domain_radius;
  map.r0 = r0;
  map.epsilon = epsilon;
  map.ball = GridBall(domain_radius);
  const GridBall &ball = map.ball;

  std::vector<double> local(domain_radius + 1, 0.0);
  for (const Lattice2 &x : ball.points()) {
    if (x[0] == 0 && x[1] == 0)
      continue;
    for (const Lattice2 &s : kUnitSteps) {
      const Lattice2 y{x[0] + s[0], x[1] + s[1]};
      if (!ball.contains(y) || (y[0] == 0 && y[1] == 0))
        continue;
      const auto k = l1_norm(x);
      local[k] = std::max(local[k], angular_distance(phi(x), phi(y)));
    }
  }
  map.nu.assign(domain_radius + 1, 0.0);
  double suffix = 0.0;
  for (int t = domain_radius; t >= 0; --t) {
    suffix = std::max(suffix, local[t]);
    map.nu[t] = suffix;
  }

  map.profile.assign(domain_radius + 1, 0.0);
  double prev_t = r0, prev_f = 0.0;
  for (int t = 0; t <= domain_radius; ++t) {
    if (t <= r0)
      continue;
    const double cap = map.nu[t] > 0.0 ? 1.0 / map.nu[t] : std::numeric_limits<double>::infinity();
    map.profile[t] = std::min(prev_f + (1.0 - epsilon) * (t - prev_t), cap);
    prev_t = t;
    prev_f = map.profile[t];
  }

  map.values.resize(ball.size());
  for (int i = 0; i < ball.size(); ++i) {
    const Lattice2 &x = ball.point(i);
    const double radius = 0.5 * map.profile[l1_norm(x)];
    if (radius == 0.0) {
      map.values[i] = {0.0, 0.0};
      continue;
    }
    const double angle = phi(x);
    map.values[i] = {radius * std::cos(angle), radius * std::sin(angle)};
  }

  for (int i = 0; i < ball.size(); ++i) {
    const Lattice2 &x = ball.point(i);
    if (l1_norm(x) >= domain_radius)
      continue;
    ++map.interior_points;
    for (const Lattice2 &s : kUnitSteps) {
      const auto &a = map.values[i];
      const auto &b = map.values[*ball.index_of({x[0] + s[0], x[1] + s[1]})];
      map.max_generator_displacement =
          std::max(map.max_generator_displacement, std::hypot(a[0] - b[0], a[1] - b[1]));
    }
  }

  // Boundary cycle |x|_1 = R, counter-clockwise from (R, 0).
  const std::int64_t r = domain_radius;
  std::vector<Lattice2> cycle;
  for (std::int64_t i = 0; i < r; ++i)
    cycle.push_back({r - i, i});
  for (std::int64_t i = 0; i < r; ++i)
    cycle.push_back({-i, r - i});
  for (std::int64_t i = 0; i < r; ++i)
    cycle.push_back({-r + i, -i});
  for (std::int64_t i = 0; i < r; ++i)
    cycle.push_back({i, -r + i});
  double total = 0.0;
  for (std::size_t k = 0; k < cycle.size(); ++k) {
    const auto a = map(cycle[k]);
    const auto b = map(cycle[(k + 1) % cycle.size()]);
    if ((a[0] == 0 && a[1] == 0) || (b[0] == 0 && b[1] == 0))
      throw std::logic_error("radial_map_build: p vanishes on the boundary cycle");
    total += wrap_to_pi(std::atan2(b[1], b[0]) - std::atan2(a[1], a[0]));
  }
  map.winding_number = static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
  return map;
}

std::string norm_table_csv(const CayleyBall &ball) {
  std::ostringstream os;
  os << "element_id,word_norm\n";
  for (int i = 0; i < ball.size(); ++i)
    os << i << ',' << ball.norm(i) << '\n';
  return os.str();
}

} // namespace coarse
