#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "coarse/graphs.hpp"
#include "coarse/grid.hpp"

namespace coarse {

/// Canonical element encoding: an integer tuple for abelian groups, a
/// freely reduced word of signed generator labels (+-(i+1)) for free groups,
/// the four entries of a matrix reduced mod p for SL(2, p).
using Element = std::vector<std::int64_t>;

struct ElementHash {
  std::size_t operator()(const Element &e) const noexcept;
};

enum class GroupKind { free_abelian, free, cyclic_product, sl2_mod_p };

/// Finitely generated group with a fixed finite symmetric generating set
/// that excludes the identity.
class MarkedGroup {
public:
  static MarkedGroup free_abelian(int rank);
  static MarkedGroup free(int rank);
  static MarkedGroup cyclic_product(int n, int m);
  /// Generators [[1,1],[0,1]], [[1,0],[1,1]] and their inverses.
  static MarkedGroup sl2_mod_p(int p);

  GroupKind kind() const { return kind_; }
  bool finite() const { return kind_ == GroupKind::cyclic_product || kind_ == GroupKind::sl2_mod_p; }
  const std::vector<Element> &generators() const { return generators_; }

  Element identity() const;
  Element multiply(const Element &a, const Element &b) const;
  Element inverse(const Element &a) const;
  std::string format(const Element &a) const;

private:
  MarkedGroup(GroupKind kind, std::vector<std::int64_t> params);

  GroupKind kind_;
  std::vector<std::int64_t> params_;
  std::vector<Element> generators_;
};

inline constexpr std::size_t kDefaultBallCap = 2'000'000;

/// Elements of word norm <= radius, enumerated breadth-first from the
/// identity under right multiplication by generators.
class CayleyBall {
public:
  CayleyBall(MarkedGroup group, int radius, std::size_t cap = kDefaultBallCap);

  const MarkedGroup &group() const { return group_; }
  int radius() const { return radius_; }
  int size() const { return static_cast<int>(elements_.size()); }
  const std::vector<Element> &elements() const { return elements_; }
  const Element &element(int i) const { return elements_[i]; }
  int norm(int i) const { return norms_[i]; }

  std::optional<int> index_of(const Element &e) const;

  /// Index of element(i) * generator s, or -1 when it falls outside the ball.
  int neighbor(int i, int s) const { return adjacency_[static_cast<std::size_t>(i) * degree_ + s]; }

  /// Cayley graph restricted to the ball; for a finite group with radius at
  /// least the diameter this is the full Cayley graph.
  FiniteGraph graph() const;

private:
  MarkedGroup group_;
  int radius_;
  int degree_;
  std::vector<Element> elements_;
  std::vector<int> norms_;
  std::vector<int> adjacency_;
  std::unordered_map<Element, int, ElementHash> index_;
};

CayleyBall cayley_ball(const MarkedGroup &group, int radius, std::size_t cap = kDefaultBallCap);

/// Word norm of gamma; std::out_of_range outside the enumerated ball.
int word_norm(const CayleyBall &ball, const Element &gamma);

/// d_S(x, y) = |x^{-1} y|_S.
int word_distance(const CayleyBall &ball, const Element &x, const Element &y);

/// Points of a space the group acts on, as integer tuples.
using Point = std::vector<std::int64_t>;
using Action = std::function<Point(const Element &, const Point &)>;
using PointMap = std::function<std::vector<double>(const Point &)>;
using ScalarMap = std::function<double(const Point &)>;
using DomainTest = std::function<bool(const Point &)>;

/// Left translation of Z^k on itself, for free_abelian groups.
Action translation_action();

struct DisplacementWitness {
  Element gamma;
  Point x;
  double displacement = 0.0;
  int norm = 0;
};

struct DisplacementResult {
  bool pass = true;
  /// Pair maximising displacement - norm (the first one found on ties).
  DisplacementWitness worst;
  long generator_checks = 0;
  long spot_checks = 0;
};

inline constexpr double kDisplacementSlack = 1e-12;

/// Checks |p(x) - p(s x)| <= 1 for every generator s and tested point x, then
/// |p(x) - p(gamma x)| <= |gamma| on `spot_samples` random (gamma, x) with
/// |gamma| >= 2. Spot checks whose gamma x lies more than one generator step
/// from the tested points are skipped. Throws std::out_of_range when a
/// tested point or generator move leaves `domain`.
DisplacementResult displacement_check(const CayleyBall &ball, const Action &action,
                                      const PointMap &p, const std::vector<Point> &points,
                                      const DomainTest &domain = {}, int spot_samples = 1000,
                                      std::uint64_t seed = 1);

struct Prop2Result {
  bool pass = true;              ///< orbit maps gamma -> p(gamma^{-1} x) are 1-Lipschitz
  bool displacement_pass = true; ///< verdict of displacement_check on the same data
  bool agree = true;
  long checks = 0;
  Element gamma1, gamma2;
  Point x;
  double worst_excess = 0.0;
};

/// Tests |p(g1^{-1} x) - p(g2^{-1} x)| <= d_S(g1, g2) for every tested x over
/// all pairs in the radius-1 ball plus `samples` random pairs from the ball of
/// half the enumerated radius, and compares with displacement_check. Like the
/// spot checks there, triples are only evaluated where both orbit points lie
/// within one generator step of the tested points.
Prop2Result prop2_crosscheck(const CayleyBall &ball, const Action &action, const PointMap &p,
                             const std::vector<Point> &points, const DomainTest &domain = {},
                             int samples = 1000, std::uint64_t seed = 1);

/// max |f(x) - f(gamma x)| over gamma in the ball with |gamma| <= R.
double gamma_variation(const CayleyBall &ball, const Action &action, const ScalarMap &f, int r,
                       const Point &x);

/// max |f(x) - f(x')| over the given points x' with distance(x, x') <= R.
double ball_variation(const std::vector<Point> &points,
                      const std::function<double(const Point &, const Point &)> &distance,
                      const ScalarMap &f, double r, const Point &x);

/// Angle-valued direction map on Z^2 \ {0}.
using DirectionMap = std::function<double(const Lattice2 &)>;

struct RadialMap {
  int domain_radius = 0;
  double r0 = 0.0;
  double epsilon = 0.0;
  std::vector<double> nu;      ///< nu[t] for integer t in [0, domain_radius]
  std::vector<double> profile; ///< f(t) at integer t
  std::vector<std::array<double, 2>> values; ///< p at each GridBall point
  GridBall ball{0};
  double max_generator_displacement = 0.0;
  long interior_points = 0;
  int winding_number = 0;

  bool displacement_ok() const { return max_generator_displacement <= 1.0 + kDisplacementSlack; }
  /// p at a lattice point of the domain.
  std::array<double, 2> operator()(const Lattice2 &x) const;
  /// f interpolated linearly between integers.
  double f(double t) const;
};

/// Builds p(x) = (radius f(|x|)/2, angle phi(x)) on the l1 ball of the given
/// radius in Z^2, where |x| is the l1 word norm and f is the greedy
/// piecewise-linear profile with f = 0 up to r0, slope <= 1 - epsilon and
/// f(t) <= 1/nu(t). Default phi is the Euclidean direction of x.
RadialMap radial_map_build(int domain_radius, double r0, double epsilon,
                           const DirectionMap &phi = {});

/// Cayley ball export: "element_id,word_norm" rows.
std::string norm_table_csv(const CayleyBall &ball);

} // namespace coarse
