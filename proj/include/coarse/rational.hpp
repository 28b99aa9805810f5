#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace coarse {

/// Exact nonnegative-denominator fraction, always stored in lowest terms.
class Rational {
public:
  Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1) : num_(num), den_(den) {
    if (den_ == 0)
      throw std::invalid_argument("Rational: zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    const std::int64_t g = std::gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  friend bool operator==(const Rational &a, const Rational &b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational &a, const Rational &b) {
    return static_cast<__int128>(a.num_) * b.den_ <=> static_cast<__int128>(b.num_) * a.den_;
  }
  friend std::ostream &operator<<(std::ostream &os, const Rational &r) {
    os << r.num_;
    if (r.den_ != 1)
      os << '/' << r.den_;
    return os;
  }

private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

} // namespace coarse
