#pragma once

#include <cstdint>
#include <compare>
#include <numeric>
#include <string>

#include "hidisc/error.hpp"

namespace hidisc {

/// Exact fraction with positive denominator, always in lowest terms.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1) {
    if (den == 0) fail(ErrorCode::InvalidArgument, "zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    num_ = g ? num / g : 0;
    den_ = g ? den / g : 1;
  }

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }

  double to_double() const noexcept {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }
  Rational abs() const { return Rational(num_ < 0 ? -num_ : num_, den_); }
  std::string str() const {
    return den_ == 1 ? std::to_string(num_)
                     : std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend Rational operator-(const Rational& a) { return Rational(-a.num_, a.den_); }
  friend Rational operator+(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

  friend bool operator==(const Rational& a, const Rational& b) noexcept {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept {
    const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    return lhs <=> rhs;
  }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// r >= x, with x a caller-facing decimal threshold. The tolerance only
/// absorbs the rounding of x itself (e.g. 0.1 or 1.89 have no exact binary form),
/// so it is relative: tiny thresholds stay strict.
inline bool at_least(const Rational& r, double x) noexcept {
  const long double lhs = static_cast<long double>(r.num());
  const long double rhs = static_cast<long double>(x) * static_cast<long double>(r.den());
  return lhs >= rhs - 1e-9L * (rhs < 0 ? -rhs : rhs);
}

inline bool at_most(const Rational& r, double x) noexcept {
  const long double lhs = static_cast<long double>(r.num());
  const long double rhs = static_cast<long double>(x) * static_cast<long double>(r.den());
  return lhs <= rhs + 1e-9L * (rhs < 0 ? -rhs : rhs);
}

}  // namespace hidisc
