#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace mlsq {

// Exponent arithmetic for strength laws and squeezing paths. Pencil
// membership is a boundary condition: whether e_i equals sigma*e_j decides
// which limits are finite, so equality tests must not be at the mercy of
// floating point rounding. Exponents parsed from integers, finite decimals
// or "a/b" literals compare exactly; anything else falls back to a 1e-12
// relative tolerance.
class Ratio {
 public:
  Ratio() = default;
  Ratio(std::int64_t n, std::int64_t d) { assign(n, d); }
  Ratio(int n) { assign(n, 1); }  // NOLINT: implicit by design

  static Ratio approx(double v) {
    Ratio r;
    r.exact_ = false;
    r.value_ = v;
    return r;
  }

  // Recovers small-denominator rationals (continued fractions); keeps the
  // value approximate when none matches to 1e-12 relative.
  static Ratio from_double(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("Ratio: non-finite value");
    std::int64_t best_n = 0, best_d = 1;
    double x = v;
    std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    for (int it = 0; it < 40; ++it) {
      double fl = std::floor(x);
      if (fl > 9e17 || fl < -9e17) break;
      auto a = static_cast<std::int64_t>(fl);
      std::int64_t p2 = a * p1 + p0;
      std::int64_t q2 = a * q1 + q0;
      if (q2 > 1000000) break;
      p0 = p1; q0 = q1; p1 = p2; q1 = q2;
      best_n = p1; best_d = q1;
      double rec = static_cast<double>(p1) / static_cast<double>(q1);
      if (std::abs(rec - v) <= 1e-13 * std::max(1.0, std::abs(v))) {
        return Ratio(best_n, best_d);
      }
      double frac = x - fl;
      if (frac < 1e-15) break;
      x = 1.0 / frac;
    }
    return approx(v);
  }

  bool exact() const { return exact_; }
  double value() const { return value_; }
  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  Ratio operator+(const Ratio& o) const {
    if (exact_ && o.exact_ && small() && o.small()) {
      return Ratio(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
    }
    return approx(value_ + o.value_);
  }

  Ratio operator-(const Ratio& o) const {
    if (exact_ && o.exact_ && small() && o.small()) {
      return Ratio(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
    }
    return approx(value_ - o.value_);
  }

  Ratio operator*(const Ratio& o) const {
    if (exact_ && o.exact_ && small() && o.small()) return Ratio(num_ * o.num_, den_ * o.den_);
    return approx(value_ * o.value_);
  }

  Ratio operator/(const Ratio& o) const {
    if (o.is_zero()) throw std::domain_error("Ratio: division by zero");
    if (exact_ && o.exact_ && small() && o.small()) return Ratio(num_ * o.den_, den_ * o.num_);
    return approx(value_ / o.value_);
  }

  bool operator==(const Ratio& o) const {
    if (exact_ && o.exact_) return num_ == o.num_ && den_ == o.den_;
    return std::abs(value_ - o.value_) <=
           1e-12 * std::max({1.0, std::abs(value_), std::abs(o.value_)});
  }
  bool operator!=(const Ratio& o) const { return !(*this == o); }
  bool operator<(const Ratio& o) const {
    if (*this == o) return false;
    if (exact_ && o.exact_) {
      return static_cast<__int128>(num_) * o.den_ < static_cast<__int128>(o.num_) * den_;
    }
    return value_ < o.value_;
  }
  bool operator>(const Ratio& o) const { return o < *this; }
  bool operator<=(const Ratio& o) const { return !(o < *this); }
  bool operator>=(const Ratio& o) const { return !(*this < o); }

  bool is_zero() const { return exact_ ? num_ == 0 : std::abs(value_) <= 1e-300; }

  std::string str() const {
    if (!exact_) return std::to_string(value_);
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

 private:
  void assign(std::int64_t n, std::int64_t d) {
    if (d == 0) throw std::domain_error("Ratio: zero denominator");
    if (d < 0) { n = -n; d = -d; }
    std::int64_t g = std::gcd(n < 0 ? -n : n, d);
    if (g > 1) { n /= g; d /= g; }
    num_ = n;
    den_ = d;
    exact_ = true;
    value_ = static_cast<double>(n) / static_cast<double>(d);
  }

  bool small() const { return std::abs(num_) < (1ll << 30) && den_ < (1ll << 30); }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  bool exact_ = true;
  double value_ = 0.0;
};

}  // namespace mlsq
