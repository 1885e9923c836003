#pragma once

#include <mpfr.h>

#include <string>

#include "iset/rational.hpp"

namespace iset {

/// Closed interval [lower, upper] with MPFR endpoints. Every operation
/// rounds outward, so the true real result is always enclosed.
class Interval {
 public:
  static constexpr mpfr_prec_t kDefaultBits = 128;

  explicit Interval(mpfr_prec_t bits = kDefaultBits);
  Interval(const Interval& other);
  Interval(Interval&& other) noexcept;
  Interval& operator=(const Interval& other);
  Interval& operator=(Interval&& other) noexcept;
  ~Interval();

  static Interval from_rational(const Rational& q, mpfr_prec_t bits = kDefaultBits);
  static Interval pi(mpfr_prec_t bits = kDefaultBits);
  /// Enclosure of cos(f*pi) for f in [0, 1].
  static Interval cos_pi(const Rational& f, mpfr_prec_t bits = kDefaultBits);
  /// Enclosure of log(n) for n >= 1.
  static Interval log_of(const Integer& n, mpfr_prec_t bits = kDefaultBits);

  mpfr_prec_t bits() const { return mpfr_get_prec(lo_); }

  double lower() const;  // rounded down
  double upper() const;  // rounded up
  double midpoint() const;
  Rational lower_exact() const;
  Rational upper_exact() const;
  double width() const;  // rounded up

  /// Midpoint with `digits` significant decimal digits.
  std::string midpoint_string(int digits = 20) const;

  bool contains(const Rational& q) const;
  /// True when some m / 2^level lies in the interval.
  bool contains_dyadic(unsigned long level) const;
  /// Every point is strictly greater than q.
  bool certainly_greater(const Rational& q) const;
  bool certainly_less(const Rational& q) const;

  friend Interval operator+(const Interval& a, const Interval& b);
  friend Interval operator-(const Interval& a, const Interval& b);
  friend Interval operator*(const Interval& a, const Interval& b);
  /// Throws DomainError when the divisor contains zero.
  friend Interval operator/(const Interval& a, const Interval& b);
  friend Interval operator-(const Interval& a);
  friend Interval sqrt(const Interval& a);
  friend Interval abs(const Interval& a);

 private:
  mpfr_t lo_;
  mpfr_t hi_;
};

}  // namespace iset
