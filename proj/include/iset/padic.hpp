#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "iset/rational.hpp"

namespace iset {

/// Digit of a p-adic expansion. Primes are limited to p < 2^32 so that a
/// digit product plus carry fits in 64 bits.
using Digit = std::uint32_t;

class PAdicRational;

/// Truncated p-adic integer a_0 + a_1 p + ... + a_{K-1} p^{K-1}, i.e. a
/// residue modulo p^K. Digits are stored least-significant first.
class PAdicInteger {
 public:
  /// Throws DomainError for composite p, p >= 2^32, K = 0 or a digit >= p.
  PAdicInteger(std::uint64_t prime, std::vector<Digit> digits);

  /// The residue of z (any sign) modulo p^K.
  static PAdicInteger from_integer(const Integer& z, std::uint64_t prime, unsigned precision);

  std::uint64_t prime() const { return prime_; }
  unsigned precision() const { return static_cast<unsigned>(digits_.size()); }
  std::span<const Digit> digits() const { return digits_; }
  Digit digit(unsigned k) const { return digits_.at(k); }

  bool is_zero() const;
  /// Index of the first nonzero digit, or precision() when all are zero.
  unsigned leading_zeros() const;
  /// Σ a_k p^k as an integer in [0, p^K).
  Integer residue() const;

  /// Keeps the first k digits.
  PAdicInteger truncated(unsigned k) const;

  // Results carry the smaller of the two precisions.
  friend PAdicInteger operator+(const PAdicInteger& x, const PAdicInteger& y);
  friend PAdicInteger operator-(const PAdicInteger& x, const PAdicInteger& y);
  friend PAdicInteger operator*(const PAdicInteger& x, const PAdicInteger& y);
  friend PAdicInteger operator-(const PAdicInteger& x);

  friend bool operator==(const PAdicInteger&, const PAdicInteger&) = default;

 private:
  PAdicInteger(std::uint64_t prime, std::vector<Digit> digits, bool /*trusted*/)
      : prime_(prime), digits_(std::move(digits)) {}

  std::uint64_t prime_;
  std::vector<Digit> digits_;

  friend class PAdicRational;
  friend PAdicRational operator+(const PAdicRational& x, const PAdicRational& y);
};

/// p^v * unit, with the unit's first digit nonzero, or exactly zero.
///
/// The unit's precision is the number of significant digits: the value is
/// known modulo p^(v + precision). Cancellation in a sum lowers the count of
/// significant digits rather than inventing padding digits; a difference
/// that vanishes to the available precision becomes zero.
class PAdicRational {
 public:
  static PAdicRational zero(std::uint64_t prime);
  /// Throws DomainError when the unit's first digit is 0.
  PAdicRational(std::int64_t valuation, PAdicInteger unit);

  std::uint64_t prime() const { return prime_; }
  bool is_zero() const { return !unit_.has_value(); }
  /// Throws DomainError for zero.
  std::int64_t valuation() const;
  const PAdicInteger& unit() const;
  /// Significant unit digits; 0 for zero.
  unsigned precision() const { return unit_ ? unit_->precision() : 0; }
  bool is_integer() const { return is_zero() || valuation() >= 0; }

  /// Digits of the value itself as a p-adic integer, modulo p^k. Throws
  /// DomainError for negative valuation or when fewer than k digits are known.
  PAdicInteger to_integer(unsigned k) const;

  /// Exact rational whose expansion matches this value's known digits:
  /// p^v * residue(unit).
  Rational approximant() const;

  friend PAdicRational operator+(const PAdicRational& x, const PAdicRational& y);
  friend PAdicRational operator-(const PAdicRational& x, const PAdicRational& y);
  friend PAdicRational operator*(const PAdicRational& x, const PAdicRational& y);
  friend PAdicRational operator-(const PAdicRational& x);

  friend bool operator==(const PAdicRational&, const PAdicRational&) = default;

 private:
  explicit PAdicRational(std::uint64_t prime) : prime_(prime) {}

  std::uint64_t prime_;
  std::int64_t valuation_ = 0;
  std::optional<PAdicInteger> unit_;
};

/// |x|_p = p^-exponent, or zero. Never stored as a floating value.
struct PAdicNorm {
  std::uint64_t prime = 2;
  bool is_zero = true;
  std::int64_t exponent = 0;

  static PAdicNorm zero(std::uint64_t p) { return {p, true, 0}; }
  static PAdicNorm power(std::uint64_t p, std::int64_t e) { return {p, false, e}; }

  Rational value() const;
  /// "0", "1/9", "3", ...
  std::string to_string() const;

  /// Orders by magnitude; both sides must share the prime.
  friend std::strong_ordering operator<=>(const PAdicNorm& a, const PAdicNorm& b);
  friend bool operator==(const PAdicNorm& a, const PAdicNorm& b) {
    return (a <=> b) == std::strong_ordering::equal;
  }
};

/// Expansion of numerator/denominator with K significant unit digits.
PAdicRational embed_rational(const Integer& numerator, const Integer& denominator, std::uint64_t p, unsigned K);
PAdicRational embed_rational(const Rational& q, std::uint64_t p, unsigned K);

PAdicNorm padic_norm(const PAdicRational& x);
PAdicNorm padic_norm(const Rational& q, std::uint64_t p);

PAdicRational padic_add(const PAdicRational& x, const PAdicRational& y);
PAdicRational padic_mul(const PAdicRational& x, const PAdicRational& y);
PAdicNorm padic_distance(const PAdicRational& x, const PAdicRational& y);

void require_prime(std::uint64_t p);

}  // namespace iset
