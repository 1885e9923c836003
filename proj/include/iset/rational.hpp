#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace iset {

/// Exact rational number, always kept in canonical (reduced) form.
using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "a", "a/b", or a finite decimal such as "-0.70710678" into an
/// exact rational. Throws DomainError on malformed input or zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical fraction string: "0", "-3", "181/256".
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

Rational make_rational(const Integer& num, const Integer& den);

/// Exponent of p in z; z must be nonzero.
std::uint64_t valuation(const Integer& z, std::uint64_t p);

/// k when q's reduced denominator is exactly 2^k, otherwise nullopt.
std::optional<unsigned> dyadic_level(const Rational& q);

/// Square root when q is the square of a rational, otherwise nullopt.
std::optional<Rational> rational_sqrt(const Rational& q);

bool is_prime(std::uint64_t n);

Rational abs(const Rational& q);

/// floor(q) as an exact integer.
Integer floor(const Rational& q);

/// 2^k as a rational.
Rational pow2(long k);

}  // namespace iset
