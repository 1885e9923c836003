#include "iset/padic.hpp"

#include <algorithm>
#include <limits>

#include "iset/errors.hpp"

namespace iset {

void require_prime(std::uint64_t p) {
  if (p > std::numeric_limits<Digit>::max()) throw DomainError("prime " + std::to_string(p) + " exceeds 2^32");
  if (!is_prime(p)) throw DomainError(std::to_string(p) + " is not prime");
}

namespace {

void require_same_prime(std::uint64_t p, std::uint64_t q) {
  if (p != q) throw DomainError("mismatched primes " + std::to_string(p) + " and " + std::to_string(q));
}

Integer int_pow(std::uint64_t p, unsigned k) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), p, k);
  return r;
}

// Digits of a residue r in [0, p^K).
std::vector<Digit> residue_digits(Integer r, std::uint64_t p, unsigned K) {
  std::vector<Digit> digits(K, 0);
  for (unsigned k = 0; k < K && r != 0; ++k) {
    digits[k] = static_cast<Digit>(mpz_fdiv_q_ui(r.get_mpz_t(), r.get_mpz_t(), p));
  }
  return digits;
}

// x + y modulo p^K over the first K digits of each.
std::vector<Digit> add_digits(std::span<const Digit> x, std::span<const Digit> y, std::uint64_t p, unsigned K) {
  std::vector<Digit> out(K);
  std::uint64_t carry = 0;
  for (unsigned k = 0; k < K; ++k) {
    std::uint64_t t = std::uint64_t{x[k]} + y[k] + carry;
    carry = t >= p ? 1 : 0;
    out[k] = static_cast<Digit>(t - carry * p);
  }
  return out;
}

std::vector<Digit> negate_digits(std::span<const Digit> x, std::uint64_t p) {
  std::vector<Digit> out(x.size(), 0);
  std::size_t k = 0;
  while (k < x.size() && x[k] == 0) ++k;
  if (k == x.size()) return out;
  out[k] = static_cast<Digit>(p - x[k]);
  for (++k; k < x.size(); ++k) out[k] = static_cast<Digit>(p - 1 - x[k]);
  return out;
}

std::vector<Digit> mul_digits(std::span<const Digit> x, std::span<const Digit> y, std::uint64_t p, unsigned K) {
  std::vector<Digit> out(K, 0);
  for (unsigned i = 0; i < K; ++i) {
    if (x[i] == 0) continue;
    std::uint64_t carry = 0;
    for (unsigned j = 0; i + j < K; ++j) {
      // < (p-1) + (p-1)^2 + p <= p^2 < 2^64
      std::uint64_t t = std::uint64_t{out[i + j]} + std::uint64_t{x[i]} * y[j] + carry;
      out[i + j] = static_cast<Digit>(t % p);
      carry = t / p;
    }
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- PAdicInteger

PAdicInteger::PAdicInteger(std::uint64_t prime, std::vector<Digit> digits) : prime_(prime), digits_(std::move(digits)) {
  require_prime(prime_);
  if (digits_.empty()) throw DomainError("p-adic precision must be positive");
  for (Digit d : digits_) {
    if (d >= prime_) throw DomainError("digit " + std::to_string(d) + " out of range for p = " + std::to_string(prime_));
  }
}

PAdicInteger PAdicInteger::from_integer(const Integer& z, std::uint64_t prime, unsigned precision) {
  require_prime(prime);
  if (precision == 0) throw DomainError("p-adic precision must be positive");
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), z.get_mpz_t(), int_pow(prime, precision).get_mpz_t());
  return PAdicInteger(prime, residue_digits(r, prime, precision), true);
}

bool PAdicInteger::is_zero() const {
  return std::all_of(digits_.begin(), digits_.end(), [](Digit d) { return d == 0; });
}

unsigned PAdicInteger::leading_zeros() const {
  auto it = std::find_if(digits_.begin(), digits_.end(), [](Digit d) { return d != 0; });
  return static_cast<unsigned>(it - digits_.begin());
}

Integer PAdicInteger::residue() const {
  Integer r = 0;
  for (auto it = digits_.rbegin(); it != digits_.rend(); ++it) {
    r *= static_cast<unsigned long>(prime_);
    r += static_cast<unsigned long>(*it);
  }
  return r;
}

PAdicInteger PAdicInteger::truncated(unsigned k) const {
  if (k == 0 || k > precision()) throw DomainError("cannot truncate to " + std::to_string(k) + " digits");
  return PAdicInteger(prime_, std::vector<Digit>(digits_.begin(), digits_.begin() + k), true);
}

PAdicInteger operator+(const PAdicInteger& x, const PAdicInteger& y) {
  require_same_prime(x.prime_, y.prime_);
  const unsigned K = std::min(x.precision(), y.precision());
  return PAdicInteger(x.prime_, add_digits(x.digits_, y.digits_, x.prime_, K), true);
}

PAdicInteger operator-(const PAdicInteger& x) {
  return PAdicInteger(x.prime_, negate_digits(x.digits_, x.prime_), true);
}

PAdicInteger operator-(const PAdicInteger& x, const PAdicInteger& y) { return x + (-y); }

PAdicInteger operator*(const PAdicInteger& x, const PAdicInteger& y) {
  require_same_prime(x.prime_, y.prime_);
  const unsigned K = std::min(x.precision(), y.precision());
  return PAdicInteger(x.prime_, mul_digits(x.digits_, y.digits_, x.prime_, K), true);
}

// --------------------------------------------------------------- PAdicRational

PAdicRational PAdicRational::zero(std::uint64_t prime) {
  require_prime(prime);
  return PAdicRational(prime);
}

PAdicRational::PAdicRational(std::int64_t valuation, PAdicInteger unit)
    : prime_(unit.prime()), valuation_(valuation), unit_(std::move(unit)) {
  if (unit_->digit(0) == 0) throw DomainError("p-adic unit must have a nonzero first digit");
}

std::int64_t PAdicRational::valuation() const {
  if (is_zero()) throw DomainError("zero has no valuation");
  return valuation_;
}

const PAdicInteger& PAdicRational::unit() const {
  if (is_zero()) throw DomainError("zero has no unit part");
  return *unit_;
}

PAdicInteger PAdicRational::to_integer(unsigned k) const {
  if (k == 0) throw DomainError("p-adic precision must be positive");
  if (is_zero()) return PAdicInteger(prime_, std::vector<Digit>(k, 0), true);
  if (valuation_ < 0) throw DomainError("value with negative valuation is not a p-adic integer");
  const auto known = static_cast<std::uint64_t>(valuation_) + unit_->precision();
  if (k > known) {
    throw DomainError("only " + std::to_string(known) + " digits are known, " + std::to_string(k) + " requested");
  }
  std::vector<Digit> digits(k, 0);
  for (unsigned i = static_cast<unsigned>(valuation_); i < k; ++i) digits[i] = unit_->digit(i - static_cast<unsigned>(valuation_));
  return PAdicInteger(prime_, std::move(digits), true);
}

Rational PAdicRational::approximant() const {
  if (is_zero()) return 0;
  Rational r(unit_->residue());
  Integer scale = int_pow(prime_, static_cast<unsigned>(valuation_ < 0 ? -valuation_ : valuation_));
  if (valuation_ >= 0) {
    r *= scale;
  } else {
    r /= scale;
  }
  r.canonicalize();
  return r;
}

PAdicRational operator+(const PAdicRational& x, const PAdicRational& y) {
  require_same_prime(x.prime_, y.prime_);
  if (x.is_zero()) return y;
  if (y.is_zero()) return x;
  const std::int64_t vmin = std::min(x.valuation_, y.valuation_);
  const std::int64_t absolute = std::min(x.valuation_ + x.precision(), y.valuation_ + y.precision());
  const auto width = static_cast<unsigned>(absolute - vmin);

  // Both operands as digit strings relative to p^vmin, `width` digits each.
  auto aligned = [&](const PAdicRational& z) {
    std::vector<Digit> d(width, 0);
    const auto shift = static_cast<unsigned>(z.valuation_ - vmin);
    for (unsigned k = shift; k < width; ++k) d[k] = z.unit_->digit(k - shift);
    return d;
  };
  std::vector<Digit> sum = add_digits(aligned(x), aligned(y), x.prime_, width);

  auto first = std::find_if(sum.begin(), sum.end(), [](Digit d) { return d != 0; });
  if (first == sum.end()) return PAdicRational(x.prime_);
  const auto shift = first - sum.begin();
  return PAdicRational(vmin + shift, PAdicInteger(x.prime_, std::vector<Digit>(first, sum.end()), true));
}

PAdicRational operator-(const PAdicRational& x) {
  if (x.is_zero()) return x;
  return PAdicRational(x.valuation_, -*x.unit_);
}

PAdicRational operator-(const PAdicRational& x, const PAdicRational& y) { return x + (-y); }

PAdicRational operator*(const PAdicRational& x, const PAdicRational& y) {
  require_same_prime(x.prime_, y.prime_);
  if (x.is_zero() || y.is_zero()) return PAdicRational(x.prime_);
  // A product of units is a unit because p is prime.
  return PAdicRational(x.valuation_ + y.valuation_, *x.unit_ * *y.unit_);
}

// ------------------------------------------------------------------- PAdicNorm

Rational PAdicNorm::value() const {
  if (is_zero) return 0;
  Integer scale = int_pow(prime, static_cast<unsigned>(exponent < 0 ? -exponent : exponent));
  return exponent >= 0 ? make_rational(1, scale) : Rational(scale);
}

std::string PAdicNorm::to_string() const { return iset::to_string(value()); }

std::strong_ordering operator<=>(const PAdicNorm& a, const PAdicNorm& b) {
  if (a.is_zero || b.is_zero) return b.is_zero <=> a.is_zero;
  return b.exponent <=> a.exponent;
}

// ------------------------------------------------------------------ operations

PAdicRational embed_rational(const Integer& numerator, const Integer& denominator, std::uint64_t p, unsigned K) {
  if (denominator == 0) throw DomainError("zero denominator");
  require_prime(p);
  if (K == 0) throw DomainError("p-adic precision must be positive");
  if (numerator == 0) return PAdicRational::zero(p);

  Integer a = numerator;
  Integer b = denominator;
  const auto va = static_cast<std::int64_t>(valuation(a, p));
  const auto vb = static_cast<std::int64_t>(valuation(b, p));
  a /= int_pow(p, static_cast<unsigned>(va));
  b /= int_pow(p, static_cast<unsigned>(vb));

  const Integer modulus = int_pow(p, K);
  Integer inverse;
  Integer b_mod;
  mpz_fdiv_r(b_mod.get_mpz_t(), b.get_mpz_t(), modulus.get_mpz_t());
  mpz_invert(inverse.get_mpz_t(), b_mod.get_mpz_t(), modulus.get_mpz_t());
  Integer u = a * inverse;
  mpz_fdiv_r(u.get_mpz_t(), u.get_mpz_t(), modulus.get_mpz_t());
  return PAdicRational(va - vb, PAdicInteger::from_integer(u, p, K));
}

PAdicRational embed_rational(const Rational& q, std::uint64_t p, unsigned K) {
  return embed_rational(q.get_num(), q.get_den(), p, K);
}

PAdicNorm padic_norm(const PAdicRational& x) {
  if (x.is_zero()) return PAdicNorm::zero(x.prime());
  return PAdicNorm::power(x.prime(), x.valuation());
}

PAdicNorm padic_norm(const Rational& q, std::uint64_t p) {
  require_prime(p);
  if (q == 0) return PAdicNorm::zero(p);
  return PAdicNorm::power(p, static_cast<std::int64_t>(valuation(q.get_num(), p)) -
                                 static_cast<std::int64_t>(valuation(q.get_den(), p)));
}

PAdicRational padic_add(const PAdicRational& x, const PAdicRational& y) { return x + y; }
PAdicRational padic_mul(const PAdicRational& x, const PAdicRational& y) { return x * y; }
PAdicNorm padic_distance(const PAdicRational& x, const PAdicRational& y) { return padic_norm(x - y); }

}  // namespace iset
