#include "iset/cantor.hpp"

#include <ostream>

#include "iset/errors.hpp"

namespace iset {

namespace {

void require_base(std::uint64_t p) {
  if (p < 2) throw DomainError("Cantor construction needs p >= 2");
}

Integer power(std::uint64_t base, unsigned k) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, k);
  return r;
}

std::uint64_t interval_count(std::uint64_t p, unsigned k, std::uint64_t max_intervals) {
  std::uint64_t count = 1;
  for (unsigned i = 0; i < k; ++i) {
    if (count > max_intervals / p) {
      throw ResourceError("C_" + std::to_string(k) + "(" + std::to_string(p) + ") has more than " +
                              std::to_string(max_intervals) + " intervals",
                          0);
    }
    count *= p;
  }
  return count;
}

}  // namespace

std::vector<ClosedInterval> construct_iterate(std::uint64_t p, unsigned k, std::uint64_t max_intervals) {
  require_base(p);
  const std::uint64_t count = interval_count(p, k, max_intervals);
  std::vector<ClosedInterval> level{{Rational(0), Rational(1)}};
  level.reserve(count);
  const auto pieces = static_cast<unsigned long>(2 * p - 1);
  for (unsigned depth = 0; depth < k; ++depth) {
    std::vector<ClosedInterval> next;
    next.reserve(level.size() * p);
    for (const auto& iv : level) {
      Rational step = (iv.hi - iv.lo) / pieces;
      for (std::uint64_t a = 0; a < p; ++a) {
        Rational lo = iv.lo + step * static_cast<unsigned long>(2 * a);
        Rational hi = lo + step;
        next.push_back({std::move(lo), std::move(hi)});
      }
    }
    level = std::move(next);
  }
  return level;
}

void write_iterate_csv(std::ostream& out, std::uint64_t p, unsigned k, unsigned from_level, std::uint64_t max_intervals) {
  out << "level,interval_index,lo_num,lo_den,hi_num,hi_den\n";
  for (unsigned level = from_level; level <= k; ++level) {
    auto intervals = construct_iterate(p, level, max_intervals);
    for (std::size_t i = 0; i < intervals.size(); ++i) {
      const auto& iv = intervals[i];
      out << level << ',' << i << ',' << to_string(iv.lo.get_num()) << ',' << to_string(iv.lo.get_den()) << ','
          << to_string(iv.hi.get_num()) << ',' << to_string(iv.hi.get_den()) << '\n';
    }
  }
}

CantorPoint::CantorPoint(std::uint64_t p, std::vector<Digit> address) : p_(p), address_(std::move(address)) {
  require_base(p);
  Integer num = 0;
  Integer den = 1;
  // Σ 2 a_k / (2p-1)^(k+1) over the common denominator (2p-1)^K.
  const auto pieces = static_cast<unsigned long>(2 * p - 1);
  for (Digit a : address_) {
    if (a >= p) throw DomainError("address digit " + std::to_string(a) + " out of range for p = " + std::to_string(p));
    den *= pieces;
    num = num * pieces + 2 * static_cast<unsigned long>(a);
  }
  coordinate_ = make_rational(num, den);
}

CantorPoint cantor_encode(const PAdicInteger& x) {
  return CantorPoint(x.prime(), std::vector<Digit>(x.digits().begin(), x.digits().end()));
}

CantorPoint cantor_encode(const PAdicRational& x, unsigned K) {
  if (!x.is_integer()) throw DomainError("only p-adic integers map onto the set (negative valuation)");
  return cantor_encode(x.to_integer(K));
}

Membership cantor_membership(const Rational& q, std::uint64_t p, unsigned depth) {
  require_base(p);
  if (q < 0 || q > 1) throw DomainError("membership query outside [0, 1]");
  const auto pieces = static_cast<unsigned long>(2 * p - 1);
  Rational r = q;
  for (unsigned j = 1; j <= depth; ++j) {
    Rational scaled = r * pieces;
    Integer position = floor(scaled);
    Rational frac = scaled - position;
    if (position == pieces) {
      // r = 1: right endpoint of the last kept piece
      position = pieces - 1;
      frac = 1;
    } else if (mpz_odd_p(position.get_mpz_t())) {
      if (frac != 0) return Membership{j};
      // Left boundary of a removed gap is the right end of the kept piece before it.
      position -= 1;
      frac = 1;
    }
    r = frac;
  }
  return Membership{};
}

PAdicNorm cantor_distance(const CantorPoint& y1, const CantorPoint& y2) {
  if (y1.p() != y2.p()) throw DomainError("points of different Cantor sets");
  require_prime(y1.p());
  const unsigned K = std::min(y1.depth(), y2.depth());
  if (K == 0) throw DomainError("distance needs at least one address digit");
  auto preimage = [K](const CantorPoint& y) {
    PAdicInteger x(y.p(), std::vector<Digit>(y.address().begin(), y.address().begin() + K));
    if (x.is_zero()) return PAdicRational::zero(y.p());
    const unsigned v = x.leading_zeros();
    std::vector<Digit> unit(x.digits().begin() + v, x.digits().end());
    return PAdicRational(v, PAdicInteger(y.p(), std::move(unit)));
  };
  return padic_distance(preimage(y1), preimage(y2));
}

Rational euclidean_distance(const CantorPoint& y1, const CantorPoint& y2) {
  return abs(Rational(y1.coordinate() - y2.coordinate()));
}

PerturbationClass classify_perturbation(const PAdicRational& x, const Rational& delta, std::uint64_t p, unsigned K) {
  require_prime(p);
  if (x.prime() != p) throw DomainError("preimage prime does not match p");
  PAdicNorm magnitude = padic_norm(delta, p);
  const bool constrained = magnitude.is_zero || magnitude.exponent >= 0;
  if (!constrained) return {PerturbationKind::GeometricallyUnconstrained, magnitude, std::nullopt};
  std::optional<CantorPoint> image;
  if (x.is_integer()) image = cantor_encode(x + embed_rational(delta, p, K), K);
  return {PerturbationKind::GeometricallyConstrained, magnitude, std::move(image)};
}

Rational gap_offset(std::uint64_t p, unsigned depth, unsigned m) {
  require_base(p);
  if (m == 0) throw DomainError("gap offset exponent must be positive");
  Rational offset = make_rational(power(p, m) + 1, power(p, m));
  offset /= power(2 * p - 1, depth + 1);
  offset.canonicalize();
  return offset;
}

Interval hausdorff_dimension(std::uint64_t p, mpfr_prec_t bits) {
  require_base(p);
  return Interval::log_of(Integer(static_cast<unsigned long>(p)), bits) /
         Interval::log_of(Integer(static_cast<unsigned long>(2 * p - 1)), bits);
}

Interval hausdorff_dimension_fermat_form(unsigned N, mpfr_prec_t bits) {
  if (N == 0) throw DomainError("N must be positive");
  Integer kept = power(2, N);
  Integer total = power(2, N + 1) - 1;
  return Interval::log_of(kept, bits) / Interval::log_of(total, bits);
}

}  // namespace iset
