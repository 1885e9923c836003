#include "iset/interval.hpp"

#include <algorithm>
#include <utility>

#include "iset/errors.hpp"

namespace iset {

Interval::Interval(mpfr_prec_t bits) {
  mpfr_init2(lo_, bits);
  mpfr_init2(hi_, bits);
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

Interval::Interval(const Interval& other) : Interval(other.bits()) {
  mpfr_set(lo_, other.lo_, MPFR_RNDD);
  mpfr_set(hi_, other.hi_, MPFR_RNDU);
}

Interval::Interval(Interval&& other) noexcept : Interval(other.bits()) {
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
}

Interval& Interval::operator=(const Interval& other) {
  if (this != &other) {
    mpfr_set_prec(lo_, other.bits());
    mpfr_set_prec(hi_, other.bits());
    mpfr_set(lo_, other.lo_, MPFR_RNDD);
    mpfr_set(hi_, other.hi_, MPFR_RNDU);
  }
  return *this;
}

Interval& Interval::operator=(Interval&& other) noexcept {
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
  return *this;
}

Interval::~Interval() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

Interval Interval::from_rational(const Rational& q, mpfr_prec_t bits) {
  Interval r(bits);
  mpfr_set_q(r.lo_, q.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(r.hi_, q.get_mpq_t(), MPFR_RNDU);
  return r;
}

Interval Interval::pi(mpfr_prec_t bits) {
  Interval r(bits);
  mpfr_const_pi(r.lo_, MPFR_RNDD);
  mpfr_const_pi(r.hi_, MPFR_RNDU);
  return r;
}

Interval Interval::cos_pi(const Rational& f, mpfr_prec_t bits) {
  if (f < 0 || f > 1) throw DomainError("cos_pi expects a fraction in [0, 1]");
  Interval r(bits);
  if (f == 0) {
    mpfr_set_si(r.lo_, 1, MPFR_RNDN);
    mpfr_set_si(r.hi_, 1, MPFR_RNDN);
    return r;
  }
  if (f == 1) {
    mpfr_set_si(r.lo_, -1, MPFR_RNDN);
    mpfr_set_si(r.hi_, -1, MPFR_RNDN);
    return r;
  }
  // Work with extra bits for the argument; cos is decreasing on [0, pi].
  const mpfr_prec_t work = bits + 32;
  Interval angle = pi(work);
  mpfr_mul_q(angle.lo_, angle.lo_, f.get_mpq_t(), MPFR_RNDD);
  mpfr_mul_q(angle.hi_, angle.hi_, f.get_mpq_t(), MPFR_RNDU);
  Interval pi_enc = pi(work);
  mpfr_cos(r.hi_, angle.lo_, MPFR_RNDU);
  if (mpfr_lessequal_p(angle.hi_, pi_enc.lo_)) {
    mpfr_cos(r.lo_, angle.hi_, MPFR_RNDD);
  } else {
    mpfr_set_si(r.lo_, -1, MPFR_RNDN);
  }
  if (mpfr_cmp_si(r.hi_, 1) > 0) mpfr_set_si(r.hi_, 1, MPFR_RNDN);
  return r;
}

Interval Interval::log_of(const Integer& n, mpfr_prec_t bits) {
  if (n < 1) throw DomainError("log_of expects n >= 1");
  Interval r(bits);
  mpfr_t x;
  mpfr_init2(x, std::max<mpfr_prec_t>(bits, static_cast<mpfr_prec_t>(mpz_sizeinbase(n.get_mpz_t(), 2)) + 1));
  mpfr_set_z(x, n.get_mpz_t(), MPFR_RNDN);  // exact: precision covers every bit of n
  mpfr_log(r.lo_, x, MPFR_RNDD);
  mpfr_log(r.hi_, x, MPFR_RNDU);
  mpfr_clear(x);
  return r;
}

double Interval::lower() const { return mpfr_get_d(lo_, MPFR_RNDD); }
double Interval::upper() const { return mpfr_get_d(hi_, MPFR_RNDU); }

Rational Interval::lower_exact() const {
  Rational q;
  mpfr_get_q(q.get_mpq_t(), lo_);
  return q;
}

Rational Interval::upper_exact() const {
  Rational q;
  mpfr_get_q(q.get_mpq_t(), hi_);
  return q;
}

double Interval::midpoint() const {
  mpfr_t m;
  mpfr_init2(m, bits() + 1);
  mpfr_add(m, lo_, hi_, MPFR_RNDN);
  mpfr_div_2ui(m, m, 1, MPFR_RNDN);
  double d = mpfr_get_d(m, MPFR_RNDN);
  mpfr_clear(m);
  return d;
}

double Interval::width() const {
  mpfr_t w;
  mpfr_init2(w, bits());
  mpfr_sub(w, hi_, lo_, MPFR_RNDU);
  double d = mpfr_get_d(w, MPFR_RNDU);
  mpfr_clear(w);
  return d;
}

std::string Interval::midpoint_string(int digits) const {
  mpfr_t m;
  mpfr_init2(m, bits() + 1);
  mpfr_add(m, lo_, hi_, MPFR_RNDN);
  mpfr_div_2ui(m, m, 1, MPFR_RNDN);
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*Rg", digits, m);
  std::string s(buf);
  mpfr_free_str(buf);
  mpfr_clear(m);
  return s;
}

bool Interval::contains(const Rational& q) const {
  return mpfr_cmp_q(lo_, q.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_, q.get_mpq_t()) >= 0;
}

bool Interval::contains_dyadic(unsigned long level) const {
  // Scaling by 2^level is exact in binary floating point.
  mpfr_t a, b;
  mpfr_init2(a, bits());
  mpfr_init2(b, bits());
  mpfr_mul_2ui(a, lo_, level, MPFR_RNDD);
  mpfr_mul_2ui(b, hi_, level, MPFR_RNDU);
  mpfr_ceil(a, a);
  mpfr_floor(b, b);
  bool hit = mpfr_lessequal_p(a, b);
  mpfr_clear(a);
  mpfr_clear(b);
  return hit;
}

bool Interval::certainly_greater(const Rational& q) const { return mpfr_cmp_q(lo_, q.get_mpq_t()) > 0; }
bool Interval::certainly_less(const Rational& q) const { return mpfr_cmp_q(hi_, q.get_mpq_t()) < 0; }

Interval operator+(const Interval& a, const Interval& b) {
  Interval r(std::max(a.bits(), b.bits()));
  mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return r;
}

Interval operator-(const Interval& a, const Interval& b) {
  Interval r(std::max(a.bits(), b.bits()));
  mpfr_sub(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
  mpfr_sub(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
  return r;
}

Interval operator-(const Interval& a) {
  Interval r(a.bits());
  mpfr_neg(r.lo_, a.hi_, MPFR_RNDD);
  mpfr_neg(r.hi_, a.lo_, MPFR_RNDU);
  return r;
}

namespace {

using BinaryOp = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);

// Outward hull of op over the four endpoint combinations.
void endpoint_hull(mpfr_ptr lo, mpfr_ptr hi, mpfr_srcptr a_lo, mpfr_srcptr a_hi, mpfr_srcptr b_lo,
                   mpfr_srcptr b_hi, BinaryOp op) {
  const mpfr_prec_t prec = mpfr_get_prec(lo);
  mpfr_t t;
  mpfr_init2(t, prec);
  mpfr_srcptr as[2] = {a_lo, a_hi};
  mpfr_srcptr bs[2] = {b_lo, b_hi};
  bool first = true;
  for (auto x : as) {
    for (auto y : bs) {
      op(t, x, y, MPFR_RNDD);
      if (first || mpfr_less_p(t, lo)) mpfr_set(lo, t, MPFR_RNDD);
      op(t, x, y, MPFR_RNDU);
      if (first || mpfr_greater_p(t, hi)) mpfr_set(hi, t, MPFR_RNDU);
      first = false;
    }
  }
  mpfr_clear(t);
}

}  // namespace

Interval operator*(const Interval& a, const Interval& b) {
  Interval r(std::max(a.bits(), b.bits()));
  endpoint_hull(r.lo_, r.hi_, a.lo_, a.hi_, b.lo_, b.hi_, mpfr_mul);
  return r;
}

Interval operator/(const Interval& a, const Interval& b) {
  if (mpfr_sgn(b.lo_) <= 0 && mpfr_sgn(b.hi_) >= 0) throw DomainError("interval division by an interval containing zero");
  Interval r(std::max(a.bits(), b.bits()));
  endpoint_hull(r.lo_, r.hi_, a.lo_, a.hi_, b.lo_, b.hi_, mpfr_div);
  return r;
}

Interval sqrt(const Interval& a) {
  if (mpfr_sgn(a.hi_) < 0) throw DomainError("sqrt of a negative interval");
  Interval r(a.bits());
  if (mpfr_sgn(a.lo_) <= 0) {
    mpfr_set_zero(r.lo_, 1);
  } else {
    mpfr_sqrt(r.lo_, a.lo_, MPFR_RNDD);
  }
  mpfr_sqrt(r.hi_, a.hi_, MPFR_RNDU);
  return r;
}

Interval abs(const Interval& a) {
  if (mpfr_sgn(a.lo_) >= 0) return a;
  if (mpfr_sgn(a.hi_) <= 0) return -a;
  Interval r(a.bits());
  mpfr_set_zero(r.lo_, 1);
  mpfr_neg(r.hi_, a.lo_, MPFR_RNDU);
  if (mpfr_less_p(r.hi_, a.hi_)) mpfr_set(r.hi_, a.hi_, MPFR_RNDU);
  return r;
}

}  // namespace iset
