#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "iset/interval.hpp"
#include "iset/rational.hpp"

namespace iset {

/// m / 2^level in canonical form: m odd, or m = 0 with level 0.
class DyadicRational {
 public:
  DyadicRational() = default;
  DyadicRational(Integer numerator, unsigned level);
  /// Throws DomainError when q's reduced denominator is not a power of two.
  static DyadicRational from_rational(const Rational& q);

  const Integer& numerator() const { return numerator_; }
  unsigned level() const { return level_; }
  Rational value() const;

  friend bool operator==(const DyadicRational&, const DyadicRational&) = default;

 private:
  Integer numerator_ = 0;
  unsigned level_ = 0;
};

/// Phase angle fπ with 0 <= f <= 1. Admissible phases are dyadic; other
/// rational fractions are representable so the cosine rule can be evaluated
/// on non-admissible counterexamples too.
class PhaseAngle {
 public:
  explicit PhaseAngle(Rational fraction);
  PhaseAngle(const DyadicRational& fraction) : PhaseAngle(fraction.value()) {}

  const Rational& fraction() const { return fraction_; }
  std::optional<DyadicRational> dyadic() const;

  friend bool operator==(const PhaseAngle&, const PhaseAngle&) = default;

 private:
  Rational fraction_;
};

/// r1 + sqrt(r2) * cos(phase).
struct AlgebraicCosine {
  Rational r1;
  Rational r2;
  PhaseAngle phase;

  /// Certified enclosure of the represented real value.
  Interval enclose(mpfr_prec_t bits = Interval::kDefaultBits) const;
};

/// Outcome of an exact rationality decision.
struct RationalityVerdict {
  std::optional<Rational> value;  // set iff rational
  bool is_rational() const { return value.has_value(); }
};

/// q in Q2(N): reduced denominator divides 2^N and |q| <= 1.
bool in_Q2N(const Rational& q, unsigned N);

/// Rational cos(fπ) for rational f: only f with reduced denominator 1, 2
/// or 3 give rational values (0, ±1/2, ±1).
RationalityVerdict cos_phase_rationality(const PhaseAngle& phase);

/// Spherical cosine rule: cos θ_ab = cos θ_ac cos θ_bc + sin θ_ac sin θ_bc cos φ.
/// Throws DomainError for cosines outside [-1, 1].
AlgebraicCosine third_side(const Rational& cos_ac, const Rational& cos_bc, const PhaseAngle& phase);

/// Exact decision whether the algebraic cosine is rational.
RationalityVerdict is_rational(const AlgebraicCosine& a);

/// Throws DomainError unless both cosines and the phase fraction are in Q2(N).
bool admissible_third_side(const Rational& cos_ac, const Rational& cos_bc, const PhaseAngle& phase, unsigned N);

enum class PhaseRange {
  Open,             // dyadic f in (0, 1/2)
  WithRightAngle,   // (0, 1/2]
};

struct TriangleRecord {
  Rational cos_ac;
  Rational cos_bc;
  Rational phase_fraction;
  RationalityVerdict verdict;
};

struct SearchReport {
  unsigned N = 0;
  PhaseRange range = PhaseRange::Open;
  std::uint64_t count_searched = 0;
  /// Non-degenerate triples whose third side lands in Q2(N).
  std::vector<TriangleRecord> admissible_triples;
  /// Triples with |cos_ac| = 1 or |cos_bc| = 1 (a zero-length side), where
  /// the third side is trivially the other cosine up to sign.
  std::vector<TriangleRecord> degenerate_triples;
};

/// (2^(N+1)+1)^2 * (number of phases in range at level N).
std::uint64_t search_size(unsigned N, PhaseRange range);

inline constexpr std::uint64_t kDefaultSearchBudget = 50'000'000;

/// Exhaustive enumeration of cos_ac, cos_bc in Q2(N) ∩ [-1, 1] and dyadic
/// phases of level <= N in `range`. The cosine grid is split into chunks
/// evaluated concurrently; the merged report does not depend on scheduling.
/// Throws ResourceError (carrying the triples already visited) once the
/// budget would be exceeded.
SearchReport incompatibility_search(unsigned N, PhaseRange range = PhaseRange::Open,
                                    std::uint64_t budget = kDefaultSearchBudget);

/// Record stream: cos_ac,cos_bc,phase_fraction,verdict,value
void write_search_csv(std::ostream& out, const SearchReport& report, bool include_degenerate);

/// Nearest m / 2^N to target, ties toward zero. Throws for |target| > 1.
DyadicRational snap_cosine(const Rational& target, unsigned N);
/// Nearest m / 2^N to an enclosed real; throws DomainError when the enclosure
/// straddles a rounding boundary.
DyadicRational snap_cosine(const Interval& target, unsigned N);
/// Same rounding applied to a phase fraction in [0, 1].
PhaseAngle snap_phase(const Rational& target_fraction, unsigned N);

/// Largest |arccos(snap_cosine(cos θ, N)) - θ| over θ_k = kπ/(points+1),
/// k = 1..points, in double precision.
double max_snap_angle_error(unsigned N, std::size_t points = 10'000);

}  // namespace iset
