#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "iset/interval.hpp"
#include "iset/padic.hpp"
#include "iset/rational.hpp"

namespace iset {

// C(p) lives in [0, 1]: each refinement splits every kept interval into
// 2p-1 equal pieces and keeps pieces 0, 2, ..., 2p-2 (0-based), so both
// endpoints of [0, 1] survive forever. The geometric operations accept any
// p >= 2; only the p-adic distance needs p prime.

struct ClosedInterval {
  Rational lo;
  Rational hi;
  friend bool operator==(const ClosedInterval&, const ClosedInterval&) = default;
};

inline constexpr std::uint64_t kDefaultMaxIntervals = std::uint64_t{1} << 22;

/// The p^k kept intervals of C_k(p) in ascending order. Throws ResourceError
/// when p^k exceeds max_intervals.
std::vector<ClosedInterval> construct_iterate(std::uint64_t p, unsigned k,
                                              std::uint64_t max_intervals = kDefaultMaxIntervals);

/// CSV rows (level, interval_index, lo_num, lo_den, hi_num, hi_den) with a
/// header line; levels from_level..k inclusive.
void write_iterate_csv(std::ostream& out, std::uint64_t p, unsigned k, unsigned from_level,
                       std::uint64_t max_intervals = kDefaultMaxIntervals);

/// A point of C(p) at finite depth: the address digits a_0..a_{K-1} and the
/// exact coordinate Σ 2 a_k / (2p-1)^(k+1), which is the left endpoint of the
/// depth-K interval the address selects.
class CantorPoint {
 public:
  CantorPoint(std::uint64_t p, std::vector<Digit> address);

  std::uint64_t p() const { return p_; }
  unsigned depth() const { return static_cast<unsigned>(address_.size()); }
  std::span<const Digit> address() const { return address_; }
  const Rational& coordinate() const { return coordinate_; }

  friend bool operator==(const CantorPoint&, const CantorPoint&) = default;

 private:
  std::uint64_t p_;
  std::vector<Digit> address_;
  Rational coordinate_;
};

CantorPoint cantor_encode(const PAdicInteger& x);
/// Throws DomainError for negative valuation. Uses K digits of x.
CantorPoint cantor_encode(const PAdicRational& x, unsigned K);

struct Membership {
  /// 0 when the point survives every refinement up to the requested depth,
  /// otherwise the first level j >= 1 at which it lies in a removed gap.
  unsigned excluded_at = 0;
  bool inside() const { return excluded_at == 0; }
};

/// Throws DomainError for q outside [0, 1].
Membership cantor_membership(const Rational& q, std::uint64_t p, unsigned depth);

/// D(y1, y2) = |x1 - x2|_p over the shared address depth. Needs prime p.
PAdicNorm cantor_distance(const CantorPoint& y1, const CantorPoint& y2);

/// E(y1, y2) = |coordinate1 - coordinate2|.
Rational euclidean_distance(const CantorPoint& y1, const CantorPoint& y2);

enum class PerturbationKind { GeometricallyConstrained, GeometricallyUnconstrained };

struct PerturbationClass {
  PerturbationKind kind;
  /// |delta|_p, the D-magnitude of the perturbation.
  PAdicNorm magnitude;
  /// Image of x + delta at depth K; present only for constrained perturbations.
  std::optional<CantorPoint> image;
};

/// Constrained iff delta is a p-adic integer (reduced denominator coprime to p).
PerturbationClass classify_perturbation(const PAdicRational& x, const Rational& delta, std::uint64_t p, unsigned K);

/// Rational offset (1 + p^-m) / (2p-1)^(depth+1). Added to any depth-`depth`
/// image of x, it lands strictly inside the first removed gap of the next
/// refinement, while |offset|_p = p^m.
Rational gap_offset(std::uint64_t p, unsigned depth, unsigned m);

/// log p / log(2p-1) as a certified enclosure.
Interval hausdorff_dimension(std::uint64_t p, mpfr_prec_t bits = Interval::kDefaultBits);

/// The closed form log(2^N) / log(2^(N+1) - 1) quoted for p = 2^N + 1.
Interval hausdorff_dimension_fermat_form(unsigned N, mpfr_prec_t bits = Interval::kDefaultBits);

}  // namespace iset
