#include "iset/rational_trig.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <future>
#include <ostream>
#include <thread>

#include "iset/errors.hpp"

namespace iset {

// -------------------------------------------------------------- DyadicRational

DyadicRational::DyadicRational(Integer numerator, unsigned level) : numerator_(std::move(numerator)), level_(level) {
  if (numerator_ == 0) {
    level_ = 0;
    return;
  }
  const auto twos = static_cast<unsigned>(std::min<mp_bitcnt_t>(mpz_scan1(numerator_.get_mpz_t(), 0), level_));
  mpz_fdiv_q_2exp(numerator_.get_mpz_t(), numerator_.get_mpz_t(), twos);
  level_ -= twos;
}

DyadicRational DyadicRational::from_rational(const Rational& q) {
  auto level = dyadic_level(q);
  if (!level) throw DomainError(to_string(q) + " is not a dyadic rational");
  return DyadicRational(q.get_num(), *level);
}

Rational DyadicRational::value() const { return Rational(numerator_) * pow2(-static_cast<long>(level_)); }

// ------------------------------------------------------------------ PhaseAngle

PhaseAngle::PhaseAngle(Rational fraction) : fraction_(std::move(fraction)) {
  fraction_.canonicalize();
  if (fraction_ < 0 || fraction_ > 1) throw DomainError("phase fraction " + to_string(fraction_) + " outside [0, 1]");
}

std::optional<DyadicRational> PhaseAngle::dyadic() const {
  if (!dyadic_level(fraction_)) return std::nullopt;
  return DyadicRational::from_rational(fraction_);
}

Interval AlgebraicCosine::enclose(mpfr_prec_t bits) const {
  return Interval::from_rational(r1, bits) + sqrt(Interval::from_rational(r2, bits)) * Interval::cos_pi(phase.fraction(), bits);
}

// ------------------------------------------------------------------ operations

bool in_Q2N(const Rational& q, unsigned N) {
  if (abs(q) > 1) return false;
  auto level = dyadic_level(q);
  return level && *level <= N;
}

RationalityVerdict cos_phase_rationality(const PhaseAngle& phase) {
  const Rational& f = phase.fraction();
  const Integer& den = f.get_den();
  if (den == 1) return {f == 0 ? Rational(1) : Rational(-1)};
  if (den == 2) return {Rational(0)};
  if (den == 3) return {f.get_num() == 1 ? Rational(1, 2) : Rational(-1, 2)};
  return {};
}

namespace {

// cos^2(fπ) = (1 + cos(2fπ)) / 2 is rational iff cos(2fπ) is.
std::optional<Rational> cos_squared_rational(const PhaseAngle& phase) {
  Rational g = 2 * phase.fraction();
  if (g > 1) g = 2 - g;
  auto c = cos_phase_rationality(PhaseAngle(g));
  if (!c.is_rational()) return std::nullopt;
  Rational c2 = (1 + *c.value) / 2;
  c2.canonicalize();
  return c2;
}

void require_cosine(const Rational& c, const char* name) {
  if (abs(c) > 1) throw DomainError(std::string(name) + " = " + to_string(c) + " is not a cosine");
}

}  // namespace

AlgebraicCosine third_side(const Rational& cos_ac, const Rational& cos_bc, const PhaseAngle& phase) {
  require_cosine(cos_ac, "cos_ac");
  require_cosine(cos_bc, "cos_bc");
  Rational r1 = cos_ac * cos_bc;
  Rational r2 = (1 - cos_ac * cos_ac) * (1 - cos_bc * cos_bc);
  r1.canonicalize();
  r2.canonicalize();
  return {std::move(r1), std::move(r2), phase};
}

RationalityVerdict is_rational(const AlgebraicCosine& a) {
  if (a.r2 == 0) return {a.r1};
  if (auto c = cos_phase_rationality(a.phase); c.is_rational()) {
    if (*c.value == 0) return {a.r1};
    auto s = rational_sqrt(a.r2);
    if (!s) return {};
    Rational v = a.r1 + *s * *c.value;
    v.canonicalize();
    return {v};
  }
  if (auto c2 = cos_squared_rational(a.phase)) {
    // sqrt(r2) |cos φ| = sqrt(r2 cos^2 φ); cos φ < 0 exactly when f > 1/2.
    auto t = rational_sqrt(Rational(a.r2 * *c2));
    if (!t) return {};
    Rational v = a.phase.fraction() < Rational(1, 2) ? Rational(a.r1 + *t) : Rational(a.r1 - *t);
    v.canonicalize();
    return {v};
  }
  // r2 > 0 rational times irrational cos^2 φ is never a rational square.
  return {};
}

bool admissible_third_side(const Rational& cos_ac, const Rational& cos_bc, const PhaseAngle& phase, unsigned N) {
  if (!in_Q2N(cos_ac, N) || !in_Q2N(cos_bc, N)) throw DomainError("side cosines must lie in Q2(N)");
  if (!in_Q2N(phase.fraction(), N)) throw DomainError("phase fraction must lie in Q2(N)");
  auto verdict = is_rational(third_side(cos_ac, cos_bc, phase));
  return verdict.is_rational() && in_Q2N(*verdict.value, N);
}

// ---------------------------------------------------------------------- search

namespace {

std::uint64_t phase_count(unsigned N, PhaseRange range) {
  const std::uint64_t half = std::uint64_t{1} << (N - 1);
  return range == PhaseRange::Open ? half - 1 : half;
}

struct ChunkResult {
  std::uint64_t visited = 0;
  std::vector<TriangleRecord> admissible;
  std::vector<TriangleRecord> degenerate;
};

ChunkResult search_rows(unsigned N, const std::vector<Rational>& cosines, const std::vector<PhaseAngle>& phases,
                        std::size_t row_begin, std::size_t row_end) {
  ChunkResult out;
  for (std::size_t i = row_begin; i < row_end; ++i) {
    const Rational& ac = cosines[i];
    for (const Rational& bc : cosines) {
      const bool degenerate = abs(ac) == 1 || abs(bc) == 1;
      for (const PhaseAngle& phase : phases) {
        ++out.visited;
        auto verdict = is_rational(third_side(ac, bc, phase));
        const bool admissible = verdict.is_rational() && in_Q2N(*verdict.value, N);
        if (degenerate) {
          out.degenerate.push_back({ac, bc, phase.fraction(), std::move(verdict)});
        } else if (admissible) {
          out.admissible.push_back({ac, bc, phase.fraction(), std::move(verdict)});
        }
      }
    }
  }
  return out;
}

}  // namespace

std::uint64_t search_size(unsigned N, PhaseRange range) {
  if (N == 0 || N > 20) throw DomainError("search level must be in 1..20");
  const std::uint64_t side = (std::uint64_t{1} << (N + 1)) + 1;
  return side * side * phase_count(N, range);
}

SearchReport incompatibility_search(unsigned N, PhaseRange range, std::uint64_t budget) {
  const std::uint64_t total = search_size(N, range);
  SearchReport report;
  report.N = N;
  report.range = range;

  const auto scale = std::int64_t{1} << N;
  std::vector<Rational> cosines;
  for (std::int64_t m = -scale; m <= scale; ++m) cosines.push_back(Rational(m) * pow2(-static_cast<long>(N)));
  for (auto& c : cosines) c.canonicalize();
  std::vector<PhaseAngle> phases;
  for (std::uint64_t j = 1; j <= phase_count(N, range); ++j) {
    phases.emplace_back(Rational(static_cast<unsigned long>(j)) * pow2(-static_cast<long>(N)));
  }

  const std::size_t rows = cosines.size();
  const std::uint64_t per_row = static_cast<std::uint64_t>(rows) * phases.size();
  const std::size_t rows_per_chunk = std::max<std::size_t>(1, rows / 16);
  const unsigned workers = std::max(1u, std::thread::hardware_concurrency());

  std::vector<std::pair<std::size_t, std::size_t>> chunks;
  for (std::size_t r = 0; r < rows; r += rows_per_chunk) chunks.emplace_back(r, std::min(rows, r + rows_per_chunk));

  const bool over_budget = total > budget;
  for (std::size_t c = 0; c < chunks.size();) {
    std::vector<std::future<ChunkResult>> wave;
    std::uint64_t planned = report.count_searched;
    for (; c < chunks.size() && wave.size() < workers; ++c) {
      const auto [begin, end] = chunks[c];
      const std::uint64_t cost = (end - begin) * per_row;
      if (planned + cost > budget) break;
      planned += cost;
      wave.push_back(std::async(std::launch::async, search_rows, N, std::cref(cosines), std::cref(phases), begin, end));
    }
    if (wave.empty()) break;
    for (auto& f : wave) {
      ChunkResult part = f.get();
      report.count_searched += part.visited;
      std::move(part.admissible.begin(), part.admissible.end(), std::back_inserter(report.admissible_triples));
      std::move(part.degenerate.begin(), part.degenerate.end(), std::back_inserter(report.degenerate_triples));
    }
  }
  if (over_budget) {
    throw ResourceError("search at N = " + std::to_string(N) + " needs " + std::to_string(total) +
                            " triples, budget is " + std::to_string(budget),
                        report.count_searched);
  }
  return report;
}

void write_search_csv(std::ostream& out, const SearchReport& report, bool include_degenerate) {
  out << "cos_ac,cos_bc,phase_fraction,verdict,value\n";
  auto emit = [&out](const TriangleRecord& t, const char* tag) {
    out << to_string(t.cos_ac) << ',' << to_string(t.cos_bc) << ',' << to_string(t.phase_fraction) << ',' << tag
        << ',' << (t.verdict.is_rational() ? to_string(*t.verdict.value) : std::string()) << '\n';
  };
  for (const auto& t : report.admissible_triples) emit(t, "admissible");
  if (include_degenerate) {
    for (const auto& t : report.degenerate_triples) emit(t, t.verdict.is_rational() ? "degenerate" : "degenerate-irrational");
  }
}

// -------------------------------------------------------------------- snapping

namespace {

// Nearest integer to x, ties toward zero.
Integer round_ties_toward_zero(const Rational& x) {
  const Rational a = abs(x);
  Integer whole = floor(a);
  if (Rational(a - whole) > Rational(1, 2)) whole += 1;
  return x < 0 ? Integer(-whole) : whole;
}

Integer nearest_numerator(const Rational& target, unsigned N) {
  return round_ties_toward_zero(target * pow2(static_cast<long>(N)));
}

}  // namespace

DyadicRational snap_cosine(const Rational& target, unsigned N) {
  require_cosine(target, "snap target");
  return DyadicRational(nearest_numerator(target, N), N);
}

DyadicRational snap_cosine(const Interval& target, unsigned N) {
  auto clamp = [](Rational q) {
    if (q > 1) return Rational(1);
    if (q < -1) return Rational(-1);
    return q;
  };
  Integer lo = nearest_numerator(clamp(target.lower_exact()), N);
  Integer hi = nearest_numerator(clamp(target.upper_exact()), N);
  if (lo != hi) throw DomainError("enclosure too wide to snap at level " + std::to_string(N));
  return DyadicRational(lo, N);
}

PhaseAngle snap_phase(const Rational& target_fraction, unsigned N) {
  if (target_fraction < 0 || target_fraction > 1) throw DomainError("phase fraction outside [0, 1]");
  return PhaseAngle(DyadicRational(nearest_numerator(target_fraction, N), N));
}

double max_snap_angle_error(unsigned N, std::size_t points) {
  double worst = 0.0;
  for (std::size_t k = 1; k <= points; ++k) {
    const double theta = std::numbers::pi * static_cast<double>(k) / static_cast<double>(points + 1);
    const Rational target(std::cos(theta));  // exact value of the double
    const double snapped = snap_cosine(target, N).value().get_d();
    worst = std::max(worst, std::abs(std::acos(snapped) - theta));
  }
  return worst;
}

}  // namespace iset
