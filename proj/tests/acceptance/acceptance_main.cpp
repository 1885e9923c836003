// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Reference constants were computed offline with 50-digit
// arithmetic and are frozen here.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "iset/bell.hpp"
#include "iset/cantor.hpp"
#include "iset/padic.hpp"
#include "iset/rational_trig.hpp"

using namespace iset;

namespace {

constexpr double kLog2OverLog3 = 0.63092975357145743710;
constexpr double kLog3OverLog5 = 0.68260619448598529513;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  const char* id;
  const char* name;
  double time_limit_s;
  std::function<Outcome()> body;
};

Integer int_pow(std::uint64_t base, unsigned e) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, e);
  return r;
}

PAdicRational random_unit_times_power(std::mt19937_64& rng, std::uint64_t p, unsigned K, int min_val, int max_val) {
  std::uniform_int_distribution<Digit> digit(0, static_cast<Digit>(p - 1));
  std::uniform_int_distribution<Digit> lead(1, static_cast<Digit>(p - 1));
  std::uniform_int_distribution<int> val(min_val, max_val);
  std::vector<Digit> d(K);
  d[0] = lead(rng);
  for (unsigned k = 1; k < K; ++k) d[k] = digit(rng);
  return PAdicRational(val(rng), PAdicInteger(p, std::move(d)));
}

Outcome ultrametric_suite() {
  Outcome o;
  std::mt19937_64 rng(1);
  std::uint64_t checked = 0, strict_cases = 0, failures = 0;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 257ull}) {
    for (int trial = 0; trial < 100000; ++trial) {
      // y and z are built as offsets from x so the three distances span
      // many magnitudes, including ties.
      auto x = random_unit_times_power(rng, p, 32, -4, 4);
      auto y = x + random_unit_times_power(rng, p, 32, -4, 12);
      auto z = y + random_unit_times_power(rng, p, 32, -4, 12);
      const auto dxy = padic_distance(x, y);
      const auto dyz = padic_distance(y, z);
      const auto dxz = padic_distance(x, z);
      const auto top = std::max(dxy, dyz);
      bool ok = dxz <= top;
      if (dxy != dyz) {
        ++strict_cases;
        ok = ok && dxz == top;
      }
      const auto nx = padic_norm(x), ny = padic_norm(y), nxy = padic_norm(x * y);
      if (!nx.is_zero && !ny.is_zero) ok = ok && !nxy.is_zero && nxy.exponent == nx.exponent + ny.exponent;
      ++checked;
      if (!ok) ++failures;
    }
  }
  o.pass = failures == 0;
  o.detail = std::to_string(checked) + " triples, " + std::to_string(strict_cases) + " with distinct norms, " +
             std::to_string(failures) + " violations";
  return o;
}

Outcome non_integer_norm_bound() {
  Outcome o;
  std::uint64_t checked = 0, failures = 0;
  for (std::uint64_t p : {3ull, 5ull, 17ull}) {
    const auto p_norm = PAdicNorm::power(p, -1);
    for (long a = -200; a <= 200; ++a) {
      for (long b = 1; b <= 200; ++b) {
        if (std::gcd(std::abs(a), b) != 1) continue;  // reduced forms only (0/1 included)
        const Rational q = make_rational(a, b);
        const bool divides = b % static_cast<long>(p) == 0;
        const auto direct = padic_norm(q, p);
        const auto via_digits = padic_norm(embed_rational(q, p, 8));
        const bool large = !direct.is_zero && direct >= p_norm;
        ++checked;
        if (large != divides || !(direct == via_digits)) ++failures;
      }
    }
  }
  o.pass = failures == 0;
  o.detail = std::to_string(checked) + " reduced rationals, " + std::to_string(failures) + " violations";
  return o;
}

Outcome homeomorphism_fidelity() {
  Outcome o;
  const unsigned K = 16;
  const Integer scale = int_pow(3, K);
  std::vector<CantorPoint> images;
  images.reserve(1u << K);
  std::uint64_t failures = 0;
  for (unsigned long n = 0; n < (1ul << K); ++n) {
    CantorPoint y = cantor_encode(PAdicInteger::from_integer(Integer(n), 2, K));
    const Rational& c = y.coordinate();
    bool ok = c >= 0 && c <= 1 && cantor_membership(c, 2, K).inside();
    const Rational scaled = c * scale;
    ok = ok && scaled.get_den() == 1;
    Integer z = scaled.get_num();
    for (unsigned k = 0; k < K && ok; ++k) {
      ok = mpz_fdiv_q_ui(z.get_mpz_t(), z.get_mpz_t(), 3) != 1;
    }
    if (!ok) ++failures;
    images.push_back(std::move(y));
  }
  // n and n ^ 2^k agree on exactly k leading digits.
  std::uint64_t pairs = 0;
  for (unsigned long n = 0; n < (1ul << K); ++n) {
    for (unsigned k = 0; k < K; ++k) {
      const unsigned long m = n ^ (1ul << k);
      if (m < n) continue;
      ++pairs;
      const Rational bound = Rational(1) / int_pow(3, k);
      if (euclidean_distance(images[n], images[m]) > bound) ++failures;
      if (!(cantor_distance(images[n], images[m]) == PAdicNorm::power(2, k))) ++failures;
    }
  }
  o.pass = failures == 0;
  o.detail = std::to_string(images.size()) + " images, " + std::to_string(pairs) + " prefix pairs, " +
             std::to_string(failures) + " violations";
  return o;
}

Outcome metric_asymmetry() {
  Outcome o;
  std::mt19937_64 rng(4);
  const unsigned K = 16;
  std::uint64_t failures = 0;
  int constrained = 0;
  const std::uint64_t primes[] = {2, 3, 5};
  for (int trial = 0; trial < 10000; ++trial) {
    const std::uint64_t p = primes[trial % 3];
    std::uniform_int_distribution<long> num(-100000, 100000), den(1, 1000);
    std::uniform_int_distribution<unsigned> shift(0, K - 1);
    auto x = embed_rational(Integer(std::abs(num(rng))), 1, p, K);
    long d = den(rng);
    while (d % static_cast<long>(p) == 0) d = den(rng);
    Rational delta = make_rational(num(rng), d) * int_pow(p, shift(rng));
    delta.canonicalize();
    auto cls = classify_perturbation(x, delta, p, K);
    if (cls.kind != PerturbationKind::GeometricallyConstrained || !cls.image) {
      ++failures;
      continue;
    }
    ++constrained;
    const CantorPoint origin = cantor_encode(x, K);
    const auto D = cantor_distance(origin, *cls.image);
    const Rational E = euclidean_distance(origin, *cls.image);
    // D = p^-v forces agreement on v leading digits, so E <= (2p-1)^-v.
    const unsigned v = D.is_zero ? K : static_cast<unsigned>(std::min<std::int64_t>(D.exponent, K));
    bool ok = cantor_membership(cls.image->coordinate(), p, K).inside();
    ok = ok && (D.is_zero ? cls.magnitude.is_zero || cls.magnitude.exponent >= K : D == cls.magnitude);
    ok = ok && E <= Rational(1) / int_pow(2 * p - 1, v);
    if (!ok) ++failures;
  }

  int witnesses = 0;
  const Rational e_limit = Rational(1) / int_pow(3, 16);
  for (std::uint64_t p : primes) {
    for (unsigned m = 1; m <= 4; ++m) {
      auto x = embed_rational(Integer(7 * m + 1), 1, p, K);
      const Rational offset = gap_offset(p, K, m);
      auto cls = classify_perturbation(x, offset, p, K);
      const Rational moved = cantor_encode(x, K).coordinate() + offset;
      const bool small_e = offset <= e_limit;
      const bool large_d = cls.magnitude >= PAdicNorm::power(p, -1);
      const bool off_set = cantor_membership(moved, p, K + 1).excluded_at == K + 1;
      if (small_e && large_d && off_set && cls.kind == PerturbationKind::GeometricallyUnconstrained) ++witnesses;
      else ++failures;
    }
  }
  o.pass = failures == 0 && constrained == 10000 && witnesses >= 10;
  o.detail = std::to_string(constrained) + " constrained perturbations, " + std::to_string(witnesses) +
             " witnesses with E <= 3^-16 and D >= p, " + std::to_string(failures) + " violations";
  return o;
}

Outcome triangle_incompatibility() {
  Outcome o;
  std::ostringstream d;
  for (unsigned N = 1; N <= 6; ++N) {
    auto open = incompatibility_search(N, PhaseRange::Open);
    const bool ok = open.admissible_triples.empty() && open.count_searched == search_size(N, PhaseRange::Open);
    o.pass = o.pass && ok;
    d << "N=" << N << ": " << open.count_searched << " searched, " << open.admissible_triples.size()
      << " admissible; ";
  }
  auto right = incompatibility_search(6, PhaseRange::WithRightAngle);
  bool all_right_angle = true;
  for (const auto& t : right.admissible_triples) all_right_angle = all_right_angle && t.phase_fraction == Rational(1, 2);
  o.pass = o.pass && !right.admissible_triples.empty() && all_right_angle;
  d << "right-angle family at N=6: " << right.admissible_triples.size() << " triples";
  o.detail = d.str();
  return o;
}

Outcome decision_soundness() {
  Outcome o;
  std::mt19937_64 rng(6);
  int rational = 0, irrational = 0, failures = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const unsigned N = 1 + static_cast<unsigned>(trial % 12);
    const long scale = 1L << N;
    std::uniform_int_distribution<long> cosine(-scale, scale), fraction(0, scale);
    // Bias a quarter of the phases toward the rational-cosine cases.
    const long special[] = {0, scale / 4, scale / 2, 3 * scale / 4, scale};
    const long f_num = trial % 4 == 0 ? special[trial / 4 % 5] : fraction(rng);
    const PhaseAngle phase(make_rational(f_num, scale));
    const auto side = third_side(make_rational(cosine(rng), scale), make_rational(cosine(rng), scale), phase);
    const auto verdict = is_rational(side);
    const Interval enclosure = side.enclose(128);
    if (verdict.is_rational()) {
      ++rational;
      if (!enclosure.contains(*verdict.value) || enclosure.width() > 1e-30) ++failures;
    } else {
      ++irrational;
      if (enclosure.contains_dyadic(64)) ++failures;
    }
  }
  o.pass = failures == 0;
  o.detail = std::to_string(rational) + " rational and " + std::to_string(irrational) + " irrational verdicts, " +
             std::to_string(failures) + " contradicted";
  return o;
}

Outcome chsh_a_versus_a_prime() {
  Outcome o;
  std::ostringstream d;
  const auto config = ExperimentConfig::standard(10);
  const auto status = chsh_A(config);
  const auto a_prime = chsh_A_prime(a_prime_subexperiments(config), 10, config.instrument_resolution());
  const std::vector<std::string> expected{"a2,b1", "a1,b2"};
  o.pass = status.undefined && status.off_invariant_set_pairs == expected && !status.realized_pair_off_invariant_set &&
           a_prime.value == Rational(181, 64) && a_prime.value > 2;
  d << "N=10: A " << (status.undefined ? "Undefined" : "defined") << ", A' = " << to_string(a_prime.value) << "; ";

  const Interval target = sqrt(Interval::from_rational(8));
  Rational previous_gap = 100;
  for (unsigned N = 4; N <= 12; ++N) {
    const auto c = ExperimentConfig::standard(N);
    const Rational value = chsh_A_prime(a_prime_subexperiments(c), N, c.instrument_resolution()).value;
    const Interval gap = abs(target - Interval::from_rational(value));
    const Rational gap_hi = gap.upper_exact();
    const bool ok = gap_hi <= Rational(4) / pow2(N) && gap.lower_exact() <= previous_gap;
    o.pass = o.pass && ok;
    previous_gap = gap_hi;
    d << "N=" << N << " " << to_string(value) << (N < 12 ? ", " : "");
  }
  o.detail = d.str();
  return o;
}

Outcome monte_carlo_consistency() {
  Outcome o;
  std::ostringstream d;
  const std::uint64_t n = 1000000;
  const auto config = ExperimentConfig::standard(10);
  for (std::uint64_t seed : {20160101ull, 1ull, 2ull}) {
    const auto report = run_chsh_experiment(config, n, seed);
    const auto& mc = *report.monte_carlo;
    double worst_sigma = 0;
    for (std::size_t k = 0; k < 4; ++k) {
      const double c = report.a_prime.correlations[k].get_d();
      const double sigma = std::sqrt((1 - c * c) / static_cast<double>(n));
      const double z = std::abs(mc.records[k].estimate.get_d() - c) / sigma;
      worst_sigma = std::max(worst_sigma, z);
    }
    const double combined = std::abs(mc.a_prime - report.a_prime.value.get_d()) / mc.standard_error;
    o.pass = o.pass && worst_sigma <= 3 && combined <= 4;
    char buf[160];
    std::snprintf(buf, sizeof buf, "seed %llu: A'_mc %.5f, worst %.2f sigma, A' %.2f SE; ",
                  static_cast<unsigned long long>(seed), mc.a_prime, worst_sigma, combined);
    d << buf;
  }
  o.detail = d.str();
  return o;
}

Outcome snap_bound() {
  Outcome o;
  std::ostringstream d;
  double previous = INFINITY;
  for (unsigned N : {8u, 12u, 16u, 20u}) {
    const double worst = max_snap_angle_error(N, 10000);
    const double bound = 2 * std::pow(2.0, -(static_cast<double>(N) - 1) / 2);
    o.pass = o.pass && worst <= bound && worst < previous;
    previous = worst;
    char buf[96];
    std::snprintf(buf, sizeof buf, "N=%u %.3e (bound %.3e); ", N, worst, bound);
    d << buf;
  }
  o.detail = d.str();
  return o;
}

Outcome hausdorff_dimension_check() {
  Outcome o;
  std::ostringstream d;
  const double at2 = hausdorff_dimension(2).midpoint();
  const double at3 = hausdorff_dimension(3).midpoint();
  o.pass = std::abs(at2 - kLog2OverLog3) <= 1e-12 && std::abs(at3 - kLog3OverLog5) <= 1e-12;
  Interval previous = hausdorff_dimension(2);
  for (std::uint64_t p = 3; p <= 2100; ++p) {
    const Interval current = hausdorff_dimension(p);
    if (!(current.lower_exact() > previous.upper_exact())) o.pass = false;
    previous = current;
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "p=2 %.15f; construction minus closed form: ", at2);
  d << buf;
  for (unsigned N = 10; N <= 20; ++N) {
    const double gap = (hausdorff_dimension((1ull << N) + 1) - hausdorff_dimension_fermat_form(N)).midpoint();
    o.pass = o.pass && std::abs(gap) < 1e-3;
    if (N <= 13 || N == 20) {
      std::snprintf(buf, sizeof buf, "N=%u %.3e%s", N, gap, N < 20 ? ", " : "");
      d << buf;
    }
  }
  o.detail = d.str();
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"AC1", "ultrametric suite", 30, ultrametric_suite},
      {"AC2", "non-integer norm bound", 10, non_integer_norm_bound},
      {"AC3", "homeomorphism fidelity", 60, homeomorphism_fidelity},
      {"AC4", "metric asymmetry", 10, metric_asymmetry},
      {"AC5", "triangle incompatibility", 300, triangle_incompatibility},
      {"AC6", "decision soundness", 60, decision_soundness},
      {"AC7", "CHSH A vs A'", 10, chsh_a_versus_a_prime},
      {"AC8", "Monte Carlo consistency", 60, monte_carlo_consistency},
      {"AC9", "snap angular bound", 30, snap_bound},
      {"AC10", "Hausdorff dimension", 1, hausdorff_dimension_check},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.body();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds <= c.time_limit_s;
    const bool pass = outcome.pass && in_time;
    if (!pass) ++failed;
    std::printf("%s %-4s %-26s %7.2fs (limit %gs%s)  %s\n", pass ? "PASS" : "FAIL", c.id, c.name, seconds,
                c.time_limit_s, in_time ? "" : ", exceeded", outcome.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
