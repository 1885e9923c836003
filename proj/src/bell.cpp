#include "iset/bell.hpp"

#include <cmath>
#include <future>
#include <numbers>
#include <random>

#include "iset/errors.hpp"

namespace iset {

Orientation::Orientation(Rational turns) : turns_(std::move(turns)) {
  turns_.canonicalize();
  Integer wraps = floor(Rational(turns_ / 2));
  turns_ -= 2 * Rational(wraps);
  turns_.canonicalize();
}

Rational relative_angle(const Orientation& a, const Orientation& b) {
  Rational d = Orientation(b.turns() - a.turns()).turns();
  if (d > 1) d = 2 - d;
  d.canonicalize();
  return d;
}

namespace {

Rational apply(Convention convention, const Rational& cosine) {
  return convention == Convention::CosTheta ? cosine : Rational(-cosine);
}

}  // namespace

Correlation correlation_exact(const Orientation& a, const Orientation& b, Convention convention) {
  const Rational f = relative_angle(a, b);
  Interval enclosure = Interval::cos_pi(f);
  if (convention == Convention::SingletNegCos) enclosure = -enclosure;
  auto verdict = cos_phase_rationality(PhaseAngle(f));
  if (verdict.is_rational()) return {apply(convention, *verdict.value), std::move(enclosure)};
  return {std::nullopt, std::move(enclosure)};
}

bool pair_on_invariant_set(const Orientation& a, const Orientation& b, unsigned N) {
  auto c = correlation_exact(a, b);
  return c.is_exact() && in_Q2N(*c.exact, N);
}

double PairSpec::angular_shift() const {
  if (!realized_cosine) return 0.0;
  const double nominal = relative_angle(a, b).get_d() * std::numbers::pi;
  return std::abs(std::acos(realized_cosine->value().get_d()) - nominal);
}

PairSpec snap_pair(std::string label, const Orientation& a, const Orientation& b, unsigned N) {
  auto c = correlation_exact(a, b);
  DyadicRational snapped = c.is_exact() ? snap_cosine(*c.exact, N) : snap_cosine(c.enclosure, N);
  return {std::move(label), a, b, std::move(snapped)};
}

Correlation pair_correlation(const PairSpec& pair, Convention convention) {
  if (!pair.realized_cosine) return correlation_exact(pair.a, pair.b, convention);
  Rational c = apply(convention, pair.realized_cosine->value());
  return {c, Interval::from_rational(c)};
}

bool pair_on_invariant_set(const PairSpec& pair, unsigned N, Convention convention) {
  auto c = pair_correlation(pair, convention);
  return c.is_exact() && in_Q2N(*c.exact, N);
}

double default_resolution(unsigned N) { return std::pow(2.0, -(static_cast<double>(N) - 1.0) / 2.0); }

// ------------------------------------------------------------ ExperimentConfig

ExperimentConfig ExperimentConfig::standard(unsigned N) {
  ExperimentConfig c;
  c.a1 = Orientation(0);
  c.a2 = Orientation(Rational(1, 2));
  c.b1 = Orientation(Rational(1, 4));
  c.b2 = Orientation(Rational(3, 4));
  c.N = N;
  return c;
}

double ExperimentConfig::instrument_resolution() const { return resolution.value_or(default_resolution(N)); }

const Orientation& ExperimentConfig::a(int i) const {
  if (i == 1) return a1;
  if (i == 2) return a2;
  throw DomainError("setting index must be 1 or 2");
}

const Orientation& ExperimentConfig::b(int j) const {
  if (j == 1) return b1;
  if (j == 2) return b2;
  throw DomainError("setting index must be 1 or 2");
}

PairSpec ExperimentConfig::pair(int i, int j) const {
  std::string label = "a" + std::to_string(i) + ",b" + std::to_string(j);
  if (snapped) return snap_pair(std::move(label), a(i), b(j), N);
  return {std::move(label), a(i), b(j), std::nullopt};
}

void ExperimentConfig::validate() const {
  if ((realized_i != 1 && realized_i != 2) || (realized_j != 1 && realized_j != 2)) {
    throw DomainError("realized pair must be in {1,2}x{1,2}");
  }
  if (N == 0 || N > 60) throw DomainError("admissibility level N must be in 1..60");
}

// ------------------------------------------------------------------------- A

AStatus chsh_A(const ExperimentConfig& config) {
  config.validate();
  const int i = config.realized_i;
  const int j = config.realized_j;
  AStatus status;
  status.realized_pair_off_invariant_set = !pair_on_invariant_set(config.pair(i, j), config.N, config.convention);

  if (config.invariant_set_rule) {
    // With (a_i, b_j) realized, the single-swap counterfactuals are off the invariant set.
    const int k_a = 3 - i;
    const int k_b = 3 - j;
    status.undefined = true;
    status.off_invariant_set_pairs = {config.pair(k_a, j).label, config.pair(i, k_b).label};
    return status;
  }

  status.undefined = false;
  std::array<Correlation, 4> c{pair_correlation(config.pair(1, 1), config.convention),
                               pair_correlation(config.pair(1, 2), config.convention),
                               pair_correlation(config.pair(2, 1), config.convention),
                               pair_correlation(config.pair(2, 2), config.convention)};
  status.value_enclosure = abs(c[0].enclosure - c[1].enclosure) + abs(c[2].enclosure + c[3].enclosure);
  if (c[0].is_exact() && c[1].is_exact() && c[2].is_exact() && c[3].is_exact()) {
    Rational v = abs(Rational(*c[0].exact - *c[1].exact)) + abs(Rational(*c[2].exact + *c[3].exact));
    v.canonicalize();
    status.value_exact = v;
  }
  return status;
}

// ------------------------------------------------------------------------ A'

APrime chsh_A_prime(const std::array<PairSpec, 4>& subs, unsigned N, double resolution, Convention convention) {
  APrime out;
  for (std::size_t k = 0; k < subs.size(); ++k) {
    const PairSpec& s = subs[k];
    auto c = pair_correlation(s, convention);
    if (!c.is_exact() || !in_Q2N(*c.exact, N)) {
      throw DomainError("sub-experiment " + s.label + " is off the invariant set at N = " + std::to_string(N));
    }
    if (s.angular_shift() > resolution) {
      throw DomainError("sub-experiment " + s.label + " needs an angular shift beyond the instrument resolution");
    }
    out.correlations[k] = *c.exact;
  }
  const auto& c = out.correlations;
  out.value = abs(Rational(c[0] - c[1])) + abs(Rational(c[2] + c[3]));
  out.value.canonicalize();
  return out;
}

std::array<PairSpec, 4> a_prime_subexperiments(const ExperimentConfig& config) {
  std::array<PairSpec, 4> subs{config.pair(1, 1), config.pair(1, 2), config.pair(2, 1), config.pair(2, 2)};
  subs[1].label = "a1',b2";
  subs[2].label = "a2,b1'";
  return subs;
}

BellCheck bell_original_lhs(const std::array<PairSpec, 3>& pairs, unsigned N, Convention convention) {
  std::array<Rational, 3> c;
  for (std::size_t k = 0; k < 3; ++k) {
    auto corr = pair_correlation(pairs[k], convention);
    if (!corr.is_exact() || !in_Q2N(*corr.exact, N)) {
      throw DomainError("pair " + pairs[k].label + " is off the invariant set at N = " + std::to_string(N));
    }
    c[k] = *corr.exact;
  }
  Rational lhs = abs(Rational(c[0] - c[1]));
  Rational rhs = 1 + c[2];
  lhs.canonicalize();
  rhs.canonicalize();
  return {lhs, rhs, lhs <= rhs};
}

// ---------------------------------------------------------------- Monte Carlo

CorrelationRecord simulate_subexperiment(const PairSpec& pair, std::uint64_t n_trials, std::uint64_t seed,
                                         std::uint64_t stream, Convention convention) {
  if (n_trials == 0) throw DomainError("n_trials must be at least 1");
  CorrelationRecord rec;
  rec.label = pair.label;
  rec.n_trials = n_trials;
  rec.exact_correlation = pair_correlation(pair, convention);

  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  std::mt19937_64 rng(seq);
  std::uniform_int_distribution<int> coin(0, 1);

  // P(B = A) = (1 + c) / 2. Exact correlations use an integer threshold.
  std::int64_t sum = 0;
  std::uint64_t a_plus = 0;
  const auto& exact = rec.exact_correlation.exact;
  if (exact && mpz_sizeinbase(exact->get_den_mpz_t(), 2) < 62) {
    const std::uint64_t den = exact->get_den().get_ui();
    const std::int64_t num = exact->get_num().get_si();
    const std::uint64_t same_threshold = static_cast<std::uint64_t>(static_cast<std::int64_t>(den) + num);
    std::uniform_int_distribution<std::uint64_t> draw(0, 2 * den - 1);
    for (std::uint64_t t = 0; t < n_trials; ++t) {
      const int a = coin(rng) ? 1 : -1;
      const bool same = draw(rng) < same_threshold;
      sum += same ? 1 : -1;
      a_plus += a == 1 ? 1 : 0;
    }
  } else {
    std::bernoulli_distribution same_dist((1.0 + rec.exact_correlation.enclosure.midpoint()) / 2.0);
    for (std::uint64_t t = 0; t < n_trials; ++t) {
      const int a = coin(rng) ? 1 : -1;
      sum += same_dist(rng) ? 1 : -1;
      a_plus += a == 1 ? 1 : 0;
    }
  }
  rec.sum_products = sum;
  rec.count_a_plus = a_plus;
  rec.estimate = make_rational(Integer(static_cast<long>(sum)), Integer(static_cast<unsigned long>(n_trials)));
  const double e = rec.estimate.get_d();
  rec.standard_error = std::sqrt(std::max(0.0, 1.0 - e * e) / static_cast<double>(n_trials));
  return rec;
}

ChshReport run_chsh_experiment(const ExperimentConfig& config, std::uint64_t n_trials, std::uint64_t seed) {
  config.validate();
  ChshReport report;
  report.config = config;
  report.n_trials = n_trials;
  report.seed = seed;
  report.a_status = chsh_A(config);

  const auto subs = a_prime_subexperiments(config);
  report.a_prime = chsh_A_prime(subs, config.N, config.instrument_resolution(), config.convention);
  report.violation = report.a_prime.value > 2;

  if (n_trials > 0) {
    std::array<std::future<CorrelationRecord>, 4> jobs;
    for (std::size_t k = 0; k < subs.size(); ++k) {
      jobs[k] = std::async(std::launch::async, [&, k] {
        return simulate_subexperiment(subs[k], n_trials, seed, k + 1, config.convention);
      });
    }
    MonteCarloSummary mc;
    for (std::size_t k = 0; k < jobs.size(); ++k) mc.records[k] = jobs[k].get();
    const auto est = [&](std::size_t k) { return mc.records[k].estimate.get_d(); };
    mc.a_prime = std::abs(est(0) - est(1)) + std::abs(est(2) + est(3));
    double var = 0.0;
    for (const auto& r : mc.records) var += r.standard_error * r.standard_error;
    mc.standard_error = std::sqrt(var);
    report.monte_carlo = std::move(mc);
  }
  return report;
}

}  // namespace iset
