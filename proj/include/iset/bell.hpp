#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "iset/interval.hpp"
#include "iset/rational.hpp"
#include "iset/rational_trig.hpp"

namespace iset {

/// Measurement orientation at angle turns·π, with turns reduced into [0, 2).
class Orientation {
 public:
  explicit Orientation(Rational turns = 0);
  const Rational& turns() const { return turns_; }
  friend bool operator==(const Orientation&, const Orientation&) = default;

 private:
  Rational turns_;
};

/// Corr(a, b) = cos θ_ab as written, or the singlet sign -cos θ_ab for
/// comparison against textbook CHSH.
enum class Convention { CosTheta, SingletNegCos };

/// Exact when the value is rational, otherwise a certified enclosure.
struct Correlation {
  std::optional<Rational> exact;
  Interval enclosure;

  bool is_exact() const { return exact.has_value(); }
};

/// θ_ab / π folded into [0, 1].
Rational relative_angle(const Orientation& a, const Orientation& b);

Correlation correlation_exact(const Orientation& a, const Orientation& b, Convention convention = Convention::CosTheta);

/// Correlation is a rational in Q2(N).
bool pair_on_invariant_set(const Orientation& a, const Orientation& b, unsigned N);

/// One sub-experiment: nominal orientations plus, optionally, the cosine
/// actually realized once the instruments are set within their resolution
/// so that the pair sits on the invariant set.
struct PairSpec {
  std::string label;
  Orientation a;
  Orientation b;
  std::optional<DyadicRational> realized_cosine;

  /// |arccos(realized) - θ_nominal| in radians; 0 when nothing was snapped.
  double angular_shift() const;
};

/// Snaps cos θ_ab to level N (kept exact when already in Q2(N)).
PairSpec snap_pair(std::string label, const Orientation& a, const Orientation& b, unsigned N);

Correlation pair_correlation(const PairSpec& pair, Convention convention = Convention::CosTheta);
bool pair_on_invariant_set(const PairSpec& pair, unsigned N, Convention convention = Convention::CosTheta);

/// 2^(-(N-1)/2) radians.
double default_resolution(unsigned N);

struct ExperimentConfig {
  Orientation a1, a2, b1, b2;
  unsigned N = 10;
  int realized_i = 1;  // 1 or 2
  int realized_j = 1;
  bool snapped = true;
  bool invariant_set_rule = true;
  Convention convention = Convention::CosTheta;
  std::optional<double> resolution;  // radians; default_resolution(N) when unset

  /// a1 = 0, a2 = π/2, b1 = π/4, b2 = 3π/4: the |cos| = √2/2 geometry that
  /// maximizes |c11 - c12| + |c21 + c22| under Corr = cos θ.
  static ExperimentConfig standard(unsigned N);

  double instrument_resolution() const;
  const Orientation& a(int i) const;
  const Orientation& b(int j) const;
  /// Pair (a_i, b_j), snapped when `snapped` is set.
  PairSpec pair(int i, int j) const;
  void validate() const;
};

struct AStatus {
  bool undefined = true;
  /// Counterfactual setting pairs that lie off the invariant set.
  std::vector<std::string> off_invariant_set_pairs;
  /// The physically realized pair is itself off the invariant set.
  bool realized_pair_off_invariant_set = false;
  /// Set only when the rule is disabled.
  std::optional<Rational> value_exact;
  std::optional<Interval> value_enclosure;
};

/// The joint CHSH quantity over all four setting pairs of one run.
AStatus chsh_A(const ExperimentConfig& config);

struct APrime {
  Rational value;
  std::array<Rational, 4> correlations;
};

/// |c1 - c2| + |c3 + c4| from four separate sub-experiments, each of which
/// must have a correlation in Q2(N) and an angular shift within `resolution`.
APrime chsh_A_prime(const std::array<PairSpec, 4>& subs, unsigned N, double resolution,
                    Convention convention = Convention::CosTheta);

/// The four sub-experiments (a1,b1), (a1',b2), (a2,b1'), (a2,b2).
std::array<PairSpec, 4> a_prime_subexperiments(const ExperimentConfig& config);

struct BellCheck {
  Rational lhs;
  Rational rhs;
  bool satisfied;
};

/// |Corr(a,b) - Corr(a,c)| <= 1 + Corr(b,c) from three sub-experiments
/// given as (ab, ac, bc); each correlation must be in Q2(N).
BellCheck bell_original_lhs(const std::array<PairSpec, 3>& pairs, unsigned N, Convention convention = Convention::CosTheta);

struct CorrelationRecord {
  std::string label;
  std::uint64_t n_trials = 0;
  std::int64_t sum_products = 0;
  std::uint64_t count_a_plus = 0;
  Rational estimate;
  Correlation exact_correlation;
  double standard_error = 0.0;
};

/// i.i.d. outcome pairs with P(A=α, B=β) = (1 + αβc)/4. Deterministic in
/// (pair, n_trials, seed, stream).
CorrelationRecord simulate_subexperiment(const PairSpec& pair, std::uint64_t n_trials, std::uint64_t seed,
                                         std::uint64_t stream = 0, Convention convention = Convention::CosTheta);

struct MonteCarloSummary {
  double a_prime = 0.0;
  double standard_error = 0.0;
  std::array<CorrelationRecord, 4> records;
};

struct ChshReport {
  ExperimentConfig config;
  AStatus a_status;
  APrime a_prime;
  std::optional<MonteCarloSummary> monte_carlo;
  bool violation = false;  // exact A' > 2
  std::uint64_t n_trials = 0;
  std::uint64_t seed = 0;
};

/// Sub-experiments run concurrently on independent seed streams.
ChshReport run_chsh_experiment(const ExperimentConfig& config, std::uint64_t n_trials, std::uint64_t seed);

}  // namespace iset
