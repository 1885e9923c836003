#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "iset/bell.hpp"
#include "iset/cantor.hpp"
#include "iset/errors.hpp"
#include "iset/padic.hpp"
#include "iset/rational_trig.hpp"

namespace iset::cli {

namespace {

using Json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Format { Text, JsonLines, Csv };

struct Manifest {
  std::string command;
  Json parameters = Json::object();
  std::optional<std::uint64_t> seed;
};

std::string timestamp_utc() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream ss;
  ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return ss.str();
}

Json manifest_json(const Manifest& m) {
  Json j;
  j["command"] = m.command;
  j["parameters"] = m.parameters;
  j["seed"] = m.seed ? Json(*m.seed) : Json(nullptr);
  j["version"] = kVersion;
  j["timestamp"] = timestamp_utc();
  return j;
}

Json collect_parameters(const CLI::App* sub) {
  Json params = Json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt == sub->get_help_ptr()) continue;
    const std::string name = opt->get_name();
    const auto& results = opt->results();
    if (opt->get_expected_min() == 0) {
      params[name] = opt->count() > 0;
    } else if (!results.empty()) {
      const bool multi = opt->get_items_expected_max() > 1;
      params[name] = multi ? Json(results) : Json(results.front());
    } else if (!opt->get_default_str().empty()) {
      params[name] = opt->get_default_str();
    }
  }
  return params;
}

void emit(std::ostream& out, Format format, const Manifest& manifest, Json body) {
  Json doc;
  doc["manifest"] = manifest_json(manifest);
  for (auto& [key, value] : body.items()) doc[key] = value;
  if (format == Format::JsonLines) {
    out << doc.dump() << '\n';
  } else {
    out << doc.dump(2) << '\n';
  }
}

void emit_csv_manifest(std::ostream& out, const Manifest& manifest) {
  const Json m = manifest_json(manifest);
  for (const auto& [key, value] : m.items()) {
    out << "# " << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
  }
}

// A well-formed a/0 is a domain error (exit 3); anything unparsable is usage.
Rational operand(const std::string& text) {
  const auto slash = text.find('/');
  if (slash != std::string::npos && slash + 1 < text.size() &&
      text.find_first_not_of('0', slash + 1) == std::string::npos) {
    throw DomainError("zero denominator in '" + text + "'");
  }
  try {
    return parse_rational(text);
  } catch (const DomainError& e) {
    throw UsageError(std::string("cannot parse number: ") + e.what());
  }
}

const std::string& nth(const std::vector<std::string>& operands, std::size_t k, const char* what) {
  if (operands.size() <= k) throw UsageError(std::string("missing operand: ") + what);
  return operands[k];
}

void require_count(const std::vector<std::string>& operands, std::size_t n, const std::string& op) {
  if (operands.size() != n) {
    throw UsageError(op + " expects " + std::to_string(n) + " operand(s), got " + std::to_string(operands.size()));
  }
}

std::string fixed(double v, int decimals) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(decimals) << v;
  return ss.str();
}

std::string scientific(double v) {
  std::ostringstream ss;
  ss << std::scientific << std::setprecision(3) << v;
  return ss.str();
}

Json padic_json(const PAdicRational& x) {
  Json j;
  j["is_zero"] = x.is_zero();
  j["valuation"] = x.is_zero() ? Json(nullptr) : Json(x.valuation());
  j["precision"] = x.precision();
  Json digits = Json::array();
  if (!x.is_zero()) {
    for (Digit d : x.unit().digits()) digits.push_back(d);
  }
  j["unit_digits"] = digits;
  j["norm"] = padic_norm(x).to_string();
  return j;
}

Json norm_json(const PAdicNorm& n) {
  Json j;
  j["result"] = n.to_string();
  j["exponent"] = n.is_zero ? Json(nullptr) : Json(n.exponent);
  return j;
}

// ----------------------------------------------------------------------- padic

struct PadicArgs {
  std::string op;
  std::vector<std::string> operands;
  std::uint64_t p = 0;
  unsigned K = 32;
};

Json run_padic(const PadicArgs& a) {
  auto embed = [&](std::size_t k) { return embed_rational(operand(nth(a.operands, k, "x")), a.p, a.K); };
  if (a.op == "norm") {
    require_count(a.operands, 1, a.op);
    return norm_json(padic_norm(embed(0)));
  }
  if (a.op == "dist") {
    require_count(a.operands, 2, a.op);
    return norm_json(padic_distance(embed(0), embed(1)));
  }
  if (a.op == "embed") {
    require_count(a.operands, 1, a.op);
    return Json{{"result", padic_json(embed(0))}};
  }
  if (a.op == "add" || a.op == "mul") {
    require_count(a.operands, 2, a.op);
    auto x = embed(0);
    auto y = embed(1);
    return Json{{"result", padic_json(a.op == "add" ? padic_add(x, y) : padic_mul(x, y))}};
  }
  throw UsageError("unknown padic operation '" + a.op + "' (norm|dist|add|mul|embed)");
}

// ---------------------------------------------------------------------- cantor

struct CantorArgs {
  std::string op;
  std::vector<std::string> operands;
  std::uint64_t p = 2;
  unsigned depth = 8;
  bool all_levels = false;
  std::uint64_t max_intervals = kDefaultMaxIntervals;
};

CantorPoint encode_point(const std::string& text, std::uint64_t p, unsigned depth) {
  if (depth == 0) throw UsageError("--depth must be positive to encode a point");
  const Rational x = operand(text);
  if (is_prime(p) && p <= std::numeric_limits<Digit>::max()) return cantor_encode(embed_rational(x, p, depth), depth);
  // Composite p: plain base-p digits of a non-negative integer.
  if (x.get_den() != 1 || x < 0) throw DomainError("composite p accepts only non-negative integer preimages");
  Integer z = x.get_num();
  std::vector<Digit> digits(depth, 0);
  for (unsigned k = 0; k < depth; ++k) digits[k] = static_cast<Digit>(mpz_fdiv_q_ui(z.get_mpz_t(), z.get_mpz_t(), p));
  return CantorPoint(p, std::move(digits));
}

Json point_json(const CantorPoint& y) {
  Json address = Json::array();
  for (Digit d : y.address()) address.push_back(d);
  return Json{{"result", to_string(y.coordinate())}, {"address", address}, {"depth", y.depth()}};
}

void run_cantor(const CantorArgs& a, std::ostream& out, const Manifest& manifest, Format format) {
  if (a.op == "iterate") {
    require_count(a.operands, 0, a.op);
    if (format == Format::Csv) {
      std::ostringstream body;
      write_iterate_csv(body, a.p, a.depth, a.all_levels ? 0 : a.depth, a.max_intervals);
      emit_csv_manifest(out, manifest);
      out << body.str();
      return;
    }
    Json levels = Json::array();
    for (unsigned level = a.all_levels ? 0 : a.depth; level <= a.depth; ++level) {
      Json intervals = Json::array();
      for (const auto& iv : construct_iterate(a.p, level, a.max_intervals))
        intervals.push_back(Json::array({to_string(iv.lo), to_string(iv.hi)}));
      levels.push_back(Json{{"level", level}, {"intervals", std::move(intervals)}});
    }
    Json result{{"p", a.p}, {"depth", a.depth}, {"count", levels.back()["intervals"].size()}};
    result["intervals"] = levels.back()["intervals"];
    if (a.all_levels) result["levels"] = std::move(levels);
    emit(out, format, manifest, result);
    return;
  }
  Json result;
  if (a.op == "encode") {
    require_count(a.operands, 1, a.op);
    result = point_json(encode_point(a.operands[0], a.p, a.depth));
  } else if (a.op == "member") {
    require_count(a.operands, 1, a.op);
    auto m = cantor_membership(operand(a.operands[0]), a.p, a.depth);
    result = Json{{"result", m.inside() ? "inside" : "excluded"},
                  {"depth", a.depth},
                  {"excluded_at", m.inside() ? Json(nullptr) : Json(m.excluded_at)}};
  } else if (a.op == "dist") {
    require_count(a.operands, 2, a.op);
    auto y1 = encode_point(a.operands[0], a.p, a.depth);
    auto y2 = encode_point(a.operands[1], a.p, a.depth);
    result = Json{{"D", cantor_distance(y1, y2).to_string()}, {"E", to_string(euclidean_distance(y1, y2))}};
  } else if (a.op == "dim") {
    require_count(a.operands, 0, a.op);
    Interval dim = hausdorff_dimension(a.p);
    result = Json{{"result", fixed(dim.midpoint(), 6)},
                  {"precision", "1e-6"},
                  {"value", dim.midpoint_string(30)},
                  {"enclosure_width", scientific(dim.width())}};
    // p = 2^N + 1: report the log(2^N)/log(2^(N+1)-1) form next to it.
    const std::uint64_t m = a.p - 1;
    if (m >= 2 && (m & (m - 1)) == 0) {
      const auto N = static_cast<unsigned>(std::countr_zero(m));
      Interval alt = hausdorff_dimension_fermat_form(N);
      result["fermat_form"] = alt.midpoint_string(30);
      result["difference"] = scientific(std::abs(dim.midpoint() - alt.midpoint()));
    }
  } else {
    throw UsageError("unknown cantor operation '" + a.op + "' (iterate|encode|member|dist|dim)");
  }
  emit(out, format, manifest, result);
  return;
}

// -------------------------------------------------------------------- triangle

struct TriangleArgs {
  std::string op;
  std::vector<std::string> operands;
  std::string phase;
  unsigned N = 8;
  std::uint64_t budget = kDefaultSearchBudget;
  bool with_right_angle = false;
  bool include_degenerate = false;
};

Json record_json(const TriangleRecord& t) {
  return Json{{"cos_ac", to_string(t.cos_ac)},
              {"cos_bc", to_string(t.cos_bc)},
              {"phase_fraction", to_string(t.phase_fraction)},
              {"value", t.verdict.is_rational() ? Json(to_string(*t.verdict.value)) : Json(nullptr)}};
}

void run_triangle(const TriangleArgs& a, std::ostream& out, const Manifest& manifest, Format format) {
  if (a.op == "search") {
    require_count(a.operands, 0, a.op);
    const PhaseRange range = a.with_right_angle ? PhaseRange::WithRightAngle : PhaseRange::Open;
    SearchReport report = incompatibility_search(a.N, range, a.budget);
    if (format == Format::Csv) {
      emit_csv_manifest(out, manifest);
      write_search_csv(out, report, a.include_degenerate);
      return;
    }
    Json admissible = Json::array();
    for (const auto& t : report.admissible_triples) admissible.push_back(record_json(t));
    Json summary{{"N", report.N},
                 {"phase_range", range == PhaseRange::Open ? "(0, 1/2)" : "(0, 1/2]"},
                 {"count_searched", report.count_searched},
                 {"expected_count", search_size(a.N, range)},
                 {"result", std::to_string(report.admissible_triples.size()) + " admissible non-degenerate"},
                 {"admissible_count", report.admissible_triples.size()},
                 {"degenerate_count", report.degenerate_triples.size()},
                 {"admissible_triples", admissible}};
    emit(out, format, manifest, summary);
    return;
  }
  if (a.phase.empty()) throw UsageError(a.op + " needs --phase");
  require_count(a.operands, 2, a.op);
  const Rational ac = operand(a.operands[0]);
  const Rational bc = operand(a.operands[1]);
  const PhaseAngle phase(operand(a.phase));
  if (a.op == "third") {
    auto side = third_side(ac, bc, phase);
    auto verdict = is_rational(side);
    emit(out, format, manifest,
         Json{{"result", verdict.is_rational() ? to_string(*verdict.value) : "irrational"},
              {"r1", to_string(side.r1)},
              {"r2", to_string(side.r2)},
              {"phase_fraction", to_string(phase.fraction())},
              {"approximation", (verdict.is_rational() ? Interval::from_rational(*verdict.value) : side.enclose())
                                    .midpoint_string(30)}});
    return;
  }
  if (a.op == "check") {
    const bool ok = admissible_third_side(ac, bc, phase, a.N);
    auto verdict = is_rational(third_side(ac, bc, phase));
    emit(out, format, manifest,
         Json{{"result", ok ? "admissible" : "inadmissible"},
              {"N", a.N},
              {"third_side", verdict.is_rational() ? to_string(*verdict.value) : "irrational"}});
    return;
  }
  throw UsageError("unknown triangle operation '" + a.op + "' (third|check|search)");
}

// ------------------------------------------------------------------------ chsh

struct ChshArgs {
  bool standard = false;
  std::vector<std::string> angles;
  unsigned N = 10;
  std::uint64_t n = 100000;
  std::uint64_t seed = kDefaultSeed;
  bool no_is_rule = false;
  bool no_snap = false;
  bool singlet = false;
  std::string realized = "1,1";
  std::optional<double> resolution;
};

ExperimentConfig chsh_config(const ChshArgs& a) {
  if (a.standard == !a.angles.empty()) throw UsageError("give exactly one of --standard or --angles a1 a2 b1 b2");
  ExperimentConfig c = ExperimentConfig::standard(a.N);
  if (!a.angles.empty()) {
    if (a.angles.size() != 4) throw UsageError("--angles takes four fractions of pi: a1 a2 b1 b2");
    c.a1 = Orientation(operand(a.angles[0]));
    c.a2 = Orientation(operand(a.angles[1]));
    c.b1 = Orientation(operand(a.angles[2]));
    c.b2 = Orientation(operand(a.angles[3]));
  }
  if (a.realized.size() != 3 || a.realized[1] != ',' || (a.realized[0] != '1' && a.realized[0] != '2') ||
      (a.realized[2] != '1' && a.realized[2] != '2')) {
    throw UsageError("--realized must be i,j with i, j in {1,2}");
  }
  c.realized_i = a.realized[0] - '0';
  c.realized_j = a.realized[2] - '0';
  c.invariant_set_rule = !a.no_is_rule;
  c.snapped = !a.no_snap;
  c.convention = a.singlet ? Convention::SingletNegCos : Convention::CosTheta;
  c.resolution = a.resolution;
  return c;
}

Json correlation_json(const Correlation& c) {
  return c.is_exact() ? Json(to_string(*c.exact)) : Json(c.enclosure.midpoint_string(30));
}

Json chsh_json(const ChshReport& r) {
  const auto& c = r.config;
  Json config{{"a1", to_string(c.a1.turns())},
              {"a2", to_string(c.a2.turns())},
              {"b1", to_string(c.b1.turns())},
              {"b2", to_string(c.b2.turns())},
              {"angle_unit", "pi"},
              {"realized_pair", std::to_string(c.realized_i) + "," + std::to_string(c.realized_j)},
              {"snapped", c.snapped},
              {"invariant_set_rule", c.invariant_set_rule},
              {"convention", c.convention == Convention::CosTheta ? "cos" : "-cos"},
              {"resolution", c.instrument_resolution()}};
  Json j;
  j["config"] = config;
  j["N"] = c.N;
  j["A_status"] = r.a_status.undefined ? "Undefined" : "Value";
  j["diagnostics"] = r.a_status.off_invariant_set_pairs;
  j["realized_pair_off_invariant_set"] = r.a_status.realized_pair_off_invariant_set;
  if (!r.a_status.undefined) {
    j["A_value"] = r.a_status.value_exact ? Json(to_string(*r.a_status.value_exact))
                                          : Json(r.a_status.value_enclosure->midpoint_string(30));
  }
  j["A_prime_exact"] = to_string(r.a_prime.value);
  j["A_prime"] = fixed(r.a_prime.value.get_d(), 12);
  Json corr = Json::array();
  for (const auto& q : r.a_prime.correlations) corr.push_back(to_string(q));
  j["correlations"] = corr;
  j["violation"] = r.violation;
  if (r.monte_carlo) {
    j["A_prime_mc"] = fixed(r.monte_carlo->a_prime, 9);
    j["stderr"] = fixed(r.monte_carlo->standard_error, 9);
    Json recs = Json::array();
    for (const auto& rec : r.monte_carlo->records) {
      recs.push_back(Json{{"label", rec.label},
                          {"n_trials", rec.n_trials},
                          {"sum_products", rec.sum_products},
                          {"estimate", to_string(rec.estimate)},
                          {"exact_correlation", correlation_json(rec.exact_correlation)},
                          {"standard_error", fixed(rec.standard_error, 9)}});
    }
    j["records"] = recs;
  } else {
    j["A_prime_mc"] = nullptr;
    j["stderr"] = nullptr;
  }
  j["n"] = r.n_trials;
  j["seed"] = r.seed;
  return j;
}

void write_records_csv(std::ostream& out, const ChshReport& r) {
  out << "label,n_trials,sum_products,estimate,exact_correlation,standard_error\n";
  if (!r.monte_carlo) return;
  for (const auto& rec : r.monte_carlo->records) {
    out << '"' << rec.label << "\"," << rec.n_trials << ',' << rec.sum_products << ',' << to_string(rec.estimate) << ','
        << correlation_json(rec.exact_correlation).get<std::string>() << ',' << fixed(rec.standard_error, 9) << '\n';
  }
}

// ------------------------------------------------------------------------ snap

struct SnapArgs {
  std::string cosine;
  std::string theta;
  std::string phase;
  unsigned N = 10;
};

Json run_snap(const SnapArgs& a) {
  const int given = !a.cosine.empty() + !a.theta.empty() + !a.phase.empty();
  if (given != 1) throw UsageError("give exactly one of --cosine, --theta, --phase");
  const Rational bound = pow2(-static_cast<long>(a.N) - 1);
  if (!a.cosine.empty()) {
    const Rational target = operand(a.cosine);
    const Rational snapped = snap_cosine(target, a.N).value();
    return Json{{"result", to_string(snapped)}, {"error", to_string(abs(Rational(snapped - target)))},
                {"bound", to_string(bound)}};
  }
  if (!a.phase.empty()) {
    const Rational target = operand(a.phase);
    const PhaseAngle snapped = snap_phase(target, a.N);
    return Json{{"result", to_string(snapped.fraction())},
                {"error", to_string(abs(Rational(snapped.fraction() - target)))},
                {"bound", to_string(bound)}};
  }
  const double theta = operand(a.theta).get_d();
  const Rational target(std::cos(theta));
  const Rational snapped = snap_cosine(target, a.N).value();
  const double angle_error = std::abs(std::acos(snapped.get_d()) - theta);
  return Json{{"result", to_string(snapped)},
              {"cosine_error", scientific(std::abs(Rational(snapped - target).get_d()))},
              {"angle_error", scientific(angle_error)},
              {"precision", "double"},
              {"angle_bound", scientific(2.0 * default_resolution(a.N))}};
}

// ----------------------------------------------------------------------- sweep

struct SweepArgs {
  std::string experiment;
  std::string range;
  std::string out_path;
};

std::pair<long, long> parse_range(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) throw UsageError("range must look like lo..hi");
  try {
    return {std::stol(text.substr(0, dots)), std::stol(text.substr(dots + 2))};
  } catch (const std::exception&) {
    throw UsageError("range must look like lo..hi");
  }
}

std::string run_sweep(const SweepArgs& a) {
  const auto [lo, hi] = parse_range(a.range);
  std::ostringstream body;
  if (a.experiment == "chsh-vs-N") {
    if (lo < 1 && lo <= hi) throw DomainError("N must be at least 1");
    const Interval tsirelson = sqrt(Interval::from_rational(8));
    body << "N,a_prime_exact,a_prime,gap_to_2sqrt2,gap_bound\n";
    for (long N = lo; N <= hi; ++N) {
      auto config = ExperimentConfig::standard(static_cast<unsigned>(N));
      auto ap = chsh_A_prime(a_prime_subexperiments(config), config.N, config.instrument_resolution());
      const Interval gap = abs(Interval::from_rational(ap.value) - tsirelson);
      body << N << ',' << to_string(ap.value) << ',' << fixed(ap.value.get_d(), 12) << ','
           << gap.midpoint_string(12) << ',' << to_string(pow2(-(N - 2))) << '\n';
    }
  } else if (a.experiment == "dim-vs-p") {
    if (lo < 2 && lo <= hi) throw DomainError("p must be at least 2");
    body << "p,dimension,enclosure_width\n";
    for (long p = lo; p <= hi; ++p) {
      Interval d = hausdorff_dimension(static_cast<std::uint64_t>(p));
      body << p << ',' << d.midpoint_string(17) << ',' << scientific(d.width()) << '\n';
    }
  } else if (a.experiment == "snap-error-vs-N") {
    if (lo < 1 && lo <= hi) throw DomainError("N must be at least 1");
    body << "N,max_angle_error,bound\n";
    for (long N = lo; N <= hi; ++N) {
      body << N << ',' << scientific(max_snap_angle_error(static_cast<unsigned>(N))) << ','
           << scientific(2.0 * default_resolution(static_cast<unsigned>(N))) << '\n';
    }
  } else {
    throw UsageError("unknown sweep '" + a.experiment + "' (chsh-vs-N|dim-vs-p|snap-error-vs-N)");
  }
  return body.str();
}

std::uint64_t budget_from_environment() {
  if (const char* env = std::getenv("ISET_SEARCH_BUDGET")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      // fall through to the default
    }
  }
  return kDefaultSearchBudget;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact p-adic, Cantor-set, rational-trigonometry and CHSH computations", "iset"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();
  bool json_lines = false;
  bool csv = false;
  app.add_flag("--json-lines", json_lines, "One JSON object per line")->configurable(false);
  app.add_flag("--csv", csv, "CSV output where the command has tabular data");

  PadicArgs padic;
  auto* padic_cmd = app.add_subcommand("padic", "p-adic norm, distance and arithmetic");
  padic_cmd->add_option("op", padic.op, "norm|dist|add|mul|embed")->required();
  padic_cmd->add_option("operands", padic.operands, "Rational operands (a or a/b)");
  padic_cmd->add_option("--p", padic.p, "Prime")->required();
  padic_cmd->add_option("--K", padic.K, "Unit digits retained")->capture_default_str();

  CantorArgs cantor;
  auto* cantor_cmd = app.add_subcommand("cantor", "Cantor set C(p) and its address map");
  cantor_cmd->add_option("op", cantor.op, "iterate|encode|member|dist|dim")->required();
  cantor_cmd->add_option("operands", cantor.operands, "Points or preimages");
  cantor_cmd->add_option("--p", cantor.p, "Base p >= 2")->capture_default_str();
  cantor_cmd->add_option("--depth", cantor.depth, "Refinement depth / digits")->capture_default_str();
  cantor_cmd->add_flag("--all-levels", cantor.all_levels, "iterate: dump levels 0..depth");
  cantor_cmd->add_option("--max-intervals", cantor.max_intervals, "iterate: interval budget")->capture_default_str();

  TriangleArgs triangle;
  triangle.budget = budget_from_environment();
  auto* triangle_cmd = app.add_subcommand("triangle", "Cosine rule admissibility");
  triangle_cmd->add_option("op", triangle.op, "third|check|search")->required();
  triangle_cmd->add_option("operands", triangle.operands, "cos_ac cos_bc");
  triangle_cmd->add_option("--phase", triangle.phase, "Apex angle as a fraction of pi");
  triangle_cmd->add_option("--N", triangle.N, "Admissibility level")->capture_default_str();
  triangle_cmd->add_option("--budget", triangle.budget, "search: maximum triples")->capture_default_str();
  triangle_cmd->add_flag("--with-right-angle", triangle.with_right_angle, "search: include phase 1/2");
  triangle_cmd->add_flag("--include-degenerate", triangle.include_degenerate, "search --csv: also list degenerate triples");

  ChshArgs chsh;
  auto* chsh_cmd = app.add_subcommand("chsh", "CHSH A versus A'");
  chsh_cmd->add_flag("--standard", chsh.standard, "a1=0, a2=1/2, b1=1/4, b2=3/4 (units of pi)");
  chsh_cmd->add_option("--angles", chsh.angles, "a1 a2 b1 b2 as fractions of pi")->expected(4);
  chsh_cmd->add_option("--N", chsh.N, "Admissibility level")->capture_default_str();
  chsh_cmd->add_option("--n", chsh.n, "Trials per sub-experiment (0 skips Monte Carlo)")->capture_default_str();
  chsh_cmd->add_option("--seed", chsh.seed, "Seed")->capture_default_str();
  chsh_cmd->add_flag("--no-is-rule", chsh.no_is_rule, "Evaluate A as a plain number");
  chsh_cmd->add_flag("--no-snap", chsh.no_snap, "Use nominal orientations without snapping");
  chsh_cmd->add_flag("--singlet", chsh.singlet, "Corr = -cos theta");
  chsh_cmd->add_option("--realized", chsh.realized, "Realized setting pair i,j")->capture_default_str();
  chsh_cmd->add_option("--resolution", chsh.resolution, "Instrument resolution in radians");

  SnapArgs snap;
  auto* snap_cmd = app.add_subcommand("snap", "Snap a cosine, angle or phase to Q2(N)");
  snap_cmd->add_option("--cosine", snap.cosine, "Target cosine");
  snap_cmd->add_option("--theta", snap.theta, "Target angle in radians");
  snap_cmd->add_option("--phase", snap.phase, "Target phase fraction of pi");
  snap_cmd->add_option("--N", snap.N, "Level")->capture_default_str();

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Parameter sweeps as CSV");
  sweep_cmd->add_option("experiment", sweep.experiment, "chsh-vs-N|dim-vs-p|snap-error-vs-N")->required();
  sweep_cmd->add_option("--range", sweep.range, "lo..hi inclusive")->required();
  sweep_cmd->add_option("--out", sweep.out_path, "Output file (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  const Format format = csv ? Format::Csv : json_lines ? Format::JsonLines : Format::Text;

  try {
    if (padic_cmd->parsed()) {
      Manifest m{"padic " + padic.op, collect_parameters(padic_cmd), std::nullopt};
      emit(out, format, m, run_padic(padic));
    } else if (cantor_cmd->parsed()) {
      Manifest m{"cantor " + cantor.op, collect_parameters(cantor_cmd), std::nullopt};
      run_cantor(cantor, out, m, format);
    } else if (triangle_cmd->parsed()) {
      Manifest m{"triangle " + triangle.op, collect_parameters(triangle_cmd), std::nullopt};
      m.parameters["--budget"] = std::to_string(triangle.budget);
      run_triangle(triangle, out, m, format);
    } else if (chsh_cmd->parsed()) {
      Manifest m{"chsh", collect_parameters(chsh_cmd), chsh.seed};
      ChshReport report = run_chsh_experiment(chsh_config(chsh), chsh.n, chsh.seed);
      if (format == Format::Csv) {
        emit_csv_manifest(out, m);
        write_records_csv(out, report);
      } else {
        emit(out, format, m, chsh_json(report));
      }
    } else if (snap_cmd->parsed()) {
      Manifest m{"snap", collect_parameters(snap_cmd), std::nullopt};
      emit(out, format, m, run_snap(snap));
    } else if (sweep_cmd->parsed()) {
      Manifest m{"sweep " + sweep.experiment, collect_parameters(sweep_cmd), std::nullopt};
      const std::string body = run_sweep(sweep);
      if (sweep.out_path.empty()) {
        emit_csv_manifest(out, m);
        out << body;
      } else {
        std::ofstream file(sweep.out_path);
        if (!file) throw DomainError("cannot open " + sweep.out_path);
        emit_csv_manifest(file, m);
        file << body;
        emit(out, format, m, Json{{"result", sweep.out_path}});
      }
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ResourceError& e) {
    err << "resource budget exceeded: " << e.what() << " (completed " << e.partial_count() << ")\n";
    return kResource;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kDomain;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return kOk;
}

}  // namespace iset::cli
