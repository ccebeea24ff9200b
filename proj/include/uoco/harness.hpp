#ifndef UOCO_HARNESS_HPP_
#define UOCO_HARNESS_HPP_

// Experiment harness: run configuration, trace recording, CSV output and
// rate fitting.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "uoco/domains.hpp"
#include "uoco/streams.hpp"
#include "uoco/universal.hpp"

namespace uoco {

enum class Algo { kUniversal, kUniversalSmooth, kBaseline, kOgd, kOns };

std::string to_string(Algo algo);
Algo parse_algo(const std::string& name);

struct DomainConfig {
  /// ball | box | simplex | polytope | halfspaces
  std::string kind = "ball";
  double radius = 1.0;      // ball
  double half_width = 1.0;  // box without explicit bounds, polytope
  std::vector<double> lower, upper;
  double scale = 1.0;       // simplex
  int halfspace_count = 0;  // polytope: total number of rows
  std::vector<Halfspace> rows;  // halfspaces: explicit rows
  double diameter = 0.0;        // halfspaces: caller-supplied bound
  double tolerance = Domain::kDefaultTolerance;
  int max_sweeps = Domain::kDefaultMaxSweeps;
};

struct RunConfig {
  ProblemFamily family;
  DomainConfig domain;
  Algo algo = Algo::kUniversal;
  OnsProjection ons_projection = OnsProjection::kExact;
  std::optional<double> G;  // defaults to the stream certificate
  std::string out;
  std::string summary_out;
  bool timing = false;
  Execution execution = Execution::kSerial;
};

/// Applies one key=value setting. Throws ConfigError on unknown keys or
/// malformed values. Shared by the config file reader and the CLI flags.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

/// Parses the key=value format: one setting per line, '#' starts a comment,
/// `halfspace = a1 a2 ... : b` may repeat.
RunConfig parse_run_config(std::istream& in);
RunConfig load_run_config(const std::string& path);

/// Builds the domain for the configured dimension. The polytope is seeded by
/// the family seed.
Domain build_domain(const DomainConfig& config, int dimension, std::uint64_t seed);

/// Projects far-away sample points and rejects the domain when the observed
/// spread exceeds its diameter bound.
void validate_diameter_bound(const Domain& domain, int samples = 256, std::uint64_t seed = 7,
                             Execution exec = Execution::kSerial);

/// Per-round check of the regret decomposition for one strongly convex expert
/// against a fixed comparator x.
struct DecompositionProbe {
  double lhs = 0.0;          // <g, y_t - x> - lambda/2 ||x_t - x||^2
  double meta_term = 0.0;    // <g, y_t - y_i>
  double expert_term = 0.0;  // l(y_i) - l(x) for the expert's own loss
  double quad_term = 0.0;    // lambda/2 ||x_t - y_i||^2
  double delta = 0.0;
  double loss_gap = 0.0;     // f_t(x_t) - f_t(x)
  double identity_residual() const { return lhs - (meta_term + expert_term - quad_term); }
  /// Nonnegative when the expert's modulus does not exceed the stream's.
  double inequality_slack() const {
    return meta_term + expert_term - quad_term - delta - loss_gap;
  }
};

struct RoundRecord {
  long t = 0;
  double loss = 0.0;
  double cum_loss = 0.0;
  double comp_cum_loss = 0.0;
  double regret = 0.0;
  std::uint64_t proj_count = 0;
  double delta_sum = 0.0;
  std::int64_t wall_ns = 0;
  std::optional<DecompositionProbe> probe;
};

struct RateFit {
  bool bounded = false;
  double exponent = 0.0;   // slope of log regret against log T
  double log_slope = 0.0;  // slope of regret against ln T
  std::size_t points = 0;
};

/// Least-squares fits over (T, regret) checkpoints. Needs at least 4 points;
/// any nonpositive regret makes the result "bounded".
RateFit fit_rate(const std::vector<std::pair<double, double>>& checkpoints);

struct RunOptions {
  bool timing = false;
  /// Expert index to audit with a DecompositionProbe each round.
  std::optional<std::size_t> probe_expert;
  /// Fit a growth exponent from prefix regrets at power-of-two rounds.
  bool fit_growth = false;
};

struct Trace {
  std::vector<RoundRecord> records;
  std::size_t experts = 0;
  std::uint64_t total_projections = 0;
  std::int64_t total_wall_ns = 0;
  ComparatorResult comparator;
  Certificates cert;
  std::optional<RateFit> growth;
  bool partial = false;
  std::string error;
  bool oracle_failure = false;

  double final_regret() const { return records.empty() ? 0.0 : records.back().regret; }
};

/// The learner a run config asks for.
UniversalLearner make_learner(const RunConfig& config, const Domain& domain,
                              const LossStream& stream);

/// Plays the stream with the learner. Oracle or projection failures stop the
/// run and return a partial trace instead of throwing.
Trace run(UniversalLearner& learner, const LossStream& stream, const RunOptions& options = {});

/// Full pipeline: domain, stream, learner, trace. Writes config.out when set.
Trace run_experiment(const RunConfig& config);

/// Runs the config once per seed; independent runs go to parallel workers.
/// Output files get a _seed<k> suffix when more than one seed is given.
std::vector<Trace> run_sweep(const RunConfig& config, const std::vector<std::uint64_t>& seeds,
                             Execution exec);

inline constexpr const char* kCsvHeader =
    "t,loss,cum_loss,comp_cum_loss,regret,proj_count,delta_sum,wall_ns";

void write_trace_csv(std::ostream& out, const Trace& trace);
void write_trace_csv(const std::string& path, const Trace& trace);

/// One row per run: seed, family, algo, T, d, final regret, experts,
/// projections, wall time, growth exponent, partial flag.
void write_summary_csv(const std::string& path, const std::vector<RunConfig>& configs,
                       const std::vector<Trace>& traces);

std::string format_number(double value);

}  // namespace uoco

#endif  // UOCO_HARNESS_HPP_
