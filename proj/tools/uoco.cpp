// uoco run --config <file> [overrides]
//
// Exit codes: 0 success, 2 configuration error, 3 oracle or projection
// failure, 1 anything else (I/O).

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "uoco/harness.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitOracle = 3;

struct Overrides {
  std::string config_path;
  std::string family, domain, algo, out, summary;
  std::string horizon, dimension, seed;
  bool timing = false;
  int seeds = 1;
  bool parallel = false;
};

int run_command(const Overrides& o) {
  uoco::RunConfig config;
  if (!o.config_path.empty()) config = uoco::load_run_config(o.config_path);
  const std::pair<const char*, const std::string*> flags[] = {
      {"family", &o.family}, {"domain", &o.domain}, {"T", &o.horizon},
      {"d", &o.dimension},   {"seed", &o.seed},     {"algo", &o.algo},
      {"out", &o.out},       {"summary", &o.summary}};
  for (const auto& [key, value] : flags) {
    if (!value->empty()) uoco::apply_setting(config, key, *value);
  }
  if (o.timing) config.timing = true;
  if (o.seeds < 1) throw uoco::ConfigError("--seeds must be positive");

  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < o.seeds; ++i) seeds.push_back(config.family.seed + i);
  const auto exec = o.parallel ? uoco::Execution::kParallel : uoco::Execution::kSerial;
  const std::vector<uoco::Trace> traces = uoco::run_sweep(config, seeds, exec);

  if (!config.summary_out.empty()) {
    std::vector<uoco::RunConfig> configs(traces.size(), config);
    for (std::size_t i = 0; i < configs.size(); ++i) configs[i].family.seed = seeds[i];
    uoco::write_summary_csv(config.summary_out, configs, traces);
  }
  if (config.out.empty() && traces.size() == 1) uoco::write_trace_csv(std::cout, traces[0]);

  int status = 0;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    const auto& tr = traces[i];
    std::cerr << "seed " << seeds[i] << ": regret " << uoco::format_number(tr.final_regret())
              << ", experts " << tr.experts << ", projections " << tr.total_projections
              << (tr.partial ? " (partial)" : "") << '\n';
    if (tr.partial) {
      std::cerr << "  " << tr.error << '\n';
      status = kExitOracle;
    }
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Universal online convex optimization with one projection per round"};
  app.require_subcommand(1);
  Overrides o;
  CLI::App* run = app.add_subcommand("run", "Run one experiment and write its CSV trace");
  run->add_option("--config", o.config_path, "key = value run configuration file");
  run->add_option("--family", o.family, "LinearAdversarial | StronglyConvexQuadratic | "
                                        "ExpConcaveSquared | SmoothRealizable");
  run->add_option("--domain", o.domain, "ball | box | simplex | polytope | halfspaces");
  run->add_option("--T", o.horizon, "horizon");
  run->add_option("--d", o.dimension, "dimension");
  run->add_option("--seed", o.seed, "stream seed");
  run->add_option("--algo", o.algo, "universal | universal-smooth | baseline | ogd | ons");
  run->add_option("--out", o.out, "trace CSV path (stdout when omitted)");
  run->add_option("--summary", o.summary, "summary CSV path");
  run->add_flag("--timing", o.timing, "record wall-clock time per round");
  run->add_option("--seeds", o.seeds, "number of consecutive seeds to run");
  run->add_flag("--parallel", o.parallel, "run seeds on parallel workers");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitConfig;
  }

  try {
    return run_command(o);
  } catch (const uoco::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const uoco::InfeasibleFamily& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const uoco::OracleError& e) {
    std::cerr << "oracle failure: " << e.what() << '\n';
    return kExitOracle;
  } catch (const uoco::NonConvergence& e) {
    std::cerr << "projection failure: " << e.what() << '\n';
    return kExitOracle;
  } catch (const uoco::RangeViolation& e) {
    std::cerr << "range violation: " << e.what() << '\n';
    return kExitOracle;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
