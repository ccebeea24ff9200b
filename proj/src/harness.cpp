#include "uoco/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <ostream>

#include "uoco/kernels.hpp"

namespace uoco {

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void validate_diameter_bound(const Domain& domain, int samples, std::uint64_t seed,
                             Execution exec) {
  Rng rng(seed);
  std::vector<Vector> points;
  points.reserve(samples);
  const double reach = 4.0 * std::max(domain.diameter_bound(), 1.0);
  for (int i = 0; i < samples; ++i) {
    Vector p = rng.normal_vector(domain.dimension());
    p *= reach / std::max(p.norm(), 1e-300);
    points.push_back(std::move(p));
  }
  const auto projected = kernels::project_batch(domain, points, exec);
  const double spread = exec == Execution::kParallel
                            ? kernels::max_pairwise_distance_parallel(projected)
                            : kernels::max_pairwise_distance_serial(projected);
  const double allowed =
      domain.diameter_bound() * (1.0 + 1e-9) + 2.0 * domain.projection_tolerance();
  if (spread > allowed) {
    throw ConfigError("observed spread " + format_number(spread) +
                      " exceeds the diameter bound " + format_number(domain.diameter_bound()));
  }
}

RateFit fit_rate(const std::vector<std::pair<double, double>>& checkpoints) {
  if (checkpoints.size() < 4) throw Error("fit_rate needs at least 4 checkpoints");
  RateFit fit;
  fit.points = checkpoints.size();
  for (const auto& [T, regret] : checkpoints) {
    if (!(T > 0.0)) throw Error("fit_rate: checkpoint horizon must be positive");
    if (!(regret > 0.0)) fit.bounded = true;
  }
  auto slope = [&](auto fx, auto fy) {
    double sx = 0, sy = 0;
    for (const auto& c : checkpoints) {
      sx += fx(c);
      sy += fy(c);
    }
    const double n = static_cast<double>(checkpoints.size());
    const double mx = sx / n, my = sy / n;
    double sxy = 0, sxx = 0;
    for (const auto& c : checkpoints) {
      sxy += (fx(c) - mx) * (fy(c) - my);
      sxx += (fx(c) - mx) * (fx(c) - mx);
    }
    return sxx > 0.0 ? sxy / sxx : 0.0;
  };
  using P = std::pair<double, double>;
  fit.log_slope = slope([](const P& c) { return std::log(c.first); },
                        [](const P& c) { return c.second; });
  if (!fit.bounded) {
    fit.exponent = slope([](const P& c) { return std::log(c.first); },
                         [](const P& c) { return std::log(c.second); });
  }
  return fit;
}

UniversalLearner make_learner(const RunConfig& config, const Domain& domain,
                              const LossStream& stream) {
  if (config.G && *config.G < stream.cert.G * (1.0 - 1e-12)) {
    throw ConfigError("G = " + format_number(*config.G) +
                      " is below the stream's gradient bound " + format_number(stream.cert.G));
  }
  UniversalConfig uc;
  uc.horizon = stream.horizon();
  uc.G = config.G.value_or(stream.cert.G);
  uc.D = domain.radius_bound();
  uc.seed = config.family.seed;
  uc.ons_projection = config.ons_projection;
  uc.execution = config.execution;

  ExpertConfig single;
  single.G = uc.G;
  single.D = uc.D;
  single.horizon = uc.horizon;
  single.ons_projection = config.ons_projection;
  const double floor = 1.0 / static_cast<double>(uc.horizon);

  switch (config.algo) {
    case Algo::kUniversal:
      return UniversalLearner(uc, domain);
    case Algo::kUniversalSmooth:
      uc.mode = Mode::kSmallLoss;
      return UniversalLearner(uc, domain);
    case Algo::kBaseline:
      uc.baseline = true;
      return UniversalLearner(uc, domain);
    case Algo::kOgd:
      single.kind = ExpertKind::kCvx;
      return UniversalLearner(uc, domain, {single});
    case Algo::kOns:
      single.kind = ExpertKind::kExp;
      single.modulus = std::clamp(stream.cert.alpha > 0.0 ? stream.cert.alpha : floor, floor, 1.0);
      return UniversalLearner(uc, domain, {single});
  }
  throw ConfigError("unknown algo");
}

namespace {

std::optional<RateFit> growth_from_trace(const Trace& trace, const LossStream& stream,
                                         const Domain& domain) {
  std::vector<std::pair<double, double>> checkpoints;
  const long rounds = static_cast<long>(trace.records.size());
  for (long t = 64; t <= rounds; t *= 2) {
    const double best = comparator_loss(stream, domain, t).value;
    checkpoints.emplace_back(static_cast<double>(t), trace.records[t - 1].cum_loss - best);
  }
  if (checkpoints.size() < 4) return std::nullopt;
  return fit_rate(checkpoints);
}

}  // namespace

Trace run(UniversalLearner& learner, const LossStream& stream, const RunOptions& options) {
  const Domain& domain = learner.domain();
  Trace trace;
  trace.experts = learner.experts().size();
  trace.cert = stream.cert;
  trace.comparator = comparator_loss(stream, domain);
  const Vector& best = trace.comparator.x;

  const std::uint64_t calls_before = domain.projection_calls();
  const long horizon = std::min(stream.horizon(), learner.config().horizon);
  trace.records.reserve(horizon);
  double cum = 0.0, comp_cum = 0.0, delta_sum = 0.0;

  for (long t = 1; t <= horizon; ++t) {
    const LossTerm& term = stream.terms[t - 1];
    const GradientOracle oracle = [&term](const Vector& x) { return term.gradient(x); };

    RoundReport report;
    std::int64_t elapsed = 0;
    try {
      const auto start = std::chrono::steady_clock::now();
      report = learner.round(oracle);
      if (options.timing) {
        elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
      }
    } catch (const std::exception& e) {
      trace.partial = true;
      trace.oracle_failure = true;
      trace.error = "round " + std::to_string(t) + ": " + e.what();
      break;
    }

    RoundRecord rec;
    rec.t = t;
    rec.loss = term.value(report.x);
    const double comp = term.value(best);
    cum += rec.loss;
    comp_cum += comp;
    delta_sum += report.delta;
    rec.cum_loss = cum;
    rec.comp_cum_loss = comp_cum;
    rec.regret = cum - comp_cum;
    rec.proj_count = domain.projection_calls() - calls_before;
    rec.delta_sum = delta_sum;
    rec.wall_ns = elapsed;
    trace.total_wall_ns += elapsed;

    if (options.probe_expert) {
      const std::size_t i = *options.probe_expert;
      const ExpertConfig& cfg = learner.experts().at(i);
      const Vector& yi = report.expert_predictions[i];
      const Vector& g = report.surr_grad;
      const double lam = cfg.modulus;
      DecompositionProbe p;
      p.lhs = g.dot(report.y - best) - 0.5 * lam * (report.x - best).squaredNorm();
      p.meta_term = g.dot(report.y - yi);
      p.expert_term = expert_loss_value(cfg, report.ctx, g, yi) -
                      expert_loss_value(cfg, report.ctx, g, best);
      p.quad_term = 0.5 * lam * (report.x - yi).squaredNorm();
      p.delta = report.delta;
      p.loss_gap = rec.loss - comp;
      rec.probe = p;
    }
    trace.records.push_back(std::move(rec));
  }
  trace.total_projections = domain.projection_calls() - calls_before;
  if (options.fit_growth && !trace.partial) trace.growth = growth_from_trace(trace, stream, domain);
  return trace;
}

Trace run_experiment(const RunConfig& config) {
  const Domain domain = build_domain(config.domain, config.family.dimension, config.family.seed);
  if (domain.kind() == DomainKind::kHalfspaces) {
    validate_diameter_bound(domain, 256, config.family.seed, config.execution);
  }
  const LossStream stream = generate_stream(config.family, domain);
  UniversalLearner learner = make_learner(config, domain, stream);
  domain.reset_projection_calls();
  RunOptions options;
  options.timing = config.timing;
  options.fit_growth = true;
  Trace trace = run(learner, stream, options);
  if (!config.out.empty()) write_trace_csv(config.out, trace);
  return trace;
}

namespace {

std::string with_seed_suffix(const std::string& path, std::uint64_t seed) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  const std::string tag = "_seed" + std::to_string(seed);
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + tag;
  return path.substr(0, dot) + tag + path.substr(dot);
}

}  // namespace

std::vector<Trace> run_sweep(const RunConfig& config, const std::vector<std::uint64_t>& seeds,
                             Execution exec) {
  const long n = static_cast<long>(seeds.size());
  std::vector<Trace> traces(seeds.size());
  std::vector<std::exception_ptr> errors(seeds.size());
#pragma omp parallel for schedule(dynamic, 1) if (exec == Execution::kParallel)
  for (long i = 0; i < n; ++i) {
    try {
      RunConfig local = config;
      local.family.seed = seeds[i];
      if (n > 1 && !local.out.empty()) local.out = with_seed_suffix(config.out, seeds[i]);
      traces[i] = run_experiment(local);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return traces;
}

namespace {

std::string growth_field(const Trace& trace) {
  if (!trace.growth) return "na";
  if (trace.growth->bounded) return "bounded";
  return format_number(trace.growth->exponent);
}

}  // namespace

void write_trace_csv(std::ostream& out, const Trace& trace) {
  out << kCsvHeader << '\n';
  for (const auto& r : trace.records) {
    out << r.t << ',' << format_number(r.loss) << ',' << format_number(r.cum_loss) << ','
        << format_number(r.comp_cum_loss) << ',' << format_number(r.regret) << ','
        << r.proj_count << ',' << format_number(r.delta_sum) << ',' << r.wall_ns << '\n';
  }
  out << "# summary: final_regret=" << format_number(trace.final_regret())
      << ",experts=" << trace.experts << ",total_projections=" << trace.total_projections
      << ",total_wall_ns=" << trace.total_wall_ns << ",growth_exponent=" << growth_field(trace)
      << ",partial=" << (trace.partial ? 1 : 0) << '\n';
}

void write_trace_csv(const std::string& path, const Trace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  write_trace_csv(out, trace);
  if (!out) throw Error("write failed for '" + path + "'");
}

void write_summary_csv(const std::string& path, const std::vector<RunConfig>& configs,
                       const std::vector<Trace>& traces) {
  if (configs.size() != traces.size()) throw Error("summary: config/trace count mismatch");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << "seed,family,algo,T,d,final_regret,experts,total_projections,total_wall_ns,"
         "growth_exponent,partial\n";
  for (std::size_t i = 0; i < traces.size(); ++i) {
    const RunConfig& c = configs[i];
    const Trace& tr = traces[i];
    out << c.family.seed << ',' << to_string(c.family.kind) << ',' << to_string(c.algo) << ','
        << c.family.horizon << ',' << c.family.dimension << ','
        << format_number(tr.final_regret()) << ',' << tr.experts << ','
        << tr.total_projections << ',' << tr.total_wall_ns << ',' << growth_field(tr) << ','
        << (tr.partial ? 1 : 0) << '\n';
  }
  if (!out) throw Error("write failed for '" + path + "'");
}

}  // namespace uoco
