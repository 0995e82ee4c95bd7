#include "nashnet/experiment.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nashnet/version.hpp"

namespace nashnet {

namespace {

namespace fs = std::filesystem;
using Index = Eigen::Index;

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

// Re-raises module errors with the config section that produced them.
template <class F>
auto in_section(const char* section, F&& f) {
  try {
    return f();
  } catch (const NonFiniteStateError&) {
    throw;
  } catch (const Error& e) {
    throw Error(e.code(), std::string(section) + ": " + e.what());
  }
}

Matrix graph_weights(const GraphConfig& cfg) {
  return std::visit(
      Overloaded{
          [](const Matrix& m) { return m; },
          [](const GraphGenerator& gen) {
            if (gen.topology == "ring") return ring_weights(gen.agents, gen.self_weight);
            return random_strongly_connected_weights(
                gen.agents, gen.seed, gen.edge_probability, gen.min_self_weight);
          },
      },
      cfg);
}

QuadraticGame game_of(const GameConfig& cfg) {
  return std::visit(
      Overloaded{
          [](const QuadraticConfig& q) {
            return make_quadratic_game(q.dims, q.G, q.g, q.lower, q.upper);
          },
          [](const CournotSpec& s) { return build_cournot(s); },
          [](const RandomCournotConfig& c) {
            return build_cournot(random_cournot(c.firms, c.markets,
                                                c.total_decisions, c.seed, c.ranges));
          },
          [](const RandomQuadraticConfig& r) {
            return random_quadratic_game(r.dims, r.seed, r.options);
          },
      },
      cfg);
}

std::string join(const Vector& v) {
  std::string out;
  for (Index k = 0; k < v.size(); ++k) {
    if (k) out += ' ';
    out += format_real(v(k));
  }
  return out;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + dir.string() + ": " + ec.message());
}

std::string trace_text(const Trace& trace) {
  std::ostringstream os;
  write_trace_csv(os, trace);
  return os.str();
}

bool needs_certificate(StepConfig::Mode mode) {
  return mode == StepConfig::Mode::kAuto || mode == StepConfig::Mode::kFixedMultiple;
}

const char* algorithm_name(Algorithm a) {
  return a == Algorithm::kKnownEigenvector ? "alg1" : "alg2";
}

RunOptions base_options(const Experiment& exp, const NESolution& oracle) {
  RunOptions opts;
  opts.algorithm = exp.config.algorithm;
  opts.max_iters = exp.config.max_iters;
  opts.tol = exp.config.tolerances.stop;
  opts.stop_on_tol = exp.config.stop_on_tol;
  opts.log_thinning = exp.config.log_thinning;
  opts.target = oracle.x_star;
  return opts;
}

}  // namespace

Experiment build_experiment(const ExperimentConfig& config) {
  Graph graph = in_section("graph", [&] {
    return Graph::validate(graph_weights(config.graph), config.tolerances.row_sum);
  });
  QuadraticGame game = in_section("game", [&] { return game_of(config.game); });
  if (game.layout.agents() != graph.size()) {
    throw Error(ErrorCode::kConfig,
                "game: has " + std::to_string(game.layout.agents()) +
                    " agents but the graph has " + std::to_string(graph.size()));
  }
  SpectralData spectral = in_section(
      "graph", [&] { return pf_eigenvector(graph, config.tolerances.eigen); });
  GameConstants constants = in_section("game", [&] { return game_constants(game); });
  return Experiment{config, std::move(graph), std::move(game), std::move(spectral),
                    constants};
}

CertificateReport cmd_certify(const Experiment& exp) {
  CertificateReport report{exp.spectral, exp.constants, {}};
  report.certificate = in_section("step", [&] {
    return max_step_size(exp.constants, exp.spectral.q, exp.spectral.sigma_bar,
                         exp.config.tolerances.step_margin);
  });
  return report;
}

std::string format_certificate(const CertificateReport& r) {
  const StepCertificate& c = r.certificate;
  std::ostringstream os;
  os << "agents: " << r.spectral.q.size() << '\n'
     << "q: " << join(r.spectral.q) << '\n'
     << "q_min: " << format_real(r.spectral.qmin) << '\n'
     << "q_max: " << format_real(r.spectral.qmax) << '\n'
     << "sigma_bar: " << format_real(r.spectral.sigma_bar) << '\n'
     << "mu: " << format_real(r.constants.mu) << '\n'
     << "ell0: " << format_real(r.constants.ell0) << '\n'
     << "ell: " << format_real(r.constants.ell) << '\n'
     << "mu_bar: " << format_real(c.mu_bar) << '\n'
     << "ell_bar: " << format_real(c.ell_bar) << '\n'
     << "ell0_bar: " << format_real(c.ell0_bar) << '\n'
     << "alpha_star: " << format_real(c.alpha) << '\n'
     << "rho: " << format_real(c.rho) << '\n'
     << "sqrt_rho: " << format_real(c.contraction_factor) << '\n';
  return os.str();
}

NESolution cmd_oracle(const Experiment& exp) {
  return in_section("oracle", [&] { return solve_ne(exp.game, exp.config.tolerances.oracle); });
}

std::string format_oracle(const NESolution& sol) {
  std::ostringstream os;
  os << "x_star: " << join(sol.x_star) << '\n'
     << "residual: " << format_real(sol.residual) << '\n'
     << "gamma: " << format_real(sol.gamma) << '\n'
     << "iterations: " << sol.iterations << '\n'
     << "method: " << (sol.direct ? "linear-solve" : "projected-iteration") << '\n';
  return os.str();
}

StepSchedule resolve_schedule(const StepConfig& step,
                              const std::optional<StepCertificate>& certified) {
  switch (step.mode) {
    case StepConfig::Mode::kFixed: return StepSchedule::fixed(step.value);
    case StepConfig::Mode::kHarmonic: return StepSchedule::harmonic();
    case StepConfig::Mode::kAuto:
    case StepConfig::Mode::kFixedMultiple:
      if (!certified) {
        throw Error(ErrorCode::kNoAdmissibleStep, "step: mode needs a certified step");
      }
      return StepSchedule::fixed(step.mode == StepConfig::Mode::kAuto
                                     ? certified->alpha
                                     : step.factor * certified->alpha);
  }
  throw Error(ErrorCode::kConfig, "step: unknown mode");
}

RunArtifacts cmd_run(const Experiment& exp, const fs::path& out_dir) {
  const auto started = std::chrono::steady_clock::now();
  ensure_dir(out_dir);
  RunArtifacts art;
  art.trace_csv = out_dir / "trace.csv";
  art.certificate = out_dir / "certificate.txt";
  art.oracle = out_dir / "oracle.txt";
  art.metadata = out_dir / "metadata.json";

  const NESolution oracle = cmd_oracle(exp);
  write_file(art.oracle, format_oracle(oracle));

  std::optional<StepCertificate> certified;
  try {
    const CertificateReport report = cmd_certify(exp);
    certified = report.certificate;
    write_file(art.certificate, format_certificate(report));
  } catch (const Error& e) {
    if (needs_certificate(exp.config.step.mode)) throw;
    write_file(art.certificate, std::string("no certificate: ") + e.what() + "\n");
  }
  const StepSchedule schedule = resolve_schedule(exp.config.step, certified);
  RunOptions opts = base_options(exp, oracle);
  opts.schedule = schedule;

  nlohmann::ordered_json meta;
  meta["version"] = kVersion;
  meta["algorithm"] = algorithm_name(exp.config.algorithm);
  meta["agents"] = exp.graph.size();
  meta["dimension"] = exp.game.layout.total();
  if (certified) meta["alpha_star"] = certified->alpha;
  if (schedule.mode() == StepSchedule::Mode::kFixed) meta["alpha"] = schedule.at(0);
  else meta["alpha"] = "1/(k+1)";
  std::visit(Overloaded{[&](const GraphGenerator& g) { meta["graph_seed"] = g.seed; },
                        [](const Matrix&) {}},
             exp.config.graph);
  std::visit(Overloaded{[&](const RandomCournotConfig& c) { meta["game_seed"] = c.seed; },
                        [&](const RandomQuadraticConfig& c) { meta["game_seed"] = c.seed; },
                        [](const auto&) {}},
             exp.config.game);

  auto finish = [&](const Trace& trace, bool diverged) {
    write_file(art.trace_csv, trace_text(trace));
    meta["iterations"] = trace.rows.empty() ? 0 : trace.rows.back().k;
    meta["diverged"] = diverged;
    meta["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    write_file(art.metadata, meta.dump(2) + "\n");
  };

  try {
    RunResult result = run(exp.graph, exp.game.spec(), exp.spectral, opts);
    meta["reached_tol"] = result.reached_tol;
    art.trace = std::move(result.trace);
    finish(art.trace, false);
  } catch (const NonFiniteStateError& e) {
    art.trace = e.partial_trace();
    art.diverged = true;
    finish(art.trace, true);
    std::ostringstream dump;
    dump << "k,stack\n" << e.last_finite().iteration << ',' << join(e.last_finite().stack)
         << '\n';
    write_file(out_dir / "last_finite_state.csv", dump.str());
    throw;
  }
  return art;
}

Fig1Result cmd_fig1(const Experiment& exp, const fs::path& out_dir) {
  ensure_dir(out_dir);
  const NESolution oracle = cmd_oracle(exp);
  const CertificateReport report = cmd_certify(exp);
  const double alpha = report.certificate.alpha;

  struct Spec {
    const char* name;
    Algorithm algorithm;
    std::optional<double> step;  // empty: harmonic
  };
  const Spec specs[] = {
      {"alg1_fixed", Algorithm::kKnownEigenvector, alpha},
      {"alg2_fixed", Algorithm::kOnlineEigenvector, alpha},
      {"alg2_harmonic", Algorithm::kOnlineEigenvector, std::nullopt},
      {"alg1_fixed_x400", Algorithm::kKnownEigenvector, kFig1Multiple * alpha},
  };

  Fig1Result result;
  result.csv = out_dir / "fig1.csv";
  const GameSpec game = exp.game.spec();
  for (const Spec& s : specs) {
    RunOptions opts = base_options(exp, oracle);
    opts.algorithm = s.algorithm;
    opts.schedule = s.step ? StepSchedule::fixed(*s.step) : StepSchedule::harmonic();
    Fig1Variant v;
    v.name = s.name;
    v.alpha = s.step.value_or(0.0);
    try {
      v.trace = run(exp.graph, game, exp.spectral, opts).trace;
    } catch (const NonFiniteStateError& e) {
      v.trace = e.partial_trace();
    }
    result.variants.push_back(std::move(v));
  }

  std::ostringstream csv;
  csv << "variant," << kTraceHeader << '\n';
  std::ostringstream summary;
  summary << "variant,alpha,rows,final_k,final_dist_q,truncated\n";
  for (const Fig1Variant& v : result.variants) {
    for (const TraceRow& row : v.trace.rows) {
      csv << v.name << ',';
      write_trace_row(csv, row);
      csv << '\n';
    }
    const TraceRow& last = v.trace.rows.back();
    summary << v.name << ',' << format_real(v.alpha) << ',' << v.trace.rows.size() << ','
            << last.k << ',' << (last.dist_q ? format_real(*last.dist_q) : "") << ','
            << (v.trace.truncated ? "true" : "false") << '\n';
  }
  write_file(result.csv, csv.str());
  write_file(out_dir / "fig1_summary.csv", summary.str());
  write_file(out_dir / "certificate.txt", format_certificate(report));
  write_file(out_dir / "oracle.txt", format_oracle(oracle));
  return result;
}

}  // namespace nashnet
