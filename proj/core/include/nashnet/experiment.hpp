#pragma once

// Config-driven experiment runner behind the command line tool.
//
// A config is a JSON document:
//
//   {
//     "graph": {"weights": [[...], ...]}
//            | {"generator": {"topology": "ring" | "random-strongly-connected",
//                             "N": 20, "seed": 1, "edge_probability": 0.3,
//                             "min_self_weight": 0.1, "self_weight": 0.5}},
//     "game": {"type": "quadratic", "dims": [...], "G": [[...]], "g": [...],
//              "lower": [...], "upper": [...]}
//           | {"type": "cournot", "N": 20, "m": 7, "n": 32, "seed": 7,
//              "ranges": {"production_cost": [14, 16], ...}}
//           | {"type": "cournot", "participation": [[...]], "production_cost":
//              [[...]], "qi_cost": [[...]], "capacity": [[...]],
//              "price_intercept": [...], "price_slope": [...]}
//           | {"type": "random_quadratic", "dims": [...], "seed": 3, "mu": 1,
//              "coupling": 0.5, "box_halfwidth": 0},
//     "algorithm": "alg1" | "alg2",
//     "step": {"mode": "auto" | "fixed" | "harmonic" | "fixed-multiple",
//              "value": 1e-3, "factor": 400},
//     "max_iters": 1000000,
//     "stop_on_tol": true,
//     "trace_thinning": "none" | "log2",
//     "tolerances": {"row_sum": 1e-12, "eigen": 1e-12, "step_margin": 1e-6,
//                    "oracle": 1e-12, "stop": 1e-8},
//     "output_dir": "out"
//   }
//
// Every key is optional except "graph" and "game"; unknown keys are rejected
// with the offending path in the message. Bounds accept null, "inf" or
// "-inf".

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nashnet/dynamics.hpp"
#include "nashnet/games.hpp"
#include "nashnet/graph.hpp"
#include "nashnet/oracle.hpp"
#include "nashnet/rates.hpp"

namespace nashnet {

struct GraphGenerator {
  std::string topology = "random-strongly-connected";
  std::size_t agents = 0;
  std::uint64_t seed = 0;
  double edge_probability = 0.3;
  double min_self_weight = 0.1;
  double self_weight = 0.5;
};

using GraphConfig = std::variant<Matrix, GraphGenerator>;

struct QuadraticConfig {
  std::vector<std::size_t> dims;
  Matrix G;
  Vector g;
  Vector lower;
  Vector upper;
};

struct RandomCournotConfig {
  std::size_t firms = 20;
  std::size_t markets = 7;
  std::size_t total_decisions = 32;
  std::uint64_t seed = 0;
  CournotRanges ranges;
};

struct RandomQuadraticConfig {
  std::vector<std::size_t> dims;
  std::uint64_t seed = 0;
  RandomQuadraticOptions options;
};

using GameConfig = std::variant<QuadraticConfig, CournotSpec,
                                RandomCournotConfig, RandomQuadraticConfig>;

struct StepConfig {
  enum class Mode { kAuto, kFixed, kHarmonic, kFixedMultiple };
  Mode mode = Mode::kAuto;
  double value = 0.0;   // kFixed
  double factor = 1.0;  // kFixedMultiple
};

struct ToleranceConfig {
  double row_sum = kRowSumTolerance;
  double eigen = kEigenTolerance;
  double step_margin = kStepMargin;
  double oracle = 1e-12;
  double stop = 1e-8;
};

struct ExperimentConfig {
  GraphConfig graph;
  GameConfig game;
  Algorithm algorithm = Algorithm::kKnownEigenvector;
  StepConfig step;
  std::size_t max_iters = 1'000'000;
  bool stop_on_tol = true;
  bool log_thinning = false;
  ToleranceConfig tolerances;
  std::string output_dir = "out";
};

/// Parses and validates a config document; throws kConfig naming the key.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Graph, game, spectral data and constants assembled from a config.
struct Experiment {
  ExperimentConfig config;
  Graph graph;
  QuadraticGame game;
  SpectralData spectral;
  GameConstants constants;
};

Experiment build_experiment(const ExperimentConfig& config);

struct CertificateReport {
  SpectralData spectral;
  GameConstants constants;
  StepCertificate certificate;
};

CertificateReport cmd_certify(const Experiment& exp);
std::string format_certificate(const CertificateReport& report);

NESolution cmd_oracle(const Experiment& exp);
std::string format_oracle(const NESolution& sol);

/// Step schedule selected by the config; `certified` is alpha* when the mode
/// needs it.
StepSchedule resolve_schedule(const StepConfig& step,
                              const std::optional<StepCertificate>& certified);

struct RunArtifacts {
  std::filesystem::path trace_csv;
  std::filesystem::path certificate;
  std::filesystem::path oracle;
  std::filesystem::path metadata;
  Trace trace;
  bool diverged = false;
};

/// Oracle, then the configured algorithm. Writes trace.csv, certificate.txt,
/// oracle.txt and metadata.json under `out_dir`. A non-finite iterate dumps
/// last_finite_state.csv and rethrows.
RunArtifacts cmd_run(const Experiment& exp, const std::filesystem::path& out_dir);

struct Fig1Variant {
  std::string name;
  Trace trace;
  double alpha = 0.0;  // 0 for the harmonic schedule
};

struct Fig1Result {
  std::filesystem::path csv;
  std::vector<Fig1Variant> variants;
};

/// Four variants: alg1 and alg2 at alpha*, alg2 with harmonic steps and alg1
/// at 400 alpha*. Writes fig1.csv (long format, one block per variant with
/// the trace columns prefixed by `variant`) and fig1_summary.csv. A diverging
/// variant is kept as a truncated trace.
Fig1Result cmd_fig1(const Experiment& exp, const std::filesystem::path& out_dir);

constexpr double kFig1Multiple = 400.0;

}  // namespace nashnet
