#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "test_support.hpp"
#include "nashnet/experiment.hpp"

namespace nashnet {
namespace {

namespace fs = std::filesystem;

const char* kReference = R"({
  "graph": {"weights": [[0.5, 0.5], [0.25, 0.75]]},
  "game": {"type": "quadratic", "dims": [1, 1], "G": [[2, 1], [1, 2]],
           "g": [-1, 0], "lower": [0, 0], "upper": [5, "inf"]},
  "max_iters": 5000
})";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("nashnet_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
    return e.what();
  }
  ADD_FAILURE() << "config accepted: " << text;
  return {};
}

TEST(Config, Defaults) {
  const ExperimentConfig c = parse_config(kReference);
  EXPECT_EQ(c.algorithm, Algorithm::kKnownEigenvector);
  EXPECT_EQ(c.step.mode, StepConfig::Mode::kAuto);
  EXPECT_EQ(c.max_iters, 5000u);
  EXPECT_TRUE(c.stop_on_tol);
  EXPECT_FALSE(c.log_thinning);
  EXPECT_EQ(c.tolerances.stop, 1e-8);
  const auto& q = std::get<QuadraticConfig>(c.game);
  EXPECT_TRUE(std::isinf(q.upper(1)));
}

TEST(Config, RejectionNamesTheKey) {
  EXPECT_NE(config_error(R"({"game": {"type": "quadratic"}})").find("'graph'"), std::string::npos);
  EXPECT_NE(config_error(R"({"graph": {"weights": [[1]]}, "game": {"type": "quadratic",
    "dims": [1], "G": [[1]], "g": [0]}, "colour": 1})")
                .find("'colour'"),
            std::string::npos);
  EXPECT_NE(config_error(R"({"graph": {"weights": [[1]]}, "game": {"type": "quadratic",
    "dims": [1], "G": [[1]], "g": [0]}, "step": {"mode": "harmonic", "valu": 1}})")
                .find("'step.valu'"),
            std::string::npos);
  EXPECT_NE(config_error(R"({"graph": {"generator": {"topology": "star", "N": 3}},
    "game": {"type": "quadratic", "dims": [1], "G": [[1]], "g": [0]}})")
                .find("'graph.generator.topology'"),
            std::string::npos);
  EXPECT_NE(config_error(R"({"graph": {"weights": [[1]]}, "game": {"type": "quadratic",
    "dims": [1], "G": [[1]], "g": ["x"]}})")
                .find("'game.g[0]'"),
            std::string::npos);
  EXPECT_NE(config_error(R"({"graph": {"weights": [[1]]}, "game": {"type": "cournot",
    "N": 3, "m": 2, "n": 4, "ranges": {"capacity": [3, 1]}}})")
                .find("'game.ranges.capacity'"),
            std::string::npos);
  EXPECT_NE(config_error(R"({"graph": {"weights": [[1]]}, "game": {"type": "quadratic",
    "dims": [1], "G": [[1]], "g": [0]}, "max_iters": -3})")
                .find("'max_iters'"),
            std::string::npos);
  EXPECT_NE(config_error("{not json").find("JSON"), std::string::npos);
}

TEST(Config, BuildErrorsCarrySection) {
  const ExperimentConfig c = parse_config(R"({"graph": {"weights": [[0.5, 0.5], [0, 1]]},
    "game": {"type": "quadratic", "dims": [1, 1], "G": [[1, 0], [0, 1]], "g": [0, 0]}})");
  try {
    build_experiment(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotStronglyConnected);
    EXPECT_EQ(std::string(e.what()).rfind("graph", 0), 0u) << e.what();
  }
}

TEST(Certify, ReferenceReport) {
  const Experiment exp = build_experiment(parse_config(kReference));
  const CertificateReport r = cmd_certify(exp);
  EXPECT_NEAR(r.spectral.sigma_bar, 0.25, 1e-10);
  EXPECT_NEAR(r.constants.ell, std::sqrt(5.0), 1e-14);
  EXPECT_TRUE(r.certificate.admissible());
  const std::string text = format_certificate(r);
  for (const char* key : {"q:", "sigma_bar:", "mu:", "ell0:", "ell:", "mu_bar:", "ell_bar:",
                          "alpha_star:", "rho:"}) {
    EXPECT_NE(text.find(std::string("\n") + key), std::string::npos) << key;
  }
}

TEST(Certify, SingleAgentIsProjectedGradientBound) {
  const Experiment exp = build_experiment(parse_config(R"({"graph": {"weights": [[1]]},
    "game": {"type": "quadratic", "dims": [2], "G": [[3, 0], [0, 1]], "g": [1, 1]}})"));
  const CertificateReport r = cmd_certify(exp);
  EXPECT_EQ(r.spectral.sigma_bar, 0.0);
  // sigma = 0, q = 1: 1 - 2 a mu + a^2 ell^2 = 1 - tol.
  const double mu = 1.0, ell = 3.0, tol = kStepMargin;
  const double root = (mu + std::sqrt(mu * mu - ell * ell * tol)) / (ell * ell);
  EXPECT_NEAR(r.certificate.alpha, root, 1e-10 * root);
}

TEST(Certify, TwentyFirmCournot) {
  const Experiment exp = build_experiment(load_config(fs::path(NASHNET_CONFIG_DIR) / "cournot_n20.json"));
  EXPECT_EQ(exp.game.layout.agents(), 20u);
  EXPECT_EQ(exp.game.layout.total(), 32u);
  const CertificateReport r = cmd_certify(exp);
  EXPECT_GT(r.constants.mu, 0.0);
  EXPECT_GE(r.certificate.alpha, 1e-6);
  EXPECT_LE(r.certificate.alpha, 1e-3);
}

TEST(Run, ReferenceTraceDecaysAndIsDeterministic) {
  const Experiment exp = build_experiment(parse_config(kReference));
  const fs::path a = scratch("run_a"), b = scratch("run_b");
  const RunArtifacts ra = cmd_run(exp, a);
  cmd_run(exp, b);
  EXPECT_EQ(slurp(a / "trace.csv"), slurp(b / "trace.csv"));
  EXPECT_EQ(slurp(a / "certificate.txt"), slurp(b / "certificate.txt"));
  EXPECT_TRUE(fs::exists(a / "metadata.json"));
  EXPECT_TRUE(fs::exists(a / "oracle.txt"));
  const auto& rows = ra.trace.rows;
  ASSERT_GT(rows.size(), 10u);
  for (std::size_t k = 1; k < rows.size(); ++k) {
    EXPECT_LE(*rows[k].dist_q, *rows[k - 1].dist_q * (1 + 1e-12) + 1e-15);
  }
  EXPECT_LE(*rows.back().dist_q, 1e-8);
  // Geometric decay: log distance falls roughly linearly in k.
  EXPECT_LT(*rows[rows.size() / 2].dist_q, 1e-3 * *rows[1].dist_q);
}

TEST(Run, HarmonicOnlineTrace) {
  ExperimentConfig c = parse_config(kReference);
  c.algorithm = Algorithm::kOnlineEigenvector;
  c.step.mode = StepConfig::Mode::kHarmonic;
  c.max_iters = 100'000;
  c.tolerances.stop = 1e-4;
  const RunArtifacts r = cmd_run(build_experiment(c), scratch("harmonic"));
  EXPECT_LE(*r.trace.rows.back().dist_q, 1e-4);
  EXPECT_LE(*r.trace.rows.back().qhat_error, 1e-10);
  const std::string csv = slurp(r.trace_csv);
  EXPECT_EQ(csv.rfind("k,alpha,dist_q,consensus_residual,qhat_error\n0,,", 0), 0u);
}

TEST(Run, DivergenceDumpsLastFiniteState) {
  ExperimentConfig c = parse_config(kReference);
  std::get<QuadraticConfig>(c.game).lower.setConstant(-std::numeric_limits<double>::infinity());
  std::get<QuadraticConfig>(c.game).upper.setConstant(std::numeric_limits<double>::infinity());
  c.step.mode = StepConfig::Mode::kFixed;
  c.step.value = 1e6;
  const fs::path out = scratch("diverge");
  EXPECT_THROW(cmd_run(build_experiment(c), out), NonFiniteStateError);
  EXPECT_TRUE(fs::exists(out / "last_finite_state.csv"));
  EXPECT_TRUE(fs::exists(out / "trace.csv"));
}

TEST(Fig1, SmallInstanceIsDeterministic) {
  const ExperimentConfig c = parse_config(R"({
    "graph": {"generator": {"topology": "random-strongly-connected", "N": 4, "seed": 3}},
    "game": {"type": "cournot", "N": 4, "m": 2, "n": 6, "seed": 3},
    "max_iters": 3000, "trace_thinning": "log2"})");
  const Experiment exp = build_experiment(c);
  const fs::path a = scratch("fig1_a"), b = scratch("fig1_b");
  const Fig1Result r = cmd_fig1(exp, a);
  cmd_fig1(exp, b);
  ASSERT_EQ(r.variants.size(), 4u);
  EXPECT_EQ(slurp(a / "fig1.csv"), slurp(b / "fig1.csv"));
  EXPECT_EQ(slurp(a / "fig1_summary.csv"), slurp(b / "fig1_summary.csv"));
  EXPECT_EQ(slurp(a / "fig1.csv").rfind("variant,k,alpha,dist_q,consensus_residual,qhat_error\n", 0),
            0u);
}

TEST(Cli, ExitCodes) {
  const std::string cli = NASHNET_CLI_PATH;
  if (cli.empty()) GTEST_SKIP() << "command line tool not built";
  const fs::path dir = scratch("cli");
  fs::create_directories(dir);
  const fs::path good = dir / "good.json", bad = dir / "bad.json";
  std::ofstream(good) << kReference;
  std::ofstream(bad) << R"({"graph": {"weights": [[1]]}, "game": {"type": "quadratic",
    "dims": [1], "G": [[1]], "g": [0]}, "bogus": true})";
  auto status = [](const std::string& cmd) {
    const int raw = std::system((cmd + " > /dev/null 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  EXPECT_EQ(status(cli + " certify --config " + good.string()), 0);
  EXPECT_EQ(status(cli + " oracle --config " + good.string()), 0);
  EXPECT_EQ(status(cli + " run --config " + good.string() + " --out " + (dir / "o").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "o" / "trace.csv"));
  EXPECT_EQ(status(cli + " certify --config " + bad.string()),
            static_cast<int>(ErrorCode::kConfig));
  EXPECT_NE(status(cli + " certify --config " + (dir / "missing.json").string()), 0);
}

}  // namespace
}  // namespace nashnet
