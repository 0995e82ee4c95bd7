// Command line front end: certify, oracle, run and fig1 subcommands.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nashnet/experiment.hpp"
#include "nashnet/version.hpp"

namespace {

using nashnet::Error;

int report(const Error& e) {
  std::cerr << "error [" << nashnet::to_string(e.code()) << "]: " << e.what() << '\n';
  return e.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nash equilibrium seeking over directed row-stochastic networks"};
  app.set_version_flag("--version", std::string(nashnet::kVersion));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;

  auto* certify = app.add_subcommand("certify", "Print the spectral step-size certificate");
  certify->add_option("--config", config_path, "Experiment config (JSON)")->required();

  auto* oracle = app.add_subcommand("oracle", "Solve for the equilibrium centrally");
  oracle->add_option("--config", config_path, "Experiment config (JSON)")->required();

  auto* run = app.add_subcommand("run", "Run the configured algorithm and write a trace");
  run->add_option("--config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--out", out_dir, "Output directory (default: config output_dir)");

  auto* fig1 = app.add_subcommand("fig1", "Run the four comparison variants");
  fig1->add_option("--config", config_path, "Experiment config (JSON)")->required();
  fig1->add_option("--out", out_dir, "Output directory (default: config output_dir)");

  CLI11_PARSE(app, argc, argv);

  try {
    const nashnet::ExperimentConfig cfg = nashnet::load_config(config_path);
    const nashnet::Experiment exp = nashnet::build_experiment(cfg);
    const std::filesystem::path out = out_dir.empty() ? cfg.output_dir : out_dir;

    if (certify->parsed()) {
      std::cout << nashnet::format_certificate(nashnet::cmd_certify(exp));
    } else if (oracle->parsed()) {
      std::cout << nashnet::format_oracle(nashnet::cmd_oracle(exp));
    } else if (run->parsed()) {
      const nashnet::RunArtifacts art = nashnet::cmd_run(exp, out);
      const nashnet::TraceRow& last = art.trace.rows.back();
      std::cout << "trace: " << art.trace_csv.string() << '\n'
                << "iterations: " << last.k << '\n';
      if (last.dist_q) std::cout << "dist_q: " << nashnet::format_real(*last.dist_q) << '\n';
      std::cout << "consensus_residual: "
                << nashnet::format_real(last.consensus_residual) << '\n';
    } else if (fig1->parsed()) {
      const nashnet::Fig1Result res = nashnet::cmd_fig1(exp, out);
      std::cout << "dataset: " << res.csv.string() << '\n';
      for (const auto& v : res.variants) {
        const nashnet::TraceRow& last = v.trace.rows.back();
        std::cout << v.name << ": k=" << last.k;
        if (last.dist_q) std::cout << " dist_q=" << nashnet::format_real(*last.dist_q);
        if (v.trace.truncated) std::cout << " (truncated)";
        std::cout << '\n';
      }
    }
  } catch (const Error& e) {
    return report(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
