#include "app.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  using namespace legendre::app;
  CLI::App cli{"Model Legendre distributions: evaluation, decomposition, corner classification"};
  cli.set_version_flag("--version", kVersion);
  cli.require_subcommand(1);

  std::string config;
  std::string out = ".";
  std::uint64_t seed = 0;
  std::vector<std::string> tols;
  unsigned threads = 0;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"eval", "evaluate the distribution on the configured grid (CSV)"},
      {"decompose", "split an intersecting distribution into alpha f + g"},
      {"classify", "fit corner coefficients and test the Taylor membership criterion"},
      {"witness", "classify u and multiples h u for a list of multipliers"},
      {"lemma-check", "find a transversal primed coordinate for Legendre pairs"}};
  for (const auto& [name, help] : commands) {
    auto* sub = cli.add_subcommand(name, help);
    sub->add_option("--config", config, "scenario file (JSON with comments)")->required();
    sub->add_option("--out", out, "output directory")->capture_default_str();
    sub->add_option("--seed", seed, "seed for randomized checks")->capture_default_str();
    sub->add_option("--tol", tols, "tolerance override KEY=VALUE (repeatable)");
    sub->add_option("--threads", threads, "worker threads for grid sweeps (0 = hardware)")->capture_default_str();
  }
  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = cli.exit(e);
    return rc == 0 ? 0 : kConfigError;
  }
  const std::string command = cli.get_subcommands().front()->get_name();

  RunOptions opt;
  opt.seed = seed;
  opt.threads = threads;
  Outcome o;
  try {
    for (const auto& t : tols) opt.tol_overrides.insert(parse_tol_override(t));
    o = run_command(command, load_config_file(config), opt);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }
  try {
    write_outcome(command, o, out);
  } catch (const std::exception& e) {
    std::cerr << "error: cannot write outputs: " << e.what() << "\n";
    return kConfigError;
  }
  if (!o.message.empty()) std::cerr << (o.exit_code == 0 ? "note: " : "error: ") << o.message << "\n";
  return o.exit_code;
}
