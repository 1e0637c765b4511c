// Command-line front end: experiment specs in, CSV tables out.
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "specshape/cli/commands.hpp"
#include "specshape/cli/experiment_spec.hpp"

namespace {

struct CommonArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> formula_mode;
  bool trace = false;
  double rel_tol = 0.03;
  double min_gain = 0.0;
};

void add_common(CLI::App* sub, CommonArgs& args, bool needs_config) {
  auto* cfg = sub->add_option("--config", args.config, "experiment spec (JSON)");
  if (needs_config) cfg->required();
  sub->add_option("--seed", args.seed, "override the spec's base seed");
  sub->add_option("--out", args.out, "output CSV path (overrides the spec)");
  sub->add_option("--formula-mode", args.formula_mode, "as-printed | rederived | both")
      ->check(CLI::IsMember({"as-printed", "rederived", "both"}));
  sub->add_flag("--trace", args.trace, "write a per-slot trace CSV next to the output");
}

specshape::cli::CommandOptions to_options(const CommonArgs& args) {
  specshape::cli::CommandOptions opts;
  opts.out = args.out;
  opts.seed = args.seed;
  opts.formula_mode = args.formula_mode;
  opts.trace = args.trace;
  opts.rel_tol = args.rel_tol;
  opts.min_gain = args.min_gain;
  return opts;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectrum-shaping experiment runner"};
  app.require_subcommand(1);

  CommonArgs analyze_args, simulate_args, compare_args, optk_args;
  int k_max = 12;
  specshape::cli::RlncCheckOptions rlnc;
  std::string emit_path, verify_path;

  auto* analyze = app.add_subcommand("analyze", "closed-form sweep tables");
  add_common(analyze, analyze_args, true);

  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo sweep tables");
  add_common(simulate, simulate_args, true);

  auto* compare = app.add_subcommand("compare", "analysis vs simulation with error bands");
  add_common(compare, compare_args, true);
  compare->add_option("--rel-tol", compare_args.rel_tol,
                      "mean relative-difference band for the base strategy");
  compare->add_option("--min-gain", compare_args.min_gain,
                      "per-point floor for the adaptive gain over random");

  auto* optk = app.add_subcommand("optimal-k", "backoff sweep and recommendation");
  add_common(optk, optk_args, true);
  optk->add_option("--k-max", k_max, "largest backoff to scan")->check(CLI::NonNegativeNumber);

  auto* rcheck = app.add_subcommand("rlnc-check", "codec self-test and test vectors");
  rcheck->add_option("--emit", emit_path, "write generated test vectors to this file");
  rcheck->add_option("--verify", verify_path, "verify test vectors from this file");
  rcheck->add_option("--field-bits", rlnc.field_bits, "symbol width (1, 4, 8 or 16)");
  rcheck->add_option("--gen-size", rlnc.gen_size, "generation size");
  rcheck->add_option("--payload-len", rlnc.payload_len, "payload symbols per packet");
  rcheck->add_option("--count", rlnc.count, "number of vectors to emit");
  rcheck->add_option("--samples", rlnc.samples, "Monte-Carlo samples for the innovation probe");
  rcheck->add_option("--seed", rlnc.seed, "RNG seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze) {
      const auto spec = specshape::cli::spec_from_file(analyze_args.config);
      return specshape::cli::cmd_analyze(spec, to_options(analyze_args), std::cout);
    }
    if (*simulate) {
      const auto spec = specshape::cli::spec_from_file(simulate_args.config);
      return specshape::cli::cmd_simulate(spec, to_options(simulate_args), std::cout);
    }
    if (*compare) {
      const auto spec = specshape::cli::spec_from_file(compare_args.config);
      return specshape::cli::cmd_compare(spec, to_options(compare_args), std::cout);
    }
    if (*optk) {
      const auto spec = specshape::cli::spec_from_file(optk_args.config);
      return specshape::cli::cmd_optimal_k(spec, k_max, to_options(optk_args), std::cout);
    }
    if (*rcheck) {
      if (!emit_path.empty()) rlnc.emit_path = emit_path;
      if (!verify_path.empty()) rlnc.verify_path = verify_path;
      return specshape::cli::cmd_rlnc_check(rlnc, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return specshape::cli::kExitError;
  }
  return specshape::cli::kExitError;
}
