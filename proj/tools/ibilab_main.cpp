#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ibilab/errors.hpp"
#include "ibilab/runner.hpp"

namespace {

struct GlobalArgs {
  std::string config_path;
  std::string out_dir = "out";
  std::string seed_str;
  int threads = -1;
  bool verbose = false;
};

ibilab::ExperimentConfig load_config(const GlobalArgs& args) {
  ibilab::ExperimentConfig cfg = args.config_path.empty()
                                     ? ibilab::parse_config_json(nlohmann::json::object())
                                     : ibilab::parse_config_file(args.config_path);
  if (!args.seed_str.empty()) {
    const std::uint64_t seed = std::stoull(args.seed_str);
    cfg.seed = seed;
    // Config channels were resolved with the file's seed; presets re-resolve.
    if (!cfg.channel_preset.empty()) cfg.channel = ibilab::channel_preset(cfg.channel_preset, seed);
  }
  if (args.threads >= 0) cfg.threads = args.threads;
  if (const char* env = std::getenv("IBILAB_THREADS")) {
    if (args.threads < 0) cfg.threads = std::max(0, std::atoi(env));
  }
  return cfg;
}

void report(const GlobalArgs& args, const ibilab::RunResult& result) {
  if (!args.verbose) return;
  for (const auto& name : result.outputs)
    std::cerr << "wrote " << args.out_dir << "/" << name << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Block-transmission interference laboratory: DPSS signaling, exact "
               "inter-block interference, tail-energy bounds and BER simulation"};
  app.require_subcommand(1);
  app.fallthrough();  // accept global flags after the subcommand

  GlobalArgs args;
  app.add_option("--config", args.config_path, "JSON experiment config ('-' for stdin)");
  app.add_option("--out", args.out_dir, "Output directory (default: out)");
  app.add_option("--seed", args.seed_str, "Seed override (decimal uint64)");
  app.add_option("--threads", args.threads, "Worker threads (0 = all cores)");
  app.add_flag("--verbose", args.verbose, "List written artifacts on stderr");

  auto* dpss = app.add_subcommand("dpss", "Discrete prolate spheroidal sequence tools");
  auto* dump = dpss->add_subcommand("dump", "Write sequences + eigenvalue header row as CSV");
  int dump_length = 129, dump_order = 0;
  double dump_w = 0.5;
  std::string dump_out = "dpss.csv";
  dump->add_option("--length", dump_length, "Sequence length N")->required();
  dump->add_option("--half-bandwidth", dump_w, "Half bandwidth W in (0, 0.5]")->required();
  dump->add_option("--order", dump_order, "Number of sequences K <= N")->required();
  dump->add_option("--out", dump_out, "Output CSV file name");

  auto* s2ibi = app.add_subcommand("s2ibi", "Exact S2IBI and bound sweep, CSV output");
  auto* bound = app.add_subcommand("bound", "Interference upper bound sweep, CSV output");
  auto* ber = app.add_subcommand("ber", "Monte-Carlo BER vs SNR, CSV output");
  auto* repro = app.add_subcommand(
      "reproduce-paper", "Full reference experiment set: 4 S2IBI tables + 4 BER tables");

  CLI11_PARSE(app, argc, argv);

  try {
    ibilab::ExperimentConfig cfg = load_config(args);
    ibilab::RunResult result;
    if (dump->parsed()) {
      cfg.dpss_length = dump_length;
      cfg.dpss_half_bandwidth = dump_w;
      cfg.dpss_order = dump_order;
      result = ibilab::run_dpss_dump(cfg, args.out_dir, dump_out);
    } else if (s2ibi->parsed()) {
      result = ibilab::run_s2ibi(cfg, args.out_dir);
    } else if (bound->parsed()) {
      result = ibilab::run_bound(cfg, args.out_dir);
    } else if (ber->parsed()) {
      result = ibilab::run_ber_command(cfg, args.out_dir);
    } else if (repro->parsed()) {
      result = ibilab::run_reproduce(cfg, args.out_dir);
    } else {
      std::cerr << "error: no action (try --help)\n";
      return 2;
    }
    report(args, result);
    return 0;
  } catch (const ibilab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ibilab::numerical_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
