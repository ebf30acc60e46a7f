#include "ibilab/runner.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "ibilab/prolate.hpp"
#include "ibilab/rng.hpp"

namespace ibilab {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

class OutputSet {
 public:
  explicit OutputSet(const std::string& out_dir) : dir_(out_dir) {
    fs::create_directories(dir_);
  }

  std::string path(const std::string& name) {
    names_.push_back(name);
    return (dir_ / name).string();
  }

  // Manifest carries everything needed to reproduce the run bit-for-bit.
  void finish(const ExperimentConfig& config, const std::string& command, double wall_ms,
              RunResult* result) {
    json manifest{{"command", command},
                  {"config", config_to_json(config)},
                  {"seed", config.seed},
                  {"prng", rng::kPrngId},
                  {"version", kVersion},
                  {"wall_clock_ms", wall_ms},
                  {"outputs", names_}};
    std::ofstream out(dir_ / "manifest.json");
    out << manifest.dump(2) << "\n";
    names_.push_back("manifest.json");
    result->outputs = names_;
    committed_ = true;
  }

  ~OutputSet() {
    if (committed_) return;
    std::error_code ec;
    for (const auto& name : names_) fs::remove(dir_ / name, ec);
  }

 private:
  fs::path dir_;
  std::vector<std::string> names_;
  bool committed_ = false;
};

class Stopwatch {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::vector<IbiReport> sweep_for(const ExperimentConfig& config) {
  return s2ibi_sweep(config.domains, config.etas, config.channel, config.layout, config.threads);
}

std::vector<BerCurve> ber_for(const ExperimentConfig& config) {
  std::vector<BerCurve> curves;
  for (Domain domain : config.domains) {
    for (double eta : config.etas) {
      SimConfig sim;
      sim.domain = domain;
      sim.utilization = eta;
      sim.layout = config.layout;
      sim.channel = config.channel;
      sim.snr_grid_db = config.snr_grid_db;
      sim.num_frames = config.num_frames;
      sim.seed = config.seed;
      curves.push_back(run_ber(sim, config.threads));
    }
  }
  return curves;
}

}  // namespace

void write_s2ibi_csv(const std::string& path, const std::vector<IbiReport>& table,
                     std::uint64_t seed) {
  std::ofstream out(path);
  out << "domain,eta,s2ibi_db,s2ibi_bound_db,ibi_energy,bound_energy,channel_id,seed\n";
  for (const auto& r : table) {
    out << to_string(r.domain) << ',' << fmt17(r.eta) << ',' << fmt17(r.s2ibi_db) << ','
        << (r.s2ibi_lower_bound_db ? fmt17(*r.s2ibi_lower_bound_db) : "") << ','
        << fmt17(r.total_energy) << ',' << (r.bound_energy ? fmt17(*r.bound_energy) : "") << ','
        << r.channel_id << ',' << seed << '\n';
  }
}

void write_bound_csv(const std::string& path, const std::vector<IbiReport>& table,
                     std::uint64_t seed) {
  std::ofstream out(path);
  out << "domain,eta,bound_energy,s2ibi_bound_db,channel_id,seed\n";
  for (const auto& r : table) {
    out << to_string(r.domain) << ',' << fmt17(r.eta) << ','
        << (r.bound_energy ? fmt17(*r.bound_energy) : "") << ','
        << (r.s2ibi_lower_bound_db ? fmt17(*r.s2ibi_lower_bound_db) : "") << ','
        << r.channel_id << ',' << seed << '\n';
  }
}

void write_ber_csv(const std::string& path, const std::vector<BerCurve>& curves) {
  std::ofstream out(path);
  out << "domain,eta,snr_db,ber,errors,bits,ci_low,ci_high,seed\n";
  for (const auto& c : curves)
    for (const auto& p : c.points)
      out << to_string(c.domain) << ',' << fmt17(c.eta) << ',' << fmt17(p.snr_db) << ','
          << fmt17(p.ber) << ',' << p.error_count << ',' << p.bit_count << ','
          << fmt17(p.ci_low) << ',' << fmt17(p.ci_high) << ',' << c.seed << '\n';
}

RunResult run_dpss_dump(const ExperimentConfig& config, const std::string& out_dir,
                        const std::string& csv_name) {
  Stopwatch clock;
  RunResult result;
  OutputSet outputs(out_dir);
  const DpssSet set =
      generate_dpss(config.dpss_length, config.dpss_half_bandwidth, config.dpss_order);
  std::ofstream out(outputs.path(csv_name));
  for (int l = 0; l < set.order; ++l) out << (l ? "," : "") << fmt17(set.eigenvalues[l]);
  out << '\n';
  for (int i = 0; i < set.length; ++i) {
    for (int l = 0; l < set.order; ++l) out << (l ? "," : "") << fmt17(set.sequences(i, l));
    out << '\n';
  }
  out.close();
  outputs.finish(config, "dpss dump", clock.ms(), &result);
  return result;
}

RunResult run_s2ibi(const ExperimentConfig& config, const std::string& out_dir,
                    const std::string& csv_name) {
  Stopwatch clock;
  RunResult result;
  OutputSet outputs(out_dir);
  write_s2ibi_csv(outputs.path(csv_name), sweep_for(config), config.seed);
  outputs.finish(config, "s2ibi", clock.ms(), &result);
  return result;
}

RunResult run_bound(const ExperimentConfig& config, const std::string& out_dir,
                    const std::string& csv_name) {
  Stopwatch clock;
  RunResult result;
  OutputSet outputs(out_dir);
  std::vector<IbiReport> table;
  for (Domain domain : config.domains) {
    for (double eta : config.etas) {
      const SignalingBasis basis = build_basis(domain, config.layout.block_length, eta);
      const int subset = config.bound_subset.value_or(basis.used_dims);
      IbiReport report;
      report.domain = domain;
      report.eta = basis.utilization;
      report.used_dims = basis.used_dims;
      report.channel_id = config.channel.id;
      report.layout = config.layout;
      const double bound =
          ibi_bound(basis, config.layout, config.channel, subset, config.threads);
      report.bound_energy = bound;
      report.bound_vacuous = bound == 0.0;
      report.s2ibi_lower_bound_db = -10.0 * std::log10(bound / subset);
      table.push_back(std::move(report));
    }
  }
  write_bound_csv(outputs.path(csv_name), table, config.seed);
  outputs.finish(config, "bound", clock.ms(), &result);
  return result;
}

RunResult run_ber_command(const ExperimentConfig& config, const std::string& out_dir,
                          const std::string& csv_name) {
  Stopwatch clock;
  RunResult result;
  OutputSet outputs(out_dir);
  write_ber_csv(outputs.path(csv_name), ber_for(config));
  outputs.finish(config, "ber", clock.ms(), &result);
  return result;
}

RunResult run_reproduce(const ExperimentConfig& config, const std::string& out_dir) {
  Stopwatch clock;
  RunResult result;
  OutputSet outputs(out_dir);
  for (const char* preset : {"mild-fractional", "mild-integer", "severe-fractional",
                             "severe-integer"}) {
    ExperimentConfig sub = config;
    sub.channel_preset = preset;
    sub.channel = channel_preset(preset, config.seed);
    const std::string tag(preset);
    write_s2ibi_csv(outputs.path("s2ibi_" + tag + ".csv"), sweep_for(sub), sub.seed);
    write_ber_csv(outputs.path("ber_" + tag + ".csv"), ber_for(sub));
  }
  outputs.finish(config, "reproduce-paper", clock.ms(), &result);
  return result;
}

}  // namespace ibilab
