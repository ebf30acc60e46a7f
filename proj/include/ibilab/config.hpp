#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ibilab/basis.hpp"
#include "ibilab/channel.hpp"

namespace ibilab {

// Raised on malformed documents, schema violations and out-of-range values;
// the CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// One experiment description covering all subcommands. `{}` resolves to the
// reference setup: N=129, L=21, D=16, eta grid {0.9,0.92,0.93,0.95,0.96,0.98,1},
// SNR 0..35 dB in 5 dB steps, 100 frames, mild fractional channel, seed 3.
struct ExperimentConfig {
  std::vector<Domain> domains{Domain::TD, Domain::FD, Domain::PS};
  std::vector<double> etas{0.9, 0.92, 0.93, 0.95, 0.96, 0.98, 1.0};
  FrameLayout layout{21, 129, 16, GuardKind::ZeroPrefix};
  ChannelSpec channel;                 // resolved (preset/profile expanded)
  std::string channel_preset;          // non-empty when a preset was used
  std::vector<double> snr_grid_db{0, 5, 10, 15, 20, 25, 30, 35};
  int num_frames = 100;
  std::uint64_t seed = 3;
  int threads = 0;                     // 0 = hardware concurrency
  std::optional<int> bound_subset;     // default: the basis' M
  std::string equalizer = "lmmse";

  // dpss-dump parameters (CLI flags, not JSON).
  int dpss_length = 129;
  double dpss_half_bandwidth = 0.5;
  int dpss_order = 129;
};

// Named channel presets; `seed` feeds the tap-phase stream.
// mild-fractional: decay 0.5, taps 0,0.1,..,15; mild-integer: decay 0.5, taps 0..15;
// severe-*: decay 0.05 over the same grids. All power-normalized.
ChannelSpec channel_preset(const std::string& name, std::uint64_t seed);

// Strict parser: unknown keys anywhere are rejected, ranges checked, defaults
// filled. `path` may be "-" for stdin.
ExperimentConfig parse_config_file(const std::string& path);
ExperimentConfig parse_config_json(const nlohmann::json& doc);

// Fully-resolved echo of the configuration (what the manifest records).
nlohmann::json config_to_json(const ExperimentConfig& config);

}  // namespace ibilab
