#include "ibilab/config.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace ibilab {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.count(key))
      throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

double require_number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ConfigError(where + ": expected a number");
  return v.get<double>();
}

int require_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw ConfigError(where + ": expected an integer");
  return v.get<int>();
}

}  // namespace

ChannelSpec channel_preset(const std::string& name, std::uint64_t seed) {
  ChannelSpec spec;
  if (name == "mild-fractional") {
    spec = exponential_profile(0.5, 0.1, 15.0, seed, true);
  } else if (name == "mild-integer") {
    spec = exponential_profile(0.5, 1.0, 15.0, seed, true);
  } else if (name == "severe-fractional") {
    spec = exponential_profile(0.05, 0.1, 15.0, seed, true);
  } else if (name == "severe-integer") {
    spec = exponential_profile(0.05, 1.0, 15.0, seed, true);
  } else {
    throw ConfigError("channel.preset: unknown preset '" + name +
                      "' (expected mild-fractional, mild-integer, severe-fractional or "
                      "severe-integer)");
  }
  spec.id = name;
  return spec;
}

ExperimentConfig parse_config_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config: top-level document must be a JSON object");
  reject_unknown(doc,
                 {"domains", "eta", "layout", "channel", "snr_db", "num_frames", "seed",
                  "threads", "bound_subset", "equalizer"},
                 "config");

  ExperimentConfig cfg;

  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned() && !doc["seed"].is_number_integer())
      throw ConfigError("config.seed: expected a non-negative integer");
    const auto s = doc["seed"].get<std::int64_t>();
    if (s < 0) throw ConfigError("config.seed: expected a non-negative integer");
    cfg.seed = static_cast<std::uint64_t>(s);
  }

  if (doc.contains("domains")) {
    if (!doc["domains"].is_array() || doc["domains"].empty())
      throw ConfigError("config.domains: expected a non-empty array");
    cfg.domains.clear();
    for (const auto& d : doc["domains"]) {
      if (!d.is_string()) throw ConfigError("config.domains: entries must be strings");
      try {
        cfg.domains.push_back(domain_from_string(d.get<std::string>()));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config.domains: ") + e.what());
      }
    }
  }

  if (doc.contains("eta")) {
    if (!doc["eta"].is_array() || doc["eta"].empty())
      throw ConfigError("config.eta: expected a non-empty array");
    cfg.etas.clear();
    for (const auto& e : doc["eta"]) {
      const double v = require_number(e, "config.eta");
      if (!(v > 0.0) || v > 1.0) throw ConfigError("config.eta: values must be in (0, 1]");
      cfg.etas.push_back(v);
    }
  }

  if (doc.contains("layout")) {
    const json& lay = doc["layout"];
    if (!lay.is_object()) throw ConfigError("config.layout: expected an object");
    reject_unknown(lay, {"blocks", "block_length", "guard_length", "guard"}, "config.layout");
    if (lay.contains("blocks")) cfg.layout.num_blocks = require_int(lay["blocks"], "config.layout.blocks");
    if (lay.contains("block_length"))
      cfg.layout.block_length = require_int(lay["block_length"], "config.layout.block_length");
    if (lay.contains("guard_length"))
      cfg.layout.guard_length = require_int(lay["guard_length"], "config.layout.guard_length");
    if (lay.contains("guard")) {
      if (!lay["guard"].is_string()) throw ConfigError("config.layout.guard: expected a string");
      const std::string g = lay["guard"].get<std::string>();
      if (g == "zp")
        cfg.layout.guard = GuardKind::ZeroPrefix;
      else if (g == "cp")
        cfg.layout.guard = GuardKind::CyclicPrefix;
      else
        throw ConfigError("config.layout.guard: expected 'zp' or 'cp'");
    }
    if (cfg.layout.num_blocks < 1) throw ConfigError("config.layout.blocks: must be >= 1");
    if (cfg.layout.block_length < 2)
      throw ConfigError("config.layout.block_length: must be >= 2");
    if (cfg.layout.guard_length < 0)
      throw ConfigError("config.layout.guard_length: must be >= 0");
  }

  if (doc.contains("channel")) {
    const json& ch = doc["channel"];
    if (!ch.is_object()) throw ConfigError("config.channel: expected an object");
    reject_unknown(ch, {"preset", "profile", "paths", "normalized", "seed", "id"},
                   "config.channel");
    const int forms = ch.contains("preset") + ch.contains("profile") + ch.contains("paths");
    if (forms != 1)
      throw ConfigError("config.channel: give exactly one of 'preset', 'profile' or 'paths'");
    std::uint64_t chan_seed = cfg.seed;
    if (ch.contains("seed")) chan_seed = ch["seed"].get<std::uint64_t>();
    if (ch.contains("preset")) {
      if (!ch["preset"].is_string()) throw ConfigError("config.channel.preset: expected a string");
      cfg.channel_preset = ch["preset"].get<std::string>();
      cfg.channel = channel_preset(cfg.channel_preset, chan_seed);
    } else if (ch.contains("profile")) {
      const json& pr = ch["profile"];
      if (!pr.is_object()) throw ConfigError("config.channel.profile: expected an object");
      reject_unknown(pr, {"decay_rate", "tap_spacing", "max_delay", "normalize"},
                     "config.channel.profile");
      for (const char* key : {"decay_rate", "tap_spacing", "max_delay"})
        if (!pr.contains(key))
          throw ConfigError(std::string("config.channel.profile: missing '") + key + "'");
      try {
        cfg.channel = exponential_profile(
            require_number(pr["decay_rate"], "config.channel.profile.decay_rate"),
            require_number(pr["tap_spacing"], "config.channel.profile.tap_spacing"),
            require_number(pr["max_delay"], "config.channel.profile.max_delay"), chan_seed,
            pr.value("normalize", true));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config.channel.profile: ") + e.what());
      }
      cfg.channel.id = ch.value("id", "custom-profile");
    } else {
      try {
        cfg.channel = channel_from_json(ch);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config.channel: ") + e.what());
      }
      if (cfg.channel.id.empty()) cfg.channel.id = "custom-paths";
    }
    if (ch.contains("id")) cfg.channel.id = ch["id"].get<std::string>();
  } else {
    cfg.channel_preset = "mild-fractional";
    cfg.channel = channel_preset(cfg.channel_preset, cfg.seed);
  }

  if (doc.contains("snr_db")) {
    if (!doc["snr_db"].is_array() || doc["snr_db"].empty())
      throw ConfigError("config.snr_db: expected a non-empty array");
    cfg.snr_grid_db.clear();
    for (const auto& s : doc["snr_db"]) cfg.snr_grid_db.push_back(require_number(s, "config.snr_db"));
  }

  if (doc.contains("num_frames")) {
    cfg.num_frames = require_int(doc["num_frames"], "config.num_frames");
    if (cfg.num_frames < 1) throw ConfigError("config.num_frames: must be >= 1");
  }

  if (doc.contains("threads")) {
    cfg.threads = require_int(doc["threads"], "config.threads");
    if (cfg.threads < 0) throw ConfigError("config.threads: must be >= 0");
  }

  if (doc.contains("bound_subset")) {
    const int v = require_int(doc["bound_subset"], "config.bound_subset");
    if (v < 1) throw ConfigError("config.bound_subset: must be >= 1");
    cfg.bound_subset = v;
  }

  if (doc.contains("equalizer")) {
    if (!doc["equalizer"].is_string()) throw ConfigError("config.equalizer: expected a string");
    cfg.equalizer = doc["equalizer"].get<std::string>();
    if (cfg.equalizer != "lmmse" && cfg.equalizer != "LMMSE")
      throw ConfigError("config.equalizer: only 'lmmse' is available");
    cfg.equalizer = "lmmse";
  }

  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  json doc;
  try {
    if (path == "-") {
      doc = json::parse(std::cin);
    } else {
      std::ifstream in(path);
      if (!in) throw ConfigError("config: cannot open '" + path + "'");
      doc = json::parse(in);
    }
  } catch (const json::parse_error& e) {
    throw ConfigError("config: malformed JSON: " + std::string(e.what()));
  }
  return parse_config_json(doc);
}

nlohmann::json config_to_json(const ExperimentConfig& config) {
  json domains = json::array();
  for (Domain d : config.domains) domains.push_back(to_string(d));
  json doc{
      {"domains", domains},
      {"eta", config.etas},
      {"layout",
       {{"blocks", config.layout.num_blocks},
        {"block_length", config.layout.block_length},
        {"guard_length", config.layout.guard_length},
        {"guard", config.layout.guard == GuardKind::ZeroPrefix ? "zp" : "cp"}}},
      {"channel", channel_to_json(config.channel)},
      {"snr_db", config.snr_grid_db},
      {"num_frames", config.num_frames},
      {"seed", config.seed},
      {"threads", config.threads},
      {"equalizer", config.equalizer},
  };
  if (!config.channel_preset.empty()) doc["channel"]["preset"] = config.channel_preset;
  if (config.bound_subset) doc["bound_subset"] = *config.bound_subset;
  return doc;
}

}  // namespace ibilab
