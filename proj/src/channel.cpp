#include "ibilab/channel.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "ibilab/rng.hpp"

namespace ibilab {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kTwoPi = 2.0 * kPi;
}  // namespace

double sinc(double x) {
  if (x == std::nearbyint(x)) return x == 0.0 ? 1.0 : 0.0;
  const double px = kPi * x;
  return std::sin(px) / px;
}

bool ChannelSpec::delay_only() const {
  for (const auto& p : paths)
    if (p.doppler != 0.0) return false;
  return true;
}

double ChannelSpec::total_power() const {
  double s = 0.0;
  for (const auto& p : paths) s += std::norm(p.gain);
  return s;
}

Eigen::MatrixXd delay_matrix(int size, double tau) {
  if (size < 1) throw std::invalid_argument("delay_matrix: size must be >= 1");
  if (!(tau >= 0.0)) throw std::invalid_argument("delay_matrix: tau must be >= 0");
  Eigen::MatrixXd h(size, size);
  // Toeplitz: fill by diagonal offset.
  for (int d = -(size - 1); d <= size - 1; ++d) {
    const double v = sinc(static_cast<double>(d) - tau);
    for (int l = std::max(0, d); l < std::min(size, size + d); ++l) h(l, l - d) = v;
  }
  return h;
}

Eigen::MatrixXcd doppler_matrix(int size, double doppler) {
  if (size < 1) throw std::invalid_argument("doppler_matrix: size must be >= 1");
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(size, size);
  for (int l = 0; l < size; ++l)
    d(l, l) = std::polar(1.0, kTwoPi * static_cast<double>(l) * doppler);
  return d;
}

Eigen::MatrixXcd channel_matrix(const ChannelSpec& spec, int size) {
  if (spec.paths.empty()) throw std::invalid_argument("channel_matrix: empty channel");
  if (size < 1) throw std::invalid_argument("channel_matrix: size must be >= 1");
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(size, size);
  for (const auto& p : spec.paths) {
    const Eigen::MatrixXd t = delay_matrix(size, p.delay);
    if (p.doppler == 0.0) {
      h += p.gain * t;
    } else {
      Eigen::VectorXcd phase(size);
      for (int l = 0; l < size; ++l) phase[l] = std::polar(1.0, kTwoPi * l * p.doppler);
      h += p.gain * (phase.asDiagonal() * t.cast<std::complex<double>>());
    }
  }
  return h;
}

ChannelSpec exponential_profile(double decay_rate, double tap_spacing, double max_delay,
                                std::uint64_t seed, bool normalize) {
  if (!(decay_rate > 0.0)) throw std::invalid_argument("exponential_profile: decay_rate must be > 0");
  if (!(tap_spacing > 0.0)) throw std::invalid_argument("exponential_profile: tap_spacing must be > 0");
  if (max_delay < tap_spacing)
    throw std::invalid_argument("exponential_profile: max_delay must be >= tap_spacing");

  ChannelSpec spec;
  spec.seed = seed;
  rng::SplitMix phases(seed);
  for (int k = 0;; ++k) {
    double tau = static_cast<double>(k) * tap_spacing;
    if (tau > max_delay + 1e-12) break;
    const double snapped = std::nearbyint(tau);
    if (std::abs(tau - snapped) < 1e-9) tau = snapped;
    PathSpec p;
    p.delay = tau;
    p.gain = std::polar(std::exp(-decay_rate * tau), kTwoPi * phases.next_unit());
    spec.paths.push_back(p);
  }
  if (spec.paths.empty()) throw std::invalid_argument("exponential_profile: empty tap set");
  if (normalize) {
    const double scale = 1.0 / std::sqrt(spec.total_power());
    for (auto& p : spec.paths) p.gain *= scale;
    spec.normalized = true;
  }
  return spec;
}

nlohmann::json channel_to_json(const ChannelSpec& spec) {
  nlohmann::json paths = nlohmann::json::array();
  for (const auto& p : spec.paths) {
    paths.push_back({{"gain_re", p.gain.real()},
                     {"gain_im", p.gain.imag()},
                     {"delay", p.delay},
                     {"doppler", p.doppler}});
  }
  nlohmann::json doc{{"paths", std::move(paths)}, {"normalized", spec.normalized}};
  if (spec.seed) doc["seed"] = *spec.seed;
  if (!spec.id.empty()) doc["id"] = spec.id;
  return doc;
}

ChannelSpec channel_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("channel: expected a JSON object");
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (key != "paths" && key != "normalized" && key != "seed" && key != "id")
      throw std::invalid_argument("channel: unknown key '" + key + "'");
  }
  if (!doc.contains("paths") || !doc["paths"].is_array() || doc["paths"].empty())
    throw std::invalid_argument("channel: 'paths' must be a non-empty array");
  ChannelSpec spec;
  for (const auto& jp : doc["paths"]) {
    for (const auto& [key, value] : jp.items()) {
      (void)value;
      if (key != "gain_re" && key != "gain_im" && key != "delay" && key != "doppler")
        throw std::invalid_argument("channel path: unknown key '" + key + "'");
    }
    PathSpec p;
    p.gain = {jp.value("gain_re", 0.0), jp.value("gain_im", 0.0)};
    p.delay = jp.value("delay", 0.0);
    p.doppler = jp.value("doppler", 0.0);
    if (!std::isfinite(p.delay) || p.delay < 0.0)
      throw std::invalid_argument("channel path: delay must be finite and >= 0");
    if (!std::isfinite(std::abs(p.gain)))
      throw std::invalid_argument("channel path: gain must be finite");
    spec.paths.push_back(p);
  }
  spec.normalized = doc.value("normalized", false);
  if (doc.contains("seed")) spec.seed = doc["seed"].get<std::uint64_t>();
  spec.id = doc.value("id", std::string{});
  return spec;
}

}  // namespace ibilab
