#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace ibilab {

// One specular path: complex gain, delay in samples, Doppler in cycles/sample.
struct PathSpec {
  std::complex<double> gain{0.0, 0.0};
  double delay = 0.0;
  double doppler = 0.0;
};

struct ChannelSpec {
  std::vector<PathSpec> paths;
  bool normalized = false;  // true if sum |gain|^2 == 1 was enforced
  std::optional<std::uint64_t> seed;
  std::string id;

  bool delay_only() const;
  double total_power() const;
};

// sinc(x) = sin(pi x)/(pi x); exact 0/1 at integer arguments.
double sinc(double x);

// Entry (l,k) = sinc(l - k - tau); Toeplitz. tau >= 0.
Eigen::MatrixXd delay_matrix(int size, double tau);

// Diagonal entry l = exp(j 2 pi l nu).
Eigen::MatrixXcd doppler_matrix(int size, double doppler);

// H = sum_p gain_p * doppler_matrix(nu_p) * delay_matrix(tau_p).
Eigen::MatrixXcd channel_matrix(const ChannelSpec& spec, int size);

// Taps at delays 0, tap_spacing, ..., max_delay (endpoint within 1e-12;
// values within 1e-9 of an integer are snapped so integer taps stay exact).
// |gain| = exp(-decay_rate * delay); phases i.i.d. uniform, splitmix64(seed).
ChannelSpec exponential_profile(double decay_rate, double tap_spacing, double max_delay,
                                std::uint64_t seed, bool normalize);

// JSON document form: {"paths":[{"gain_re","gain_im","delay","doppler"}],
// "normalized":bool, "seed":..., "id":...}.
nlohmann::json channel_to_json(const ChannelSpec& spec);
ChannelSpec channel_from_json(const nlohmann::json& doc);

}  // namespace ibilab
