#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "ibilab/basis.hpp"
#include "ibilab/channel.hpp"
#include "ibilab/rng.hpp"

namespace ibilab {

enum class Equalizer { Lmmse };

struct SimConfig {
  Domain domain = Domain::TD;
  double utilization = 1.0;
  FrameLayout layout{21, 129, 16, GuardKind::ZeroPrefix};
  ChannelSpec channel;
  std::vector<double> snr_grid_db;
  int num_frames = 100;
  std::uint64_t seed = 0;
  Equalizer equalizer = Equalizer::Lmmse;
};

struct BerPoint {
  double snr_db = 0.0;
  double ber = 0.0;
  long long bit_count = 0;
  long long error_count = 0;
  double ci_low = 0.0;   // Wilson 95% interval
  double ci_high = 0.0;
};

struct BerCurve {
  std::vector<BerPoint> points;
  Domain domain = Domain::TD;
  double eta = 0.0;
  int used_dims = 0;
  std::string channel_id;
  std::uint64_t seed = 0;
  int num_frames = 0;
};

// Gray-mapped unit-energy QPSK: (b0, b1) -> ((1-2 b0) + j (1-2 b1))/sqrt(2).
Eigen::VectorXcd qpsk_map(const std::vector<int>& bits);

// Hard per-quadrature decisions; exact-zero components decide bit 0.
std::vector<int> qpsk_demap(const Eigen::VectorXcd& symbols);

// Adds circularly-symmetric complex Gaussian noise, variance 10^(-snr/10)
// per sample, drawn from the given stream.
Eigen::VectorXcd awgn(const Eigen::VectorXcd& signal, double snr_db, rng::Stream& stream);

// (H^H H + noise_var I)^{-1} H^H z; noise_var = 0 solves the pseudo-inverse
// (zero-forcing) system and reports a numerical error if it is singular.
Eigen::VectorXcd lmmse_equalize(const Eigen::MatrixXcd& block_channel,
                                const Eigen::VectorXcd& observation, double noise_var);

// Monte-Carlo BER over whole frames with genie per-block CSI. Transmit blocks
// are scaled by sqrt(N/M) so data samples have unit average energy; the genie
// block channel includes the same scale. Deterministic for a fixed config.
BerCurve run_ber(const SimConfig& config, int threads = 0);

}  // namespace ibilab
