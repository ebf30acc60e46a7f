#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "ibilab/basis.hpp"
#include "ibilab/channel.hpp"

namespace ibilab {

// c_rs[q] = sum_n conj(p_r[n]) p_s[n-q], q in [-(N-1), N-1].
struct CrossCorrelation {
  Eigen::VectorXcd values;  // length 2N-1, entry q + N - 1
  int block_length = 0;
  int row_index = 0;
  int col_index = 0;

  std::complex<double> at(int q) const { return values[q + block_length - 1]; }
};

CrossCorrelation cross_correlation(const Eigen::VectorXcd& p_r, const Eigen::VectorXcd& p_s);

// Band-limited fractional shift: out[k] = sum_q seq[q] * sinc(2W (q - shift - k))
// for k in [-T, T], with q = index - center_index. W = 0.5 is the full-band
// operator of the exact interference expansion.
Eigen::VectorXcd bandlimited_shift(const Eigen::VectorXcd& seq, int center_index, double shift,
                                   int window_half_width, double half_bandwidth = 0.5);

// Energy outside [-N_t, N_t] of a centered sequence over [-T, T]. The optional
// diagnostic receives |seq[-T]|^2 + |seq[T]|^2 (window-truncation indicator).
double tail_energy(const Eigen::VectorXcd& seq_centered, int inner_half_width,
                   double* edge_diagnostic = nullptr);

struct IbiReport {
  Domain domain = Domain::TD;
  double eta = 0.0;
  int used_dims = 0;
  std::string channel_id;
  FrameLayout layout;

  Eigen::VectorXd per_waveform_energy;  // E_r, unit symbol energy
  double total_energy = 0.0;
  double s2ibi_db = 0.0;  // -10 log10(mean_r E_r); +inf when IBI is exactly 0

  std::optional<double> bound_energy;
  std::optional<double> s2ibi_lower_bound_db;
  bool bound_vacuous = false;  // no fractional-delay paths

  // |S2IBI(L) - S2IBI(L+4)|: block-sum truncation check, should be < 0.1 dB.
  double truncation_mismatch_db = 0.0;
};

// Exact per-waveform IBI energy for the frame's center block, expanded per
// path with unit-variance i.i.d. symbols: E_r = sum_p |h_p|^2 sum_{j != l}
// sum_s |[O^H T(tau_p + (j-l)(N+D)) O]_{r,s}|^2. Delay-only, zero-prefix
// guards. Exactly zero (certified, not approximated) for integer-tap channels
// covered by the guard.
IbiReport ibi_energy_exact(const SignalingBasis& basis, const FrameLayout& layout,
                           const ChannelSpec& spec, int threads = 0);

// DPSS tail-energy upper bound on the total IBI of the first `subset_size`
// waveforms (default: all). For each fractional path the closed correlation
// tail |k| >= (N+D) - floor(tau) is bounded through quarter-band DPSS of
// length 4*N_p+1, N_p = (N+D) - floor(tau) - 1, sampled at even indices and
// weighted by lambda_l (1 - lambda_l). Returns 0 for integer-only channels
// (vacuous; flag via ibi_energy_exact/s2ibi_sweep reports).
double ibi_bound(const SignalingBasis& basis, const FrameLayout& layout, const ChannelSpec& spec,
                 int subset_size = -1, int threads = 0);

// One IbiReport (exact + bound) per (domain, eta), in the given order.
std::vector<IbiReport> s2ibi_sweep(const std::vector<Domain>& domains,
                                   const std::vector<double>& etas, const ChannelSpec& spec,
                                   const FrameLayout& layout, int threads = 0);

}  // namespace ibilab
