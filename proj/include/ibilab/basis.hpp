#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace ibilab {

enum class Domain { TD, FD, PS };

std::string to_string(Domain d);
Domain domain_from_string(const std::string& s);

// How the FD basis picks its M DFT columns when eta < 1.
//   Natural:        columns k = 0..M-1 (keeps both band-edge tones).
//   CenteredLowPass: M smallest |frequency| columns, ties toward positive.
enum class FdSelection { Natural, CenteredLowPass };

// N x M orthonormal modulation matrix for one signaling domain.
struct SignalingBasis {
  Domain domain = Domain::TD;
  int block_length = 0;    // N
  int used_dims = 0;       // M = round(eta * N)
  double utilization = 0;  // realized M/N
  Eigen::MatrixXcd matrix;
  std::optional<double> ps_half_bandwidth;  // PS only
};

enum class GuardKind { ZeroPrefix, CyclicPrefix };

struct FrameLayout {
  int num_blocks = 0;    // L
  int block_length = 0;  // N
  int guard_length = 0;  // D
  GuardKind guard = GuardKind::ZeroPrefix;

  int stride() const { return guard_length + block_length; }
  long total_length() const { return static_cast<long>(num_blocks) * stride(); }
};

// TD: first M identity columns. FD: unitary DFT columns, entry
// exp(j 2 pi n k / N)/sqrt(N), selected per FdSelection (default Natural).
// PS: M most concentrated sequences of generate_dpss(N, W, M); default W=0.5
// (full-band Slepian basis), overridable via ps_half_bandwidth.
SignalingBasis build_basis(Domain domain, int block_length, double utilization,
                           FdSelection fd_selection = FdSelection::Natural,
                           std::optional<double> ps_half_bandwidth = std::nullopt);

// x = O d (length N from M symbols).
Eigen::VectorXcd modulate(const SignalingBasis& basis, const Eigen::VectorXcd& symbols);

// z = O^H y (matched filter; length M from N samples).
Eigen::VectorXcd demodulate(const SignalingBasis& basis, const Eigen::VectorXcd& block);

// [g_0, b_0, g_1, b_1, ...]; g is zeros (ZP) or the block's last D samples (CP).
Eigen::VectorXcd assemble_frame(const FrameLayout& layout,
                                const std::vector<Eigen::VectorXcd>& blocks);

// Data samples of block `index`: positions [index*stride + D, ... + D + N - 1].
Eigen::VectorXcd extract_block(const FrameLayout& layout, const Eigen::VectorXcd& frame,
                               int index);

}  // namespace ibilab
