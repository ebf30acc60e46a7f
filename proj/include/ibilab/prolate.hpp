#pragma once

#include <Eigen/Dense>
#include <vector>

namespace ibilab {

// Discrete prolate spheroidal sequences of one (length, half-bandwidth) family.
// Columns of `sequences` are orthonormal, ordered from most to least
// band-concentrated; `eigenvalues` are the concentration ratios lambda_l of the
// sinc kernel matrix, clamped to [1e-300, 1-1e-16] and non-increasing.
struct DpssSet {
  int length = 0;                // N
  double half_bandwidth = 0.0;   // W in (0, 0.5]
  int order = 0;                 // K <= N
  Eigen::MatrixXd sequences;     // N x K
  Eigen::VectorXd eigenvalues;   // K
  std::vector<int> clamped;      // indices where lambda hit a clamp bound
};

// Prolate (sinc) kernel: A(m,n) = sin(2 pi W (m-n)) / (pi (m-n)), diagonal 2W.
// Entries with integer 2W(m-n) are exact zeros, so W=0.5 yields the identity
// and W=0.25 the exact alternating 1/(pi k) pattern.
Eigen::MatrixXd sinc_kernel_matrix(int length, double half_bandwidth);

// DPSS via the commuting symmetric tridiagonal (diagonal ((N-1-2n)/2)^2 cos 2piW,
// off-diagonal n(N-n)/2); eigenvalues recovered as compensated Rayleigh
// quotients against sinc_kernel_matrix. Sign convention: even orders have
// positive mean, odd orders a positive first significant sample in the leading
// half. s_l[n] = (-1)^l s_l[N-1-n] holds exactly (parity projection).
DpssSet generate_dpss(int length, double half_bandwidth, int order);

}  // namespace ibilab
