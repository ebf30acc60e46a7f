#include "ibilab/basis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ibilab/prolate.hpp"

namespace ibilab {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

std::string to_string(Domain d) {
  switch (d) {
    case Domain::TD: return "TD";
    case Domain::FD: return "FD";
    case Domain::PS: return "PS";
  }
  return "?";
}

Domain domain_from_string(const std::string& s) {
  if (s == "TD" || s == "td") return Domain::TD;
  if (s == "FD" || s == "fd") return Domain::FD;
  if (s == "PS" || s == "ps") return Domain::PS;
  throw std::invalid_argument("unknown signaling domain '" + s + "' (expected TD, FD or PS)");
}

SignalingBasis build_basis(Domain domain, int block_length, double utilization,
                           FdSelection fd_selection, std::optional<double> ps_half_bandwidth) {
  const int n = block_length;
  if (n < 2) throw std::invalid_argument("build_basis: block_length must be >= 2");
  if (!(utilization > 0.0) || utilization > 1.0)
    throw std::invalid_argument("build_basis: utilization must be in (0, 1]");
  const int m = std::max<int>(1, static_cast<int>(std::lround(utilization * n)));
  if (m < 1) throw std::invalid_argument("build_basis: no usable dimensions");

  SignalingBasis basis;
  basis.domain = domain;
  basis.block_length = n;
  basis.used_dims = m;
  basis.utilization = static_cast<double>(m) / n;

  switch (domain) {
    case Domain::TD:
      basis.matrix = Eigen::MatrixXcd::Identity(n, m);
      break;
    case Domain::FD: {
      std::vector<int> cols(m);
      if (fd_selection == FdSelection::Natural) {
        std::iota(cols.begin(), cols.end(), 0);
      } else {
        // Order by |aliased frequency|, ties toward positive frequency.
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        auto freq = [n](int k) { return k <= n / 2 ? k : k - n; };
        std::sort(order.begin(), order.end(), [&](int a, int b) {
          const int fa = freq(a), fb = freq(b);
          if (std::abs(fa) != std::abs(fb)) return std::abs(fa) < std::abs(fb);
          return fa > fb;
        });
        std::copy_n(order.begin(), m, cols.begin());
      }
      basis.matrix.resize(n, m);
      const double scale = 1.0 / std::sqrt(static_cast<double>(n));
      for (int j = 0; j < m; ++j)
        for (int i = 0; i < n; ++i)
          basis.matrix(i, j) =
              std::polar(scale, kTwoPi * static_cast<double>(i) * cols[j] / n);
      break;
    }
    case Domain::PS: {
      const double w = ps_half_bandwidth.value_or(0.5);
      basis.ps_half_bandwidth = w;
      basis.matrix = generate_dpss(n, w, m).sequences.cast<std::complex<double>>();
      break;
    }
  }
  return basis;
}

Eigen::VectorXcd modulate(const SignalingBasis& basis, const Eigen::VectorXcd& symbols) {
  if (symbols.size() != basis.used_dims)
    throw std::invalid_argument("modulate: expected " + std::to_string(basis.used_dims) +
                                " symbols, got " + std::to_string(symbols.size()));
  return basis.matrix * symbols;
}

Eigen::VectorXcd demodulate(const SignalingBasis& basis, const Eigen::VectorXcd& block) {
  if (block.size() != basis.block_length)
    throw std::invalid_argument("demodulate: expected a block of " +
                                std::to_string(basis.block_length) + " samples, got " +
                                std::to_string(block.size()));
  return basis.matrix.adjoint() * block;
}

Eigen::VectorXcd assemble_frame(const FrameLayout& layout,
                                const std::vector<Eigen::VectorXcd>& blocks) {
  if (layout.num_blocks < 1 || layout.block_length < 1 || layout.guard_length < 0)
    throw std::invalid_argument("assemble_frame: invalid layout");
  if (static_cast<int>(blocks.size()) != layout.num_blocks)
    throw std::invalid_argument("assemble_frame: expected " + std::to_string(layout.num_blocks) +
                                " blocks, got " + std::to_string(blocks.size()));
  if (layout.guard == GuardKind::CyclicPrefix && layout.guard_length > layout.block_length)
    throw std::invalid_argument("assemble_frame: cyclic prefix longer than block");
  const int n = layout.block_length, d = layout.guard_length, s = layout.stride();
  Eigen::VectorXcd frame = Eigen::VectorXcd::Zero(layout.total_length());
  for (int l = 0; l < layout.num_blocks; ++l) {
    if (blocks[l].size() != n)
      throw std::invalid_argument("assemble_frame: block " + std::to_string(l) +
                                  " has wrong length");
    if (layout.guard == GuardKind::CyclicPrefix && d > 0)
      frame.segment(static_cast<long>(l) * s, d) = blocks[l].tail(d);
    frame.segment(static_cast<long>(l) * s + d, n) = blocks[l];
  }
  return frame;
}

Eigen::VectorXcd extract_block(const FrameLayout& layout, const Eigen::VectorXcd& frame,
                               int index) {
  if (index < 0 || index >= layout.num_blocks)
    throw std::invalid_argument("extract_block: block index " + std::to_string(index) +
                                " out of range [0, " + std::to_string(layout.num_blocks) + ")");
  if (frame.size() != layout.total_length())
    throw std::invalid_argument("extract_block: frame length mismatch");
  return frame.segment(static_cast<long>(index) * layout.stride() + layout.guard_length,
                       layout.block_length);
}

}  // namespace ibilab
