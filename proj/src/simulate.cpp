#include "ibilab/simulate.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "ibilab/errors.hpp"

namespace ibilab {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440084436210485;

// Salts for independent sub-streams of the experiment seed.
constexpr std::uint64_t kSaltFrameData = 0x66726d64;   // frame symbol bits
constexpr std::uint64_t kSaltNoise = 0x6e6f6973;       // per-(frame, snr) noise

void wilson_interval(long long errors, long long bits, double* lo, double* hi) {
  const double z = 1.959963984540054;  // 95%
  const double n = static_cast<double>(bits);
  const double p = static_cast<double>(errors) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  *lo = std::max(0.0, center - half);
  *hi = std::min(1.0, center + half);
}

// Full-frame channel application. Delay-only channels reduce to a Toeplitz
// kernel (one convolution); Doppler falls back to the dense Eq.-(8) matrix.
class FrameChannel {
 public:
  FrameChannel(const ChannelSpec& spec, long total_length) : size_(total_length) {
    if (spec.delay_only()) {
      // reversed kernel: rev_[(T-1-a) + b] = g[a - b]
      rev_ = Eigen::VectorXcd::Zero(2 * size_ - 1);
      for (long i = 0; i < 2 * size_ - 1; ++i) {
        const double lag = static_cast<double>(size_ - 1 - i);
        std::complex<double> acc = 0.0;
        for (const auto& p : spec.paths) acc += p.gain * sinc(lag - p.delay);
        rev_[i] = acc;
      }
    } else {
      dense_ = channel_matrix(spec, static_cast<int>(size_));
    }
  }

  Eigen::VectorXcd apply(const Eigen::VectorXcd& frame) const {
    if (dense_.size() != 0) return dense_ * frame;
    Eigen::VectorXcd out(size_);
    for (long a = 0; a < size_; ++a)
      out[a] = rev_.segment(size_ - 1 - a, size_).cwiseProduct(frame).sum();
    return out;
  }

  // N x N sub-matrix coupling block j's data samples into block l's.
  Eigen::MatrixXcd block_coupling(const ChannelSpec& spec, const FrameLayout& layout, int l,
                                  int j) const {
    const int n = layout.block_length;
    const long row0 = static_cast<long>(l) * layout.stride() + layout.guard_length;
    const long col0 = static_cast<long>(j) * layout.stride() + layout.guard_length;
    if (dense_.size() != 0) return dense_.block(row0, col0, n, n);
    Eigen::MatrixXcd h(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const double lag = static_cast<double>(row0 + a - col0 - b);
        std::complex<double> acc = 0.0;
        for (const auto& p : spec.paths) acc += p.gain * sinc(lag - p.delay);
        h(a, b) = acc;
      }
    return h;
  }

 private:
  long size_;
  Eigen::VectorXcd rev_;
  Eigen::MatrixXcd dense_;
};

}  // namespace

Eigen::VectorXcd qpsk_map(const std::vector<int>& bits) {
  if (bits.size() % 2 != 0) throw std::invalid_argument("qpsk_map: odd number of bits");
  Eigen::VectorXcd symbols(bits.size() / 2);
  for (size_t i = 0; i < symbols.size(); ++i)
    symbols[i] = {kInvSqrt2 * (1 - 2 * bits[2 * i]), kInvSqrt2 * (1 - 2 * bits[2 * i + 1])};
  return symbols;
}

std::vector<int> qpsk_demap(const Eigen::VectorXcd& symbols) {
  std::vector<int> bits(2 * symbols.size());
  for (long i = 0; i < symbols.size(); ++i) {
    bits[2 * i] = symbols[i].real() < 0.0 ? 1 : 0;
    bits[2 * i + 1] = symbols[i].imag() < 0.0 ? 1 : 0;
  }
  return bits;
}

Eigen::VectorXcd awgn(const Eigen::VectorXcd& signal, double snr_db, rng::Stream& stream) {
  const double sigma = std::sqrt(std::pow(10.0, -snr_db / 10.0));
  Eigen::VectorXcd out(signal.size());
  for (long i = 0; i < signal.size(); ++i) {
    const double re = stream.next_gauss();
    const double im = stream.next_gauss();
    out[i] = signal[i] + sigma * kInvSqrt2 * std::complex<double>(re, im);
  }
  return out;
}

Eigen::VectorXcd lmmse_equalize(const Eigen::MatrixXcd& block_channel,
                                const Eigen::VectorXcd& observation, double noise_var) {
  if (block_channel.rows() != block_channel.cols())
    throw std::invalid_argument("lmmse_equalize: block channel must be square");
  if (observation.size() != block_channel.rows())
    throw std::invalid_argument("lmmse_equalize: observation length mismatch");
  if (noise_var < 0.0) throw std::invalid_argument("lmmse_equalize: negative noise variance");
  const long m = block_channel.rows();
  if (noise_var == 0.0) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(block_channel);
    if (qr.rank() < m)
      throw numerical_error("lmmse_equalize: singular channel at zero noise variance");
    return qr.solve(observation);
  }
  Eigen::MatrixXcd gram = block_channel.adjoint() * block_channel;
  gram.diagonal().array() += noise_var;
  return Eigen::LDLT<Eigen::MatrixXcd>(gram).solve(block_channel.adjoint() * observation);
}

BerCurve run_ber(const SimConfig& config, int threads) {
  if (config.snr_grid_db.empty()) throw std::invalid_argument("run_ber: empty SNR grid");
  if (config.num_frames < 1) throw std::invalid_argument("run_ber: num_frames must be >= 1");
  if (config.channel.paths.empty()) throw std::invalid_argument("run_ber: empty channel");
  if (config.layout.guard != GuardKind::ZeroPrefix)
    throw std::invalid_argument("run_ber: only zero-prefix frames are simulated");

  const FrameLayout& layout = config.layout;
  const SignalingBasis basis = build_basis(config.domain, layout.block_length, config.utilization);
  const int n = layout.block_length;
  const int m = basis.used_dims;
  const int blocks = layout.num_blocks;
  const double alpha = std::sqrt(static_cast<double>(n) / m);  // unit sample energy
  const int n_snr = static_cast<int>(config.snr_grid_db.size());

  const FrameChannel channel(config.channel, layout.total_length());
  const bool shared_block_channel = config.channel.delay_only();

  // Genie per-block equivalent channels and LMMSE solvers. Delay-only channels
  // have identical diagonal blocks, so one factorization per SNR serves all.
  std::vector<Eigen::MatrixXcd> genie(shared_block_channel ? 1 : blocks);
  for (int l = 0; l < static_cast<int>(genie.size()); ++l)
    genie[l] = alpha * (basis.matrix.adjoint() *
                        channel.block_coupling(config.channel, layout, l, l) * basis.matrix);

  struct SnrSolver {
    Eigen::LDLT<Eigen::MatrixXcd> ldlt;
    Eigen::MatrixXcd adjoint;
  };
  std::vector<SnrSolver> solvers(genie.size() * n_snr);
  for (size_t g = 0; g < genie.size(); ++g) {
    const Eigen::MatrixXcd gram0 = genie[g].adjoint() * genie[g];
    for (int i = 0; i < n_snr; ++i) {
      Eigen::MatrixXcd gram = gram0;
      gram.diagonal().array() += std::pow(10.0, -config.snr_grid_db[i] / 10.0);
      solvers[g * n_snr + i].ldlt.compute(gram);
      solvers[g * n_snr + i].adjoint = genie[g].adjoint();
    }
  }

  std::vector<std::vector<long long>> frame_errors(config.num_frames,
                                                   std::vector<long long>(n_snr, 0));

  std::atomic<int> next{0};
  auto worker = [&] {
    for (;;) {
      const int f = next.fetch_add(1);
      if (f >= config.num_frames) return;
      rng::Stream data(rng::derive(config.seed, kSaltFrameData, static_cast<std::uint64_t>(f)));
      std::vector<std::vector<int>> bits(blocks);
      std::vector<Eigen::VectorXcd> tx(blocks);
      for (int l = 0; l < blocks; ++l) {
        bits[l].resize(2 * m);
        for (int b = 0; b < 2 * m; ++b) bits[l][b] = data.next_bit();
        tx[l] = alpha * (basis.matrix * qpsk_map(bits[l]));
      }
      const Eigen::VectorXcd frame = assemble_frame(layout, tx);
      const Eigen::VectorXcd received = channel.apply(frame);
      for (int i = 0; i < n_snr; ++i) {
        rng::Stream noise(rng::derive(config.seed, kSaltNoise,
                                      static_cast<std::uint64_t>(f) * 0x10000u + i));
        const Eigen::VectorXcd noisy = awgn(received, config.snr_grid_db[i], noise);
        long long errors = 0;
        for (int l = 0; l < blocks; ++l) {
          const Eigen::VectorXcd z = demodulate(basis, extract_block(layout, noisy, l));
          const SnrSolver& sol = solvers[(shared_block_channel ? 0 : l) * n_snr + i];
          const Eigen::VectorXcd est = sol.ldlt.solve(sol.adjoint * z);
          const std::vector<int> decided = qpsk_demap(est);
          for (int b = 0; b < 2 * m; ++b) errors += decided[b] != bits[l][b];
        }
        frame_errors[f][i] = errors;
      }
    }
  };

  int n_threads = threads > 0 ? threads
                              : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  n_threads = std::min(n_threads, config.num_frames);
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  BerCurve curve;
  curve.domain = config.domain;
  curve.eta = basis.utilization;
  curve.used_dims = m;
  curve.channel_id = config.channel.id;
  curve.seed = config.seed;
  curve.num_frames = config.num_frames;
  const long long bits_per_point =
      2LL * m * blocks * static_cast<long long>(config.num_frames);
  for (int i = 0; i < n_snr; ++i) {
    BerPoint pt;
    pt.snr_db = config.snr_grid_db[i];
    pt.bit_count = bits_per_point;
    for (int f = 0; f < config.num_frames; ++f) pt.error_count += frame_errors[f][i];
    pt.ber = static_cast<double>(pt.error_count) / static_cast<double>(pt.bit_count);
    wilson_interval(pt.error_count, pt.bit_count, &pt.ci_low, &pt.ci_high);
    curve.points.push_back(pt);
  }
  return curve;
}

}  // namespace ibilab
