#include "ibilab/ibi.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "ibilab/prolate.hpp"

namespace ibilab {

namespace {

// lambda*(1-lambda) below this cannot move any bound at double precision.
constexpr double kBoundWeightFloor = 1e-40;

struct PairCorrelations {
  // Row p = s*M + r holds c_rs over lags -(N-1)..N-1 (column q + N - 1).
  Eigen::MatrixXd re, im;
  int block_length = 0;
  int dims = 0;
};

PairCorrelations pair_correlations(const Eigen::MatrixXcd& basis) {
  const int n = static_cast<int>(basis.rows());
  const int m = static_cast<int>(basis.cols());
  PairCorrelations c;
  c.block_length = n;
  c.dims = m;
  c.re.resize(static_cast<long>(m) * m, 2 * n - 1);
  c.im.resize(static_cast<long>(m) * m, 2 * n - 1);
  Eigen::MatrixXcd blk(m, m), adj(m, m);
  for (int q = 0; q < n; ++q) {
    blk.noalias() = basis.bottomRows(n - q).adjoint() * basis.topRows(n - q);
    using MapT = Eigen::Map<const Eigen::VectorXcd>;
    c.re.col(q + n - 1) = MapT(blk.data(), blk.size()).real();
    c.im.col(q + n - 1) = MapT(blk.data(), blk.size()).imag();
    if (q > 0) {
      adj = blk.adjoint();  // c_rs[-q] = conj(c_sr[q])
      c.re.col(n - 1 - q) = MapT(adj.data(), adj.size()).real();
      c.im.col(n - 1 - q) = MapT(adj.data(), adj.size()).imag();
    }
  }
  return c;
}

int resolve_threads(int threads) {
  if (threads > 0) return threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(i) for i in [0, n); results must be written to per-i slots so the
// final reduction order (and thus the float result) is thread-count invariant.
void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  threads = std::min(resolve_threads(threads), n);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

void validate_inputs(const SignalingBasis& basis, const FrameLayout& layout,
                     const ChannelSpec& spec, const char* where) {
  if (basis.block_length != layout.block_length)
    throw std::invalid_argument(std::string(where) + ": basis and layout block lengths differ");
  if (layout.num_blocks < 2)
    throw std::invalid_argument(std::string(where) + ": need at least 2 blocks");
  if (layout.guard_length < 0)
    throw std::invalid_argument(std::string(where) + ": negative guard");
  if (layout.guard != GuardKind::ZeroPrefix)
    throw std::invalid_argument(std::string(where) +
                                ": interference analysis assumes zero-prefix guards");
  if (spec.paths.empty()) throw std::invalid_argument(std::string(where) + ": empty channel");
  for (const auto& p : spec.paths) {
    if (p.doppler != 0.0)
      throw std::invalid_argument(std::string(where) +
                                  ": delay-only analysis; channel has Doppler paths");
    if (!(p.delay >= 0.0))
      throw std::invalid_argument(std::string(where) + ": negative path delay");
  }
}

// Cached full DPSS sets for the bound kernel (quarter band, length 4*Np+1),
// pruned to the transition region where lambda*(1-lambda) matters.
struct BoundTapers {
  Eigen::MatrixXd even_samples;  // (2N-1) x Lt once sliced per block length
  Eigen::MatrixXd sequences;     // full (4Np+1) x Lt
  Eigen::VectorXd weights;       // lambda*(1-lambda), length Lt
};

const BoundTapers& bound_tapers(int np) {
  static std::map<int, std::unique_ptr<BoundTapers>> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[np];
  if (!slot) {
    const int len = 4 * np + 1;
    DpssSet set = generate_dpss(len, 0.25, len);
    int kept = 0;
    for (int l = 0; l < len; ++l)
      if (set.eigenvalues[l] * (1.0 - set.eigenvalues[l]) > kBoundWeightFloor) ++kept;
    auto tapers = std::make_unique<BoundTapers>();
    tapers->sequences.resize(len, kept);
    tapers->weights.resize(kept);
    int j = 0;
    for (int l = 0; l < len; ++l) {
      const double w = set.eigenvalues[l] * (1.0 - set.eigenvalues[l]);
      if (w > kBoundWeightFloor) {
        tapers->sequences.col(j) = set.sequences.col(l);
        tapers->weights[j] = w;
        ++j;
      }
    }
    slot = std::move(tapers);
  }
  return *slot;
}

}  // namespace

CrossCorrelation cross_correlation(const Eigen::VectorXcd& p_r, const Eigen::VectorXcd& p_s) {
  if (p_r.size() != p_s.size())
    throw std::invalid_argument("cross_correlation: length mismatch");
  if (p_r.size() == 0) throw std::invalid_argument("cross_correlation: empty input");
  const int n = static_cast<int>(p_r.size());
  CrossCorrelation c;
  c.block_length = n;
  c.values.resize(2 * n - 1);
  for (int q = -(n - 1); q <= n - 1; ++q) {
    std::complex<double> acc = 0.0;
    for (int i = std::max(0, q); i < std::min(n, n + q); ++i)
      acc += std::conj(p_r[i]) * p_s[i - q];
    c.values[q + n - 1] = acc;
  }
  return c;
}

Eigen::VectorXcd bandlimited_shift(const Eigen::VectorXcd& seq, int center_index, double shift,
                                   int window_half_width, double half_bandwidth) {
  if (window_half_width < 1)
    throw std::invalid_argument("bandlimited_shift: window half-width must be >= 1");
  if (center_index < 0 || center_index >= seq.size())
    throw std::invalid_argument("bandlimited_shift: center index out of range");
  if (!(half_bandwidth > 0.0) || half_bandwidth > 0.5)
    throw std::invalid_argument("bandlimited_shift: half_bandwidth must be in (0, 0.5]");
  const int t = window_half_width;
  Eigen::VectorXcd out(2 * t + 1);
  for (int k = -t; k <= t; ++k) {
    std::complex<double> acc = 0.0;
    for (int i = 0; i < seq.size(); ++i) {
      const double q = static_cast<double>(i - center_index);
      acc += seq[i] * sinc(2.0 * half_bandwidth * (q - shift - k));
    }
    out[k + t] = acc;
  }
  return out;
}

double tail_energy(const Eigen::VectorXcd& seq_centered, int inner_half_width,
                   double* edge_diagnostic) {
  if (seq_centered.size() % 2 == 0)
    throw std::invalid_argument("tail_energy: expected an odd-length centered sequence");
  const int t = static_cast<int>(seq_centered.size() / 2);
  if (inner_half_width < 0 || inner_half_width >= t)
    throw std::invalid_argument("tail_energy: inner half-width must be in [0, T)");
  double acc = 0.0;
  for (int k = -t; k <= t; ++k)
    if (std::abs(k) > inner_half_width) acc += std::norm(seq_centered[k + t]);
  if (edge_diagnostic)
    *edge_diagnostic = std::norm(seq_centered[0]) + std::norm(seq_centered[2 * t]);
  return acc;
}

IbiReport ibi_energy_exact(const SignalingBasis& basis, const FrameLayout& layout,
                           const ChannelSpec& spec, int threads) {
  validate_inputs(basis, layout, spec, "ibi_energy_exact");
  const int n = basis.block_length;
  const int m = basis.used_dims;
  const int stride = layout.stride();
  const int victim = layout.num_blocks / 2;
  const int q_len = 2 * n - 1;

  // Block offsets for the L-frame plus two extra blocks per side (the L+4
  // truncation diagnostic of the finite-frame evaluation strategy).
  std::vector<int> deltas;
  std::vector<bool> is_outer;
  for (int d = -victim - 2; d <= layout.num_blocks + 1 - victim; ++d) {
    if (d == 0) continue;
    deltas.push_back(d);
    is_outer.push_back(d < -victim || d > layout.num_blocks - 1 - victim);
  }
  const int n_cols = static_cast<int>(deltas.size());

  // Per-path sinc projection columns; all-zero columns mean the guard fully
  // absorbs that (integer) path and its contribution is exactly zero.
  const int n_paths = static_cast<int>(spec.paths.size());
  std::vector<Eigen::VectorXd> inner_slots(n_paths), outer_slots(n_paths);

  PairCorrelations corr;
  bool corr_ready = false;
  std::mutex corr_mutex;
  auto ensure_corr = [&] {
    std::lock_guard<std::mutex> lock(corr_mutex);
    if (!corr_ready) {
      corr = pair_correlations(basis.matrix);
      corr_ready = true;
    }
  };

  // Quick scan: paths whose projections vanish identically need no GEMM.
  auto path_is_silent = [&](const PathSpec& p) {
    if (p.delay != std::floor(p.delay)) return false;
    for (int d : deltas) {
      const double x = p.delay + static_cast<double>(d) * stride;
      if (std::abs(x) <= n - 1) return false;  // lands inside the lag support
    }
    return true;
  };

  std::vector<int> active;
  for (int i = 0; i < n_paths; ++i)
    if (!path_is_silent(spec.paths[i])) active.push_back(i);
  if (!active.empty()) ensure_corr();

  parallel_for(static_cast<int>(active.size()), threads, [&](int job) {
    const int pi = active[job];
    const PathSpec& path = spec.paths[pi];
    Eigen::MatrixXd v(q_len, n_cols);
    for (int col = 0; col < n_cols; ++col)
      for (int qi = 0; qi < q_len; ++qi)
        v(qi, col) =
            sinc(static_cast<double>(qi - (n - 1)) - path.delay -
                 static_cast<double>(deltas[col]) * stride);
    Eigen::MatrixXd lam_re = corr.re * v;
    Eigen::MatrixXd lam_im = corr.im * v;
    const double w = std::norm(path.gain);
    Eigen::VectorXd inner = Eigen::VectorXd::Zero(static_cast<long>(m) * m);
    Eigen::VectorXd outer = Eigen::VectorXd::Zero(static_cast<long>(m) * m);
    for (int col = 0; col < n_cols; ++col) {
      Eigen::VectorXd e = w * (lam_re.col(col).array().square() +
                               lam_im.col(col).array().square()).matrix();
      (is_outer[col] ? outer : inner) += e;
    }
    // Row p = s*M + r; fold over s to get per-waveform energies.
    using MapT = Eigen::Map<const Eigen::MatrixXd>;
    inner_slots[pi] = MapT(inner.data(), m, m).rowwise().sum();
    outer_slots[pi] = MapT(outer.data(), m, m).rowwise().sum();
  });

  Eigen::VectorXd e_r = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd e_r_ext = Eigen::VectorXd::Zero(m);
  for (int i = 0; i < n_paths; ++i) {
    if (inner_slots[i].size() != 0) e_r += inner_slots[i];
    if (outer_slots[i].size() != 0) e_r_ext += outer_slots[i];
  }
  e_r_ext += e_r;

  IbiReport report;
  report.domain = basis.domain;
  report.eta = basis.utilization;
  report.used_dims = m;
  report.channel_id = spec.id;
  report.layout = layout;
  report.per_waveform_energy = e_r;
  report.total_energy = e_r.sum();
  const double mean = report.total_energy / m;
  const double mean_ext = e_r_ext.sum() / m;
  report.s2ibi_db = -10.0 * std::log10(mean);
  const double s2_ext = -10.0 * std::log10(mean_ext);
  report.truncation_mismatch_db =
      (std::isinf(report.s2ibi_db) && std::isinf(s2_ext))
          ? 0.0
          : std::abs(report.s2ibi_db - s2_ext);
  return report;
}

double ibi_bound(const SignalingBasis& basis, const FrameLayout& layout, const ChannelSpec& spec,
                 int subset_size, int threads) {
  validate_inputs(basis, layout, spec, "ibi_bound");
  const int m = basis.used_dims;
  if (subset_size < 0) subset_size = m;
  if (subset_size < 1 || subset_size > m)
    throw std::invalid_argument("ibi_bound: subset_size must be in [1, M]");
  const int n = basis.block_length;
  const int stride = layout.stride();
  constexpr double w_op = 0.5;  // full-band shift operator

  // Group fractional paths by floor(tau); the closed correlation tail that the
  // block grid samples starts at |k| = stride - floor(tau), so the taper
  // window is one less.
  std::map<int, double> group_power;
  for (const auto& p : spec.paths) {
    const double frac = p.delay - std::floor(p.delay);
    if (frac == 0.0) continue;
    const int np = stride - static_cast<int>(std::floor(p.delay)) - 1;
    if (np <= n - 1)
      throw std::invalid_argument(
          "ibi_bound: delay spread too large for the frame stride (correlation support "
          "exceeds the taper window)");
    group_power[np] += std::norm(p.gain);
  }
  if (group_power.empty()) return 0.0;  // vacuous: integer-tap channel

  const PairCorrelations corr = pair_correlations(basis.matrix.leftCols(subset_size));
  const int q_len = 2 * n - 1;

  std::vector<std::pair<int, double>> groups(group_power.begin(), group_power.end());
  std::vector<double> partial(groups.size(), 0.0);
  parallel_for(static_cast<int>(groups.size()), threads, [&](int gi) {
    const auto [np, power] = groups[gi];
    const BoundTapers& tapers = bound_tapers(np);
    // Even-index samples s_l[2q] centered: row q + N - 1 <-> taper index 2q + 2Np.
    Eigen::MatrixXd s(q_len, tapers.weights.size());
    for (int qi = 0; qi < q_len; ++qi)
      s.row(qi) = tapers.sequences.row(2 * (qi - (n - 1)) + 2 * np);
    const Eigen::MatrixXd proj_re = corr.re * s;
    const Eigen::MatrixXd proj_im = corr.im * s;
    double acc = 0.0;
    for (int l = 0; l < tapers.weights.size(); ++l)
      acc += tapers.weights[l] *
             (proj_re.col(l).squaredNorm() + proj_im.col(l).squaredNorm());
    partial[gi] = power * acc / (w_op * w_op);
  });
  double total = 0.0;
  for (double v : partial) total += v;
  return total;
}

std::vector<IbiReport> s2ibi_sweep(const std::vector<Domain>& domains,
                                   const std::vector<double>& etas, const ChannelSpec& spec,
                                   const FrameLayout& layout, int threads) {
  if (domains.empty() || etas.empty())
    throw std::invalid_argument("s2ibi_sweep: empty domain or eta list");
  std::vector<IbiReport> table;
  table.reserve(domains.size() * etas.size());
  for (Domain domain : domains) {
    for (double eta : etas) {
      const SignalingBasis basis = build_basis(domain, layout.block_length, eta);
      IbiReport report = ibi_energy_exact(basis, layout, spec, threads);
      const double bound = ibi_bound(basis, layout, spec, basis.used_dims, threads);
      report.bound_energy = bound;
      report.bound_vacuous = bound == 0.0;
      report.s2ibi_lower_bound_db = -10.0 * std::log10(bound / basis.used_dims);
      table.push_back(std::move(report));
    }
  }
  return table;
}

}  // namespace ibilab
