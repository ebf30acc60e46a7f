// Acceptance suite: one pass/fail line per criterion, non-zero exit on any
// failure. Heavy sweeps are computed once and shared across criteria.

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "ibilab/config.hpp"
#include "ibilab/ibi.hpp"
#include "ibilab/prolate.hpp"
#include "ibilab/rng.hpp"
#include "ibilab/simulate.hpp"

using namespace ibilab;

namespace {

constexpr std::uint64_t kSeed = 3;  // reference experiment seed
const std::vector<double> kEtaGrid{0.9, 0.92, 0.93, 0.95, 0.96, 0.98, 1.0};

int failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

struct SweepTable {
  // (domain, eta) -> report, plus ordered eta list per domain
  std::map<std::pair<std::string, double>, IbiReport> cells;
  const IbiReport& at(Domain d, double eta) const { return cells.at({to_string(d), eta}); }
};

SweepTable run_sweep(const ChannelSpec& channel, const FrameLayout& layout) {
  SweepTable table;
  const auto rows = s2ibi_sweep({Domain::TD, Domain::FD, Domain::PS}, kEtaGrid, channel, layout);
  size_t i = 0;
  for (Domain d : {Domain::TD, Domain::FD, Domain::PS})
    for (double eta : kEtaGrid) table.cells[{to_string(d), eta}] = rows[i++];
  return table;
}

// ---- criterion 1 ------------------------------------------------------------

void criterion1(const FrameLayout& layout) {
  bool pass = true;
  double worst = 0.0;
  for (const char* preset : {"mild-integer", "severe-integer"}) {
    const ChannelSpec channel = channel_preset(preset, kSeed);
    for (Domain d : {Domain::TD, Domain::FD, Domain::PS})
      for (double eta : kEtaGrid) {
        const IbiReport r = ibi_energy_exact(build_basis(d, layout.block_length, eta), layout,
                                             channel);
        // unit symbol energy, so total IBI is already relative to signal energy
        const double rel = r.total_energy / r.used_dims;
        worst = std::max(worst, rel);
        if (rel > 1e-18) pass = false;
      }
  }
  report(1, pass,
         "zero-IBI certificate for integer-tap channels, all domains/eta (worst relative "
         "energy " + fmt(worst) + ", threshold 1e-18)");
}

// ---- criteria 2-5 share the fractional sweeps --------------------------------

void criterion2(const SweepTable& mild, const SweepTable& severe) {
  bool pass = true;
  std::string detail;
  const struct {
    const SweepTable* table;
    double anchor;
    const char* name;
  } cases[] = {{&mild, 28.7, "mild"}, {&severe, 26.7, "severe"}};
  for (const auto& c : cases) {
    const double td = c.table->at(Domain::TD, 1.0).s2ibi_db;
    const double fd = c.table->at(Domain::FD, 1.0).s2ibi_db;
    const double ps = c.table->at(Domain::PS, 1.0).s2ibi_db;
    const double spread = std::max({td, fd, ps}) - std::min({td, fd, ps});
    if (spread > 0.01) pass = false;
    if (std::abs(td - c.anchor) > 2.0) pass = false;
    detail += std::string(c.name) + " " + fmt(td) + " dB (target " + fmt(c.anchor) +
              "+-2, spread " + fmt(spread) + " dB); ";
  }
  report(2, pass, "unitary equivalence at eta=1: " + detail);
}

void criterion3(const SweepTable& mild) {
  const double ps1 = mild.at(Domain::PS, 1.0).s2ibi_db;
  const double ps098 = mild.at(Domain::PS, 0.98).s2ibi_db;
  const double ps09 = mild.at(Domain::PS, 0.9).s2ibi_db;
  const double td09 = mild.at(Domain::TD, 0.9).s2ibi_db;
  const double fd09 = mild.at(Domain::FD, 0.9).s2ibi_db;
  const double slope = ps098 - ps1;  // per 0.02 decrease near eta=1
  const bool pass = slope >= 8.0 && ps09 >= 90.0 && td09 <= 35.0 && fd09 <= 35.0;
  report(3, pass,
         "PS advantage (mild fractional): slope " + fmt(slope) + " dB per 0.02 (>=8), PS(0.9) " +
             fmt(ps09) + " dB (>=90), TD(0.9) " + fmt(td09) + " / FD(0.9) " + fmt(fd09) +
             " dB (<=35)");
}

void criterion4(const SweepTable& severe) {
  const double td = severe.at(Domain::TD, 0.9).s2ibi_db;
  const double fd = severe.at(Domain::FD, 0.9).s2ibi_db;
  const double ps = severe.at(Domain::PS, 0.9).s2ibi_db;
  const bool td_ok = std::abs(td - 27.4) <= 2.0;
  const bool fd_ok = std::abs(fd - 30.6) <= 2.0;
  const bool ps_ok = ps >= std::max(td, fd) + 20.0;
  const bool pass = td_ok && fd_ok && ps_ok;
  std::string detail = "severe fractional at eta=0.9: TD " + fmt(td) + " dB (target 27.4+-2, " +
                       (td_ok ? "ok" : "out") + "), FD " + fmt(fd) + " dB (target 30.6+-2, " +
                       (fd_ok ? "ok" : "out") + "), PS " + fmt(ps) + " dB (>= max+20, " +
                       (ps_ok ? "ok" : "out") + ")";
  report(4, pass, detail);
  if (!fd_ok) {
    std::printf(
        "       note: exact two-sided IBI puts FD at %.2f dB and TD at %.2f dB; the stated "
        "targets match these values with the TD/FD labels transposed (|%.2f-27.4| = %.2f, "
        "|%.2f-30.6| = %.2f), consistent with a transposition in the source text. The FD "
        "construction (DFT columns k=0..M-1) follows the source's own FD formula and its "
        "flat-floor BER narrative; see the decisions ledger.\n",
        fd, td, fd, std::abs(fd - 27.4), td, std::abs(td - 30.6));
  }
}

void criterion5(const SweepTable& mild, const SweepTable& severe) {
  bool dominance = true;
  bool below = true;
  bool trend = true;
  int cells = 0;
  for (const SweepTable* table : {&mild, &severe}) {
    for (Domain d : {Domain::TD, Domain::FD, Domain::PS}) {
      for (double eta : kEtaGrid) {
        const IbiReport& r = table->at(d, eta);
        ++cells;
        if (!r.bound_energy || r.bound_vacuous) {
          dominance = false;
          continue;
        }
        if (*r.bound_energy < r.total_energy * (1.0 - 1e-12)) dominance = false;
        if (*r.s2ibi_lower_bound_db > r.s2ibi_db) below = false;
      }
    }
    // PS bound tracks the exact trend across eta (same step direction)
    for (size_t i = 1; i < kEtaGrid.size(); ++i) {
      const IbiReport& lo = table->at(Domain::PS, kEtaGrid[i - 1]);
      const IbiReport& hi = table->at(Domain::PS, kEtaGrid[i]);
      const double d_exact = lo.s2ibi_db - hi.s2ibi_db;
      const double d_bound = *lo.s2ibi_lower_bound_db - *hi.s2ibi_lower_bound_db;
      if (d_exact * d_bound <= 0.0) trend = false;
    }
  }
  report(5, dominance && below && trend,
         "bound dominance over " + std::to_string(cells) +
             " fractional sweep cells (violations: " + (dominance ? "none" : "present") +
             "), lower bound below exact (" + (below ? "yes" : "no") + "), PS trend matched (" +
             (trend ? "yes" : "no") + ")");
}

// ---- criterion 6: BER floors --------------------------------------------------

void criterion6(const FrameLayout& layout) {
  const ChannelSpec channel = channel_preset("mild-fractional", kSeed);
  auto ber_at = [&](Domain d, double eta) {
    SimConfig cfg;
    cfg.domain = d;
    cfg.utilization = eta;
    cfg.layout = layout;
    cfg.channel = channel;
    cfg.snr_grid_db = {20.0, 35.0};
    cfg.num_frames = 100;
    cfg.seed = kSeed;
    const BerCurve curve = run_ber(cfg);
    return std::pair{curve.points[0].ber, curve.points[1].ber};
  };

  const auto [td20, td35] = ber_at(Domain::TD, 1.0);
  const bool td_ok = td35 >= 1e-3 && td35 <= 1e-2;

  bool fd_ok = true;
  double fd_lo = 1.0, fd_hi = 0.0;
  for (double eta : kEtaGrid) {
    const auto [b20, b35] = ber_at(Domain::FD, eta);
    fd_lo = std::min(fd_lo, b35);
    fd_hi = std::max(fd_hi, b35);
    if (b35 < 5e-4 || b35 > 5e-3) fd_ok = false;
  }

  bool ps_ok = true;
  for (double eta : kEtaGrid) {
    if (eta > 0.98) continue;
    const auto [b20, b35] = ber_at(Domain::PS, eta);
    if (b35 > b20 / 3.0) ps_ok = false;
  }

  report(6, td_ok && fd_ok && ps_ok,
         "BER floors (mild fractional, 100 frames): TD eta=1 floor " + fmt(td35) +
             " (in [1e-3,1e-2]: " + (td_ok ? "yes" : "no") + "), FD floors in [" + fmt(fd_lo) +
             ", " + fmt(fd_hi) + "] (window [5e-4,5e-3]: " + (fd_ok ? "yes" : "no") +
             "), PS eta<=0.98 floor-free (" + (ps_ok ? "yes" : "no") + ")");
}

// ---- criterion 7: oracle equivalence ------------------------------------------

void criterion7() {
  // (a) Monte-Carlo expectation oracle at small scale.
  const FrameLayout layout{5, 8, 2, GuardKind::ZeroPrefix};
  ChannelSpec channel;
  channel.paths = {PathSpec{{1.0, 0.0}, 0.5, 0.0}};
  channel.normalized = true;
  const SignalingBasis basis = build_basis(Domain::TD, 8, 1.0);
  const double exact_mean =
      ibi_energy_exact(basis, layout, channel).total_energy / basis.used_dims;

  const int n = 8, s = layout.stride(), d = layout.guard_length, blocks = 5, victim = 2;
  const long t = layout.total_length();
  Eigen::MatrixXcd h(t, t);
  for (long a = 0; a < t; ++a)
    for (long b = 0; b < t; ++b) h(a, b) = sinc(static_cast<double>(a - b) - 0.5);
  const Eigen::MatrixXcd h_victim = h.block(victim * s + d, victim * s + d, n, n);

  const long long trials = 1000000;
  double acc = 0.0;
  rng::Stream stream(rng::derive(kSeed, 0x6f7261636cULL));
  Eigen::VectorXcd frame(t);
  for (long long trial = 0; trial < trials; ++trial) {
    frame.setZero();
    Eigen::VectorXcd victim_symbols(n);
    for (int l = 0; l < blocks; ++l) {
      std::vector<int> bits(2 * n);
      for (auto& b : bits) b = stream.next_bit();
      const Eigen::VectorXcd sym = qpsk_map(bits);
      if (l == victim) victim_symbols = sym;
      frame.segment(l * s + d, n) = sym;  // TD basis at eta=1 is the identity
    }
    const Eigen::VectorXcd received = h * frame;
    const Eigen::VectorXcd beta =
        received.segment(victim * s + d, n) - h_victim * victim_symbols;
    acc += beta.squaredNorm();
  }
  const double mc_mean = acc / (static_cast<double>(trials) * n);
  const double rel = std::abs(mc_mean - exact_mean) / exact_mean;
  const bool mc_ok = rel <= 0.01;

  // (b) tridiagonal DPSS vs dense eigendecomposition for N <= 64.
  bool dpss_ok = true;
  double worst_val = 0.0, worst_vec = 0.0;
  for (int n_len : {2, 4, 8, 16, 32, 64}) {
    for (double w : {0.1, 0.25, 0.4}) {
      const int k = std::min(n_len, std::max(2, static_cast<int>(2 * w * n_len) + 2));
      const DpssSet set = generate_dpss(n_len, w, k);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sinc_kernel_matrix(n_len, w));
      const Eigen::VectorXd values = es.eigenvalues().reverse();
      const Eigen::MatrixXd vectors = es.eigenvectors().rowwise().reverse();
      for (int l = 0; l < k; ++l) {
        const double clamped = std::min(std::max(values[l], 1e-300), 1.0 - 1e-16);
        worst_val = std::max(worst_val, std::abs(set.eigenvalues[l] - clamped));
        if (std::abs(set.eigenvalues[l] - clamped) > 1e-8) dpss_ok = false;
        const double gap_lo = l + 1 < n_len ? values[l] - values[l + 1] : 1.0;
        const double gap_hi = l > 0 ? values[l - 1] - values[l] : 1.0;
        if (std::min(gap_lo, gap_hi) < 1e-6) continue;  // vector comparison ill-posed
        const double err = 1.0 - std::abs(vectors.col(l).dot(set.sequences.col(l)));
        worst_vec = std::max(worst_vec, err);
        if (err > 1e-6) dpss_ok = false;
      }
    }
  }

  report(7, mc_ok && dpss_ok,
         "oracle equivalence: Monte-Carlo IBI (10^6 frames) rel. err " + fmt(rel) +
             " (<=0.01), DPSS vs dense eigensolve worst value err " + fmt(worst_val) +
             " (<=1e-8), worst vector err " + fmt(worst_vec) + " (<=1e-6)");
}

// ---- criterion 8: property suites ---------------------------------------------

void criterion8() {
  bool pass = true;
  std::string broken;

  // DPSS orthonormality / ordering / eigen-relation.
  for (const auto& [n, w, k] : {std::tuple{32, 0.2, 10}, {129, 0.45, 60}}) {
    const DpssSet set = generate_dpss(n, w, k);
    const Eigen::MatrixXd gram =
        set.sequences.transpose() * set.sequences - Eigen::MatrixXd::Identity(k, k);
    if (gram.cwiseAbs().maxCoeff() > 1e-10) pass = false, broken += "dpss-orthonormality ";
    const Eigen::MatrixXd kernel = sinc_kernel_matrix(n, w);
    for (int l = 0; l < k; ++l) {
      if (l > 0 && set.eigenvalues[l] > set.eigenvalues[l - 1])
        pass = false, broken += "dpss-ordering ";
      if ((kernel * set.sequences.col(l) - set.eigenvalues[l] * set.sequences.col(l)).norm() >
          1e-8)
        pass = false, broken += "dpss-eigenrelation ";
    }
  }

  // Cross-correlation Hermitian symmetry.
  {
    rng::Stream s(17);
    Eigen::VectorXcd a(12), b(12);
    for (int i = 0; i < 12; ++i) {
      a[i] = {s.next_gauss(), s.next_gauss()};
      b[i] = {s.next_gauss(), s.next_gauss()};
    }
    const CrossCorrelation cab = cross_correlation(a, b), cba = cross_correlation(b, a);
    for (int q = -11; q <= 11; ++q)
      if (std::abs(cab.at(q) - std::conj(cba.at(-q))) > 1e-12)
        pass = false, broken += "xcorr-hermitian ";
  }

  // Delay matrix Toeplitz + integer-shift exactness.
  {
    const Eigen::MatrixXd h = delay_matrix(10, 3.7);
    for (int l = 1; l < 10 && pass; ++l)
      for (int k = 1; k < 10; ++k)
        if (h(l, k) != h(l - 1, k - 1)) {
          pass = false;
          broken += "delay-toeplitz ";
          break;
        }
    const Eigen::MatrixXd shift = delay_matrix(9, 4.0);
    for (int l = 0; l < 9; ++l)
      for (int k = 0; k < 9; ++k)
        if (shift(l, k) != (l - k == 4 ? 1.0 : 0.0)) pass = false, broken += "delay-shift ";
  }

  // Modulate/demodulate and assemble/extract round trips.
  {
    rng::Stream s(23);
    for (Domain dom : {Domain::TD, Domain::FD, Domain::PS}) {
      const SignalingBasis basis = build_basis(dom, 24, 0.9);
      Eigen::VectorXcd d(basis.used_dims);
      for (int i = 0; i < d.size(); ++i) d[i] = {s.next_gauss(), s.next_gauss()};
      if ((demodulate(basis, modulate(basis, d)) - d).cwiseAbs().maxCoeff() > 1e-10)
        pass = false, broken += "mod-demod ";
    }
    const FrameLayout layout{4, 6, 3, GuardKind::ZeroPrefix};
    std::vector<Eigen::VectorXcd> blocks;
    for (int l = 0; l < 4; ++l) {
      Eigen::VectorXcd b(6);
      for (int i = 0; i < 6; ++i) b[i] = {s.next_gauss(), s.next_gauss()};
      blocks.push_back(b);
    }
    const Eigen::VectorXcd frame = assemble_frame(layout, blocks);
    for (int l = 0; l < 4; ++l)
      if ((extract_block(layout, frame, l) - blocks[l]).norm() != 0.0)
        pass = false, broken += "frame-roundtrip ";
  }

  // Determinism under a fixed seed.
  {
    SimConfig cfg;
    cfg.domain = Domain::FD;
    cfg.utilization = 0.9;
    cfg.layout = FrameLayout{5, 16, 3, GuardKind::ZeroPrefix};
    cfg.channel = exponential_profile(0.4, 0.5, 2.5, 7, true);
    cfg.snr_grid_db = {8.0};
    cfg.num_frames = 5;
    cfg.seed = 19;
    const BerCurve a = run_ber(cfg, 2), b = run_ber(cfg, 3);
    if (a.points[0].error_count != b.points[0].error_count)
      pass = false, broken += "ber-determinism ";
    const ChannelSpec c1 = exponential_profile(0.5, 0.1, 15.0, 3, true);
    const ChannelSpec c2 = exponential_profile(0.5, 0.1, 15.0, 3, true);
    for (size_t i = 0; i < c1.paths.size(); ++i)
      if (c1.paths[i].gain != c2.paths[i].gain) pass = false, broken += "profile-determinism ";
  }

  report(8, pass, pass ? "property suites: all green"
                       : "property suites broken: " + broken);
}

}  // namespace

int main() {
  const FrameLayout layout{21, 129, 16, GuardKind::ZeroPrefix};
  std::printf("acceptance suite: N=%d, L=%d, D=%d, seed=%llu\n", layout.block_length,
              layout.num_blocks, layout.guard_length,
              static_cast<unsigned long long>(kSeed));
  std::fflush(stdout);

  criterion1(layout);

  const SweepTable mild = run_sweep(channel_preset("mild-fractional", kSeed), layout);
  const SweepTable severe = run_sweep(channel_preset("severe-fractional", kSeed), layout);
  criterion2(mild, severe);
  criterion3(mild);
  criterion4(severe);
  criterion5(mild, severe);
  criterion6(layout);
  criterion7();
  criterion8();

  std::printf("acceptance: %d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
