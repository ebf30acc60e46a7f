#include "ibilab/prolate.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ibilab/errors.hpp"

namespace ibilab {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Compensated dot product (Ogita-Rump-Oishi Dot2): result accurate to ~u plus
// u^2-level accumulation error. Needed because plain dots carry ~n*u noise,
// which is visible in lambda*(1-lambda) for the interference bound.
double dot2(const double* a, const double* b, int n) {
  double p = 0.0, s = 0.0;
  for (int i = 0; i < n; ++i) {
    double h = a[i] * b[i];
    double r = std::fma(a[i], b[i], -h);
    double x = p + h;
    double z = x - p;
    double y = (p - (x - z)) + (h - z);
    p = x;
    s += y + r;
  }
  return p + s;
}

}  // namespace

Eigen::MatrixXd sinc_kernel_matrix(int length, double half_bandwidth) {
  if (length < 1) throw std::invalid_argument("sinc_kernel_matrix: length must be >= 1");
  if (!(half_bandwidth > 0.0) || half_bandwidth > 0.5)
    throw std::invalid_argument("sinc_kernel_matrix: half_bandwidth must be in (0, 0.5]");
  Eigen::MatrixXd a(length, length);
  for (int m = 0; m < length; ++m) {
    a(m, m) = 2.0 * half_bandwidth;
    for (int n = 0; n < m; ++n) {
      const int d = m - n;
      const double x = 2.0 * half_bandwidth * d;
      double v;
      if (x == std::nearbyint(x)) {
        v = 0.0;  // sin(pi * integer) is exactly zero
      } else {
        v = std::sin(kPi * x) / (kPi * d);
      }
      a(m, n) = v;
      a(n, m) = v;
    }
  }
  return a;
}

DpssSet generate_dpss(int length, double half_bandwidth, int order) {
  if (length < 1) throw std::invalid_argument("generate_dpss: length must be >= 1");
  if (!(half_bandwidth > 0.0) || half_bandwidth > 0.5)
    throw std::invalid_argument("generate_dpss: half_bandwidth must be in (0, 0.5]");
  if (order < 1) throw std::invalid_argument("generate_dpss: order must be >= 1");
  if (order > length) throw std::invalid_argument("generate_dpss: order exceeds length");

  const int n = length;
  Eigen::VectorXd diag(n), sub(std::max(n - 1, 0));
  const double c = std::cos(2.0 * kPi * half_bandwidth);
  for (int i = 0; i < n; ++i) {
    const double t = 0.5 * (n - 1 - 2 * i);
    diag[i] = t * t * c;
  }
  for (int i = 1; i < n; ++i) sub[i - 1] = 0.5 * static_cast<double>(i) * (n - i);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success)
    throw numerical_error("generate_dpss: tridiagonal eigensolver did not converge (N=" +
                          std::to_string(n) + ", W=" + std::to_string(half_bandwidth) + ")");

  DpssSet set;
  set.length = n;
  set.half_bandwidth = half_bandwidth;
  set.order = order;
  set.sequences.resize(n, order);
  set.eigenvalues.resize(order);

  // Largest tridiagonal eigenvalue <-> most concentrated sequence (order 0).
  for (int l = 0; l < order; ++l) {
    Eigen::VectorXd v = solver.eigenvectors().col(n - 1 - l);
    // Parity of order l is (-1)^l; project to make the symmetry exact.
    const double parity = (l % 2 == 0) ? 1.0 : -1.0;
    Eigen::VectorXd sym = 0.5 * (v + parity * v.reverse());
    const double nrm = sym.norm();
    if (nrm < 0.7)
      throw numerical_error("generate_dpss: eigenvector parity projection lost norm at order " +
                            std::to_string(l));
    v = sym / nrm;
    // Sign convention.
    bool flip = false;
    if (l % 2 == 0) {
      flip = v.sum() < 0.0;
    } else {
      const double thresh = 1e-12 * v.cwiseAbs().maxCoeff();
      for (int i = 0; i < (n + 1) / 2; ++i) {
        if (std::abs(v[i]) > thresh) {
          flip = v[i] < 0.0;
          break;
        }
      }
    }
    if (flip) v = -v;
    set.sequences.col(l) = v;
  }

  // Concentrations as Rayleigh quotients against the sinc kernel.
  const Eigen::MatrixXd kernel = sinc_kernel_matrix(n, half_bandwidth);
  Eigen::VectorXd av(n);
  for (int l = 0; l < order; ++l) {
    const double* v = set.sequences.col(l).data();
    for (int row = 0; row < n; ++row) av[row] = dot2(kernel.col(row).data(), v, n);
    set.eigenvalues[l] = dot2(av.data(), v, n);
  }

  // Clamp so lambda*(1-lambda) stays non-negative, then keep the order
  // consistent with the tridiagonal ranking.
  for (int l = 0; l < order; ++l) {
    double& lam = set.eigenvalues[l];
    if (lam < 1e-300) {
      lam = 1e-300;
      set.clamped.push_back(l);
    } else if (lam > 1.0 - 1e-16) {
      lam = 1.0 - 1e-16;
      set.clamped.push_back(l);
    }
    if (l > 0 && lam > set.eigenvalues[l - 1]) lam = set.eigenvalues[l - 1];
  }
  return set;
}

}  // namespace ibilab
