#pragma once

#include <complex>
#include <vector>

#include "machlimit/exec.hpp"

namespace machlimit {

// Gaussian-windowed time-frequency transform of a real time series,
//   W v(t,tau) = (2 pi^3)^{-1/4} eps^{-3/4} int exp((i(t-s)tau - (t-s)^2)/eps) v(s) ds,
// evaluated by direct trapezoid quadrature per (t, tau) pair.  With this
// prefactor the map is an isometry from L2(ds) to L2(dt dtau), which the
// tests verify against quadrature refinement.
struct WavePacketGrid {
  double t_min = 0.0, t_max = 1.0;
  int n_t = 64;
  double tau_min = -1.0, tau_max = 1.0;
  int n_tau = 64;

  double t(int k) const { return t_min + (t_max - t_min) * k / (n_t - 1); }
  double tau(int m) const {
    return tau_min + (tau_max - tau_min) * m / (n_tau - 1);
  }
  double dt() const { return (t_max - t_min) / (n_t - 1); }
  double dtau() const { return (tau_max - tau_min) / (n_tau - 1); }
};

struct WavePacketTransform {
  WavePacketGrid grid;
  double eps = 0.0;
  // tau is the fast index: entry(m, k) = values[m + n_tau * k].
  std::vector<std::complex<double>> values;
  std::vector<double> magnitude;

  const std::complex<double>& at(int m_tau, int k_t) const {
    return values[static_cast<std::size_t>(m_tau) +
                  static_cast<std::size_t>(grid.n_tau) * k_t];
  }
};

// signal sampled at s = s0 + m*ds, m = 0..n-1; requires at least eight
// samples per Gaussian width sqrt(eps) (else SamplingError) and a compactly
// supported (zero-padded) signal.
WavePacketTransform wave_packet_transform(const std::vector<double>& signal,
                                          double s0, double ds, double eps,
                                          const WavePacketGrid& out,
                                          Exec exec = Exec::Parallel);

// |W v|_{L2(dt dtau)}^2 by trapezoid quadrature on the output grid.
double transform_l2_sq(const WavePacketTransform& w);
double signal_l2_sq(const std::vector<double>& signal, double ds);

}  // namespace machlimit
