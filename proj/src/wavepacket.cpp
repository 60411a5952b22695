#include "machlimit/wavepacket.hpp"

#include <cmath>
#include <sstream>

#include "machlimit/errors.hpp"

namespace machlimit {

WavePacketTransform wave_packet_transform(const std::vector<double>& signal,
                                          double s0, double ds, double eps,
                                          const WavePacketGrid& out, Exec exec) {
  if (signal.size() < 8) throw SamplingError("wave_packet_transform: signal too short");
  if (!(eps > 0.0)) throw SamplingError("wave_packet_transform: eps must be positive");
  if (!(ds > 0.0)) throw SamplingError("wave_packet_transform: ds must be positive");
  const double width = std::sqrt(eps);
  if (ds > width / 8.0) {
    std::ostringstream m;
    m << "wave_packet_transform: undersampled signal, ds=" << ds
      << " exceeds sqrt(eps)/8=" << width / 8.0;
    throw SamplingError(m.str());
  }
  if (out.n_t < 2 || out.n_tau < 2)
    throw SamplingError("wave_packet_transform: output grid needs >= 2 points per axis");

  WavePacketTransform W;
  W.grid = out;
  W.eps = eps;
  W.values.assign(static_cast<std::size_t>(out.n_t) * out.n_tau, {0.0, 0.0});
  W.magnitude.assign(W.values.size(), 0.0);

  const double pref = std::pow(2.0 * M_PI * M_PI * M_PI, -0.25) *
                      std::pow(eps, -0.75) * ds;
  const int n = static_cast<int>(signal.size());

  auto body = [&](int kt) {
    const double t = out.t(kt);
    for (int m = 0; m < out.n_tau; ++m) {
      const double tau = out.tau(m);
      double re = 0.0, im = 0.0;
      for (int ms = 0; ms < n; ++ms) {
        const double s = s0 + ms * ds;
        const double d = t - s;
        const double gauss = std::exp(-d * d / eps);
        if (gauss < 1e-300) continue;
        const double phase = d * tau / eps;
        const double wq = (ms == 0 || ms == n - 1) ? 0.5 : 1.0;
        const double a = wq * gauss * signal[static_cast<std::size_t>(ms)];
        re += a * std::cos(phase);
        im += a * std::sin(phase);
      }
      const std::size_t idx =
          static_cast<std::size_t>(m) + static_cast<std::size_t>(out.n_tau) * kt;
      W.values[idx] = {pref * re, pref * im};
      W.magnitude[idx] = std::abs(W.values[idx]);
    }
  };

  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (int kt = 0; kt < out.n_t; ++kt) body(kt);
  } else {
    for (int kt = 0; kt < out.n_t; ++kt) body(kt);
  }
  return W;
}

double transform_l2_sq(const WavePacketTransform& w) {
  double total = 0.0;
  for (int kt = 0; kt < w.grid.n_t; ++kt) {
    const double wt = (kt == 0 || kt == w.grid.n_t - 1) ? 0.5 : 1.0;
    for (int m = 0; m < w.grid.n_tau; ++m) {
      const double wm = (m == 0 || m == w.grid.n_tau - 1) ? 0.5 : 1.0;
      const double mag = w.magnitude[static_cast<std::size_t>(m) +
                                     static_cast<std::size_t>(w.grid.n_tau) * kt];
      total += wt * wm * mag * mag;
    }
  }
  return total * w.grid.dt() * w.grid.dtau();
}

double signal_l2_sq(const std::vector<double>& signal, double ds) {
  double total = 0.0;
  const std::size_t n = signal.size();
  for (std::size_t m = 0; m < n; ++m) {
    const double wq = (m == 0 || m == n - 1) ? 0.5 : 1.0;
    total += wq * signal[m] * signal[m];
  }
  return total * ds;
}

}  // namespace machlimit
