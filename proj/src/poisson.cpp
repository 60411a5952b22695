#include "machlimit/poisson.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

namespace machlimit {

namespace {
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct PoissonSolver::Impl {
  int n1, n2, nn3, n3;
  int nc1;   // halved tangential axis after r2c
  int nct;   // complex modes per x3 plane
  double* real_buf = nullptr;
  fftw_complex* cplx_buf = nullptr;
  fftw_plan fwd_tan = nullptr;
  fftw_plan bwd_tan = nullptr;
  fftw_plan dct = nullptr;
  std::vector<double> lam_tan;
  std::vector<double> lam_norm;
  std::vector<bool> tan_null;

  ~Impl() {
    std::lock_guard<std::mutex> lock(plan_mutex());
    if (fwd_tan) fftw_destroy_plan(fwd_tan);
    if (bwd_tan) fftw_destroy_plan(bwd_tan);
    if (dct) fftw_destroy_plan(dct);
    if (real_buf) fftw_free(real_buf);
    if (cplx_buf) fftw_free(cplx_buf);
  }
};

PoissonSolver::PoissonSolver(const Grid& g) : g_(g), impl_(new Impl) {
  Impl& im = *impl_;
  im.n1 = g.nodes1();
  im.n2 = g.nodes2();
  im.nn3 = g.nodes3();
  im.n3 = g.n3;
  im.nc1 = im.n1 / 2 + 1;
  im.nct = im.nc1 * im.n2;

  const std::size_t nreal = static_cast<std::size_t>(im.n1) * im.n2 * im.nn3;
  const std::size_t ncplx = static_cast<std::size_t>(im.nct) * im.nn3;

  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    im.real_buf = fftw_alloc_real(nreal);
    im.cplx_buf = fftw_alloc_complex(ncplx);

    // Tangential transform: row-major dims {n2, n1}, x1 fastest.
    int rank = g.dim == 3 ? 2 : 1;
    int n[2] = {g.dim == 3 ? im.n2 : im.n1, im.n1};
    int* np = g.dim == 3 ? n : &n[1];
    im.fwd_tan = fftw_plan_many_dft_r2c(rank, np, im.nn3, im.real_buf, nullptr,
                                        1, im.n1 * im.n2, im.cplx_buf, nullptr,
                                        1, im.nct, FFTW_ESTIMATE);
    im.bwd_tan = fftw_plan_many_dft_c2r(rank, np, im.nn3, im.cplx_buf, nullptr,
                                        1, im.nct, im.real_buf, nullptr, 1,
                                        im.n1 * im.n2, FFTW_ESTIMATE);

    // DCT-I along the wall axis applied to re/im parts independently.
    int n3n = im.nn3;
    fftw_r2r_kind kind = FFTW_REDFT00;
    im.dct = fftw_plan_many_r2r(1, &n3n, 2 * im.nct,
                                reinterpret_cast<double*>(im.cplx_buf), nullptr,
                                2 * im.nct, 1,
                                reinterpret_cast<double*>(im.cplx_buf), nullptr,
                                2 * im.nct, 1, &kind, FFTW_ESTIMATE);
    if (!im.fwd_tan || !im.bwd_tan || !im.dct)
      throw SolverError("PoissonSolver: FFTW planning failed");
  }

  // Symbols of the composed centered stencil.  Structural zeros (mean and
  // Nyquist) are set exactly so null modes are detected by equality.
  im.lam_tan.assign(static_cast<std::size_t>(im.nct), 0.0);
  im.tan_null.assign(static_cast<std::size_t>(im.nct), false);
  const double h1 = g.h1(), h2 = g.h2();
  for (int m2 = 0; m2 < im.n2; ++m2)
    for (int m1 = 0; m1 < im.nc1; ++m1) {
      const std::size_t m = static_cast<std::size_t>(m1) + static_cast<std::size_t>(im.nc1) * m2;
      const bool z1 = (m1 == 0) || (2 * m1 == im.n1);
      const bool z2 = (m2 == 0) || (2 * m2 == im.n2);
      double lam = 0.0;
      if (!z1) {
        const double s = std::sin(2.0 * M_PI * m1 / im.n1);
        lam -= s * s / (h1 * h1);
      }
      if (g.dim == 3 && !z2) {
        const double s = std::sin(2.0 * M_PI * m2 / im.n2);
        lam -= s * s / (h2 * h2);
      }
      im.lam_tan[m] = lam;
      im.tan_null[m] = z1 && (g.dim == 2 || z2);
    }

  im.lam_norm.assign(static_cast<std::size_t>(im.nn3), 0.0);
  const double h3 = g.h3();
  for (int m3 = 0; m3 <= im.n3; ++m3) {
    if (m3 == 0 || m3 == im.n3) continue;  // structural zero
    const double s = std::sin(M_PI * m3 / im.n3);
    im.lam_norm[static_cast<std::size_t>(m3)] = -s * s / (h3 * h3);
  }
}

PoissonSolver::~PoissonSolver() = default;

double PoissonSolver::solve(const ScalarField& rhs, ScalarField& psi) {
  require_match(rhs, g_, "PoissonSolver::solve");
  if (!psi.matches(g_)) psi = ScalarField(g_);
  Impl& im = *impl_;

  for (int j3 = 0; j3 < im.nn3; ++j3)
    for (int j2 = 0; j2 < im.n2; ++j2)
      for (int i = 0; i < im.n1; ++i)
        im.real_buf[i + static_cast<std::size_t>(im.n1) * (j2 + static_cast<std::size_t>(im.n2) * j3)] =
            rhs(i, j2, j3);

  fftw_execute(im.fwd_tan);
  fftw_execute(im.dct);

  double pinned = 0.0, total = 0.0;
  double* c = reinterpret_cast<double*>(im.cplx_buf);
  for (int m3 = 0; m3 < im.nn3; ++m3) {
    const double lam3 = im.lam_norm[static_cast<std::size_t>(m3)];
    const bool z3 = (m3 == 0 || m3 == im.n3);
    for (int m = 0; m < im.nct; ++m) {
      const std::size_t k = 2 * (static_cast<std::size_t>(m) + static_cast<std::size_t>(im.nct) * m3);
      const double re = c[k], imag = c[k + 1];
      const double mass = re * re + imag * imag;
      total += mass;
      if (im.tan_null[static_cast<std::size_t>(m)] && z3) {
        c[k] = 0.0;
        c[k + 1] = 0.0;
        pinned += mass;
      } else {
        const double lam = im.lam_tan[static_cast<std::size_t>(m)] + lam3;
        c[k] = re / lam;
        c[k + 1] = imag / lam;
      }
    }
  }

  fftw_execute(im.dct);
  fftw_execute(im.bwd_tan);

  const double norm = 1.0 / (static_cast<double>(im.n1) * im.n2 * 2.0 * im.n3);
  for (int j3 = 0; j3 < im.nn3; ++j3)
    for (int j2 = 0; j2 < im.n2; ++j2)
      for (int i = 0; i < im.n1; ++i)
        psi(i, j2, j3) =
            norm *
            im.real_buf[i + static_cast<std::size_t>(im.n1) * (j2 + static_cast<std::size_t>(im.n2) * j3)];

  return total > 0.0 ? std::sqrt(pinned / total) : 0.0;
}

}  // namespace machlimit
