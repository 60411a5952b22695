#include "machlimit/sweep.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "machlimit/ops.hpp"
#include "machlimit/poisson.hpp"
#include "machlimit/projection.hpp"
#include "machlimit/reduce.hpp"
#include "json.hpp"

namespace machlimit {

void SweepConfig::validate() const {
  grid.validate();
  eos.validate();
  fbar.validate();
  if (eps_list.empty()) throw ConfigError("eps_list must not be empty");
  for (std::size_t k = 0; k < eps_list.size(); ++k) {
    if (!(eps_list[k] > 0.0 && eps_list[k] <= 1.0))
      throw ConfigError("eps_list entries must lie in (0, 1]");
    if (k > 0 && !(eps_list[k] < eps_list[k - 1]))
      throw ConfigError("eps_list must be strictly decreasing");
  }
  if (!(cfl > 0.0 && cfl <= 1.0)) throw ConfigError("cfl must be in (0, 1]");
  if (T <= 0.0) throw ConfigError("T must be positive");
  if (n_out < 2) throw ConfigError("n_out must be >= 2");
}

FitResult fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  FitResult out;
  const int n = static_cast<int>(x.size());
  if (n < 2) return out;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<double> lx(x.size()), ly(y.size());
  for (int k = 0; k < n; ++k) {
    lx[k] = std::log(x[static_cast<std::size_t>(k)]);
    ly[k] = std::log(std::max(y[static_cast<std::size_t>(k)], 1e-300));
    sx += lx[k];
    sy += ly[k];
    sxx += lx[k] * lx[k];
    sxy += lx[k] * ly[k];
  }
  out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - out.slope * sx) / n;
  double rss = 0.0;
  for (int k = 0; k < n; ++k) {
    const double r = ly[k] - (out.slope * lx[k] + intercept);
    rss += r * r;
  }
  out.residual = std::sqrt(rss / n);
  return out;
}

std::string fnv64_hex(const std::string& payload) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : payload) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

RunMetrics convergence_metrics(const Trajectory& comp,
                               const IncompressibleTrajectory& inc,
                               const Grid& g, double locality_radius,
                               Exec exec) {
  if (comp.output_times.size() != inc.output_times.size())
    throw AlignmentError("convergence_metrics: output counts differ");
  for (std::size_t k = 0; k < comp.output_times.size(); ++k)
    if (std::fabs(comp.output_times[k] - inc.output_times[k]) > 1e-12)
      throw AlignmentError("convergence_metrics: output times differ at index " +
                           std::to_string(k));
  const std::size_t n = comp.output_times.size();
  if (n < 2) throw AlignmentError("convergence_metrics: need at least 2 outputs");

  std::array<double, 3> center{0.5 * g.L1, 0.0, 0.0};
  if (g.dim == 3) {
    center[1] = 0.5 * g.L2;
    center[2] = -0.5 * g.L3;
  } else {
    center[1] = -0.5 * g.L3;
  }

  RunMetrics m;
  m.eps = comp.final_state.eps;
  m.aborted = comp.aborted || inc.aborted;
  if (comp.aborted) m.abort_reason = comp.abort_reason;
  if (inc.aborted) m.abort_reason += (m.abort_reason.empty() ? "" : "; ") + inc.abort_reason;

  PoissonSolver solver(g);
  const double T = comp.output_times.back() - comp.output_times.front();

  std::vector<double> qn(n), qloc(n), divloc(n), quloc(n), udiff(n);
  ScalarField qbar(g), divubar(g);
  for (std::size_t k = 0; k < n; ++k) {
    const State& cs = comp.outputs[k];
    const IncompressibleState& is = inc.outputs[k];
    qn[k] = std::sqrt(l2_sq(cs.q, g, exec));
    qloc[k] = std::sqrt(l2_sq_ball(cs.q, g, center, locality_radius, exec));
    ScalarField dv = ops::div(cs.u, g, ops::WallRule::OneSided, exec);
    divloc[k] = std::sqrt(l2_sq_ball(dv, g, center, locality_radius, exec));

    ProjectionResult pr = leray_project(cs.u, g, solver, 1e-10, exec);
    quloc[k] = std::sqrt(l2_sq_ball(pr.Q, g, center, locality_radius, exec));

    double d2 = 0.0;
    for (int c = 0; c < g.dim; ++c) {
      ScalarField diff = cs.u[c];
      axpy(diff, -1.0, is.u[c]);
      d2 += l2_sq(diff, g, exec);
    }
    udiff[k] = std::sqrt(d2);

    // Time-mean fields (trapezoid in time).
    const double wt = (k == 0 || k + 1 == n) ? 0.5 : 1.0;
    const double fac = wt / static_cast<double>(n - 1);
    axpy(qbar, fac, cs.q);
    axpy(divubar, fac, dv);
  }

  auto l2_time = [&](const std::vector<double>& v) {
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double wt = (k == 0 || k + 1 == n) ? 0.5 : 1.0;
      sum += wt * v[k] * v[k];
    }
    return std::sqrt(sum * T / static_cast<double>(n - 1));
  };

  m.q_linf_l2 = *std::max_element(qn.begin(), qn.end());
  m.q_l2t_l2_loc = l2_time(qloc);
  m.divu_l2t_l2_loc = l2_time(divloc);
  m.Qu_l2t_l2_loc = l2_time(quloc);
  m.udiff_linf_l2 = *std::max_element(udiff.begin(), udiff.end());
  m.udiff_l2t_l2 = l2_time(udiff);
  m.q_mean_field_loc = std::sqrt(l2_sq_ball(qbar, g, center, locality_radius, exec));
  m.divu_mean_field_loc =
      std::sqrt(l2_sq_ball(divubar, g, center, locality_radius, exec));

  double mean_qn = 0.0;
  for (double v : qn) mean_qn += v;
  mean_qn /= static_cast<double>(n);
  m.osc_amplitude = m.q_linf_l2 - mean_qn;
  return m;
}

SweepResult mach_sweep(const SweepConfig& cfg, Exec exec) {
  cfg.validate();
  const Grid& g = cfg.grid;

  CompressibleConfig solver_cfg;
  solver_cfg.cfl = cfg.cfl;
  solver_cfg.t_end = cfg.T;
  solver_cfg.snapshot_stride = cfg.snapshot_stride;
  solver_cfg.history_depth = cfg.history_depth;
  solver_cfg.clean_F = cfg.clean_F;
  solver_cfg.n_out = cfg.n_out;

  // Incompressible reference from the limit data (eps = 0 in the data
  // factory; velocity corrected by construct_w0 against rho(0, S0)).
  State limit_data = make_initial_data(cfg.prepared, g, cfg.eos, cfg.fbar, 0.0,
                                       cfg.seed, cfg.data, exec);
  IncompressibleState inc0(g);
  {
    ScalarField rho0(g);
    for_each_node(g, exec, [&](int i, int j2, int j3) {
      rho0(i, j2, j3) = cfg.eos.rho(1.0, limit_data.S(i, j2, j3));
    });
    PoissonSolver psolver(g);
    W0Result w0 = construct_w0(limit_data.u, rho0, g, psolver, 1e-10, exec);
    inc0.u = std::move(w0.w0);
    inc0.F = limit_data.F;
    inc0.S = limit_data.S;
    inc0.varrho = rho0;
  }
  IncompressibleTrajectory inc_traj =
      integrate_incompressible(inc0, solver_cfg, cfg.fbar, g, nullptr, exec);

  SweepResult result;
  const int n_runs = static_cast<int>(cfg.eps_list.size());
  result.runs.resize(static_cast<std::size_t>(n_runs));
  result.energy_series.resize(static_cast<std::size_t>(n_runs));

  // Independent runs; the nested parallel regions inside the kernels
  // serialize automatically when this loop is parallel.
  std::vector<std::string> failures(static_cast<std::size_t>(n_runs));
#pragma omp parallel for schedule(dynamic, 1)
  for (int r = 0; r < n_runs; ++r) {
    const double eps = cfg.eps_list[static_cast<std::size_t>(r)];
    try {
      State s0 = make_initial_data(cfg.prepared, g, cfg.eos, cfg.fbar, eps,
                                   cfg.seed, cfg.data, exec);
      Trajectory tr = integrate(s0, solver_cfg, cfg.eos, cfg.fbar, g, nullptr, exec);
      RunMetrics m;
      if (!tr.aborted) {
        m = convergence_metrics(tr, inc_traj, g, cfg.resolved_locality(), exec);
      } else {
        m.aborted = true;
        m.abort_reason = tr.abort_reason;
      }
      m.eps = eps;
      for (const EnergyReport& rep : tr.reports) {
        m.sup_E0 = std::max(m.sup_E0, rep.E0);
        m.sup_W0 = std::max(m.sup_W0, rep.W0);
        m.sup_E0W0 = std::max(m.sup_E0W0, rep.E0 + rep.W0);
      }
      result.runs[static_cast<std::size_t>(r)] = std::move(m);
      result.energy_series[static_cast<std::size_t>(r)] = std::move(tr.reports);
    } catch (const std::exception& e) {
      failures[static_cast<std::size_t>(r)] = e.what();
    }
  }
  for (int r = 0; r < n_runs; ++r) {
    if (!failures[static_cast<std::size_t>(r)].empty()) {
      result.runs[static_cast<std::size_t>(r)].eps =
          cfg.eps_list[static_cast<std::size_t>(r)];
      result.runs[static_cast<std::size_t>(r)].aborted = true;
      result.runs[static_cast<std::size_t>(r)].abort_reason =
          failures[static_cast<std::size_t>(r)];
    }
    if (result.runs[static_cast<std::size_t>(r)].aborted) result.any_aborted = true;
  }

  std::vector<double> eps_ok, udiff_ok, e0w0_ok;
  for (const RunMetrics& m : result.runs) {
    if (m.aborted) continue;
    eps_ok.push_back(m.eps);
    udiff_ok.push_back(m.udiff_linf_l2);
    e0w0_ok.push_back(m.sup_E0W0);
  }
  result.udiff_slope = fit_loglog(eps_ok, udiff_ok);
  result.e0w0_slope = fit_loglog(eps_ok, e0w0_ok);

  std::ostringstream hash_src;
  hash_src << g.dim << ',' << g.n1 << ',' << g.n2 << ',' << g.n3 << ','
           << cfg.eos.gamma << ',' << cfg.T << ',' << cfg.seed << ','
           << static_cast<int>(cfg.prepared);
  for (double e : cfg.eps_list) hash_src << ',' << e;
  result.run_hash = fnv64_hex(hash_src.str());
  return result;
}

namespace {

nlohmann::json metrics_json(const RunMetrics& m) {
  return nlohmann::json{{"eps", m.eps},
                        {"aborted", m.aborted},
                        {"abort_reason", m.abort_reason},
                        {"sup_E0", m.sup_E0},
                        {"sup_W0", m.sup_W0},
                        {"sup_E0_plus_W0", m.sup_E0W0},
                        {"q_linf_l2", m.q_linf_l2},
                        {"q_l2t_l2_loc", m.q_l2t_l2_loc},
                        {"divu_l2t_l2_loc", m.divu_l2t_l2_loc},
                        {"Qu_l2t_l2_loc", m.Qu_l2t_l2_loc},
                        {"q_mean_field_loc", m.q_mean_field_loc},
                        {"divu_mean_field_loc", m.divu_mean_field_loc},
                        {"udiff_linf_l2", m.udiff_linf_l2},
                        {"udiff_l2t_l2", m.udiff_l2t_l2},
                        {"osc_amplitude", m.osc_amplitude}};
}

std::string eps_tag(double eps) {
  std::ostringstream os;
  os << eps;
  std::string s = os.str();
  for (char& c : s)
    if (c == '.') c = 'p';
  return s;
}

}  // namespace

void emit_reports(const SweepResult& result, const SweepConfig& cfg,
                  const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);

  nlohmann::json summary;
  summary["schema_version"] = 1;
  summary["run_hash"] = result.run_hash;
  summary["config"] = {
      {"eps_list", cfg.eps_list},
      {"prepared", cfg.prepared == Preparedness::Well ? "well" : "ill"},
      {"grid", {{"dim", cfg.grid.dim}, {"n1", cfg.grid.n1}, {"n2", cfg.grid.n2},
                {"n3", cfg.grid.n3}, {"L1", cfg.grid.L1}, {"L2", cfg.grid.L2},
                {"L3", cfg.grid.L3}}},
      {"eos", {{"gamma", cfg.eos.gamma}, {"rho_floor", cfg.eos.rho_floor}}},
      {"cfl", cfg.cfl},
      {"T", cfg.T},
      {"n_out", cfg.n_out},
      {"seed", cfg.seed},
      {"locality_radius", cfg.resolved_locality()},
      {"boundary_model", "slab with two slip walls standing in for the half-space"}};
  summary["runs"] = nlohmann::json::array();
  for (const RunMetrics& m : result.runs) summary["runs"].push_back(metrics_json(m));
  summary["fits"] = {
      {"udiff_linf_l2_vs_eps", {{"slope", result.udiff_slope.slope},
                                {"residual", result.udiff_slope.residual}}},
      {"sup_E0_plus_W0_vs_eps", {{"slope", result.e0w0_slope.slope},
                                 {"residual", result.e0w0_slope.residual}}}};
  {
    std::ofstream out(out_dir / "sweep_summary.json", std::ios::trunc);
    if (!out) throw IoError("cannot open sweep_summary.json");
    out << summary.dump(2) << "\n";
  }

  for (std::size_t r = 0; r < result.runs.size(); ++r) {
    if (result.energy_series[r].empty()) continue;
    write_reports_csv(out_dir / ("energy_eps_" + eps_tag(result.runs[r].eps) + ".csv"),
                      result.energy_series[r], cfg.grid.dim);
  }

  std::ofstream csv(out_dir / "metrics.csv", std::ios::trunc);
  if (!csv) throw IoError("cannot open metrics.csv");
  csv.precision(17);
  csv << "eps,sup_E0,sup_W0,sup_E0_plus_W0,q_linf_l2,q_l2t_l2_loc,divu_l2t_l2_loc,"
         "Qu_l2t_l2_loc,q_mean_field_loc,divu_mean_field_loc,udiff_linf_l2,"
         "udiff_l2t_l2,osc_amplitude,log10_eps,log10_udiff_linf_l2,"
         "log10_sup_E0_plus_W0,aborted\n";
  for (const RunMetrics& m : result.runs) {
    csv << m.eps << ',' << m.sup_E0 << ',' << m.sup_W0 << ',' << m.sup_E0W0
        << ',' << m.q_linf_l2 << ',' << m.q_l2t_l2_loc << ',' << m.divu_l2t_l2_loc
        << ',' << m.Qu_l2t_l2_loc << ',' << m.q_mean_field_loc << ','
        << m.divu_mean_field_loc << ',' << m.udiff_linf_l2 << ','
        << m.udiff_l2t_l2 << ',' << m.osc_amplitude << ','
        << std::log10(m.eps) << ','
        << std::log10(std::max(m.udiff_linf_l2, 1e-300)) << ','
        << std::log10(std::max(m.sup_E0W0, 1e-300)) << ','
        << (m.aborted ? 1 : 0) << '\n';
  }
}

}  // namespace machlimit
