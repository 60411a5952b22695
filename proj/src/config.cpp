#include "machlimit/config.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace machlimit {

using nlohmann::json;

namespace {

[[noreturn]] void syntax_error(const std::string& text,
                               const json::parse_error& e) {
  // parse_error byte offset -> line/column.
  std::size_t line = 1, col = 1;
  for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  std::ostringstream msg;
  msg << "config parse error at line " << line << ", column " << col << ": "
      << e.what();
  throw ConfigError(msg.str());
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& scope) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError("unknown config key \"" + scope + it.key() + "\"");
}

Grid parse_grid(const json& j) {
  reject_unknown(j, {"dim", "n1", "n2", "n3", "L1", "L2", "L3"}, "grid.");
  Grid g;
  g.dim = j.value("dim", 2);
  g.n1 = j.value("n1", 64);
  g.n2 = j.value("n2", g.dim == 3 ? 64 : 1);
  g.n3 = j.value("n3", 64);
  g.L1 = j.value("L1", 1.0);
  g.L2 = j.value("L2", 1.0);
  g.L3 = j.value("L3", 1.0);
  g.validate();
  return g;
}

EquationOfState parse_eos(const json& j) {
  reject_unknown(j, {"gamma", "rho_floor"}, "eos.");
  EquationOfState eos;
  eos.gamma = j.value("gamma", 1.4);
  eos.rho_floor = j.value("rho_floor", 1e-2);
  eos.validate();
  return eos;
}

DataParams parse_data(const json& j) {
  reject_unknown(j, {"N0", "sigma", "amp_u", "amp_q", "amp_F", "n_modes"},
                 "data.");
  DataParams d;
  d.N0 = j.value("N0", 0.5);
  d.sigma = j.value("sigma", 0.6);
  d.amp_u = j.value("amp_u", 1.0);
  d.amp_q = j.value("amp_q", 1.0);
  d.amp_F = j.value("amp_F", 0.3);
  d.n_modes = j.value("n_modes", 3);
  if (!(d.sigma > 0.0 && d.sigma < 1.0))
    throw ConfigError("data.sigma must lie in (0,1) so the bump stays inside the slab");
  if (d.n_modes < 1) throw ConfigError("data.n_modes must be >= 1");
  return d;
}

BackgroundDeformation parse_fbar(const json& j, int dim) {
  BackgroundDeformation b;
  b.dim = dim;
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    throw ConfigError("fbar must be a dim x dim array of rows");
  for (int r = 0; r < dim; ++r) {
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != dim)
      throw ConfigError("fbar must be a dim x dim array of rows");
    for (int c = 0; c < dim; ++c) b.fbar[r][c] = j[r][c].get<double>();
  }
  b.validate();
  return b;
}

Preparedness parse_prepared(const json& j) {
  const std::string s = j.get<std::string>();
  if (s == "well") return Preparedness::Well;
  if (s == "ill") return Preparedness::Ill;
  throw ConfigError("prepared must be \"well\" or \"ill\"");
}

json grid_json(const Grid& g) {
  return json{{"dim", g.dim}, {"n1", g.n1}, {"n2", g.n2}, {"n3", g.n3},
              {"L1", g.L1},   {"L2", g.L2}, {"L3", g.L3}};
}

json data_json(const DataParams& d) {
  return json{{"N0", d.N0},       {"sigma", d.sigma},   {"amp_u", d.amp_u},
              {"amp_q", d.amp_q}, {"amp_F", d.amp_F},   {"n_modes", d.n_modes}};
}

json fbar_json(const BackgroundDeformation& b) {
  json rows = json::array();
  for (int r = 0; r < b.dim; ++r) {
    json row = json::array();
    for (int c = 0; c < b.dim; ++c) row.push_back(b.fbar[r][c]);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

CompressibleConfig RunConfig::solver_config() const {
  CompressibleConfig c;
  c.cfl = cfl;
  c.t_end = t_end;
  c.boundary_tolerance = boundary_tolerance;
  c.snapshot_stride = snapshot_stride;
  c.history_depth = history_depth;
  c.clean_F = clean_F;
  c.n_out = n_out;
  return c;
}

void RunConfig::validate() const {
  if (mode != "compressible" && mode != "incompressible")
    throw ConfigError("mode must be \"compressible\" or \"incompressible\"");
  grid.validate();
  eos.validate();
  fbar.validate();
  if (!(eps > 0.0 && eps <= 1.0)) throw ConfigError("eps must lie in (0, 1]");
  solver_config().validate();
}

RunConfig parse_run_config_str(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    syntax_error(text, e);
  }
  reject_unknown(j,
                 {"mode", "grid", "eos", "fbar", "eps", "cfl", "t_end",
                  "prepared", "seed", "snapshot_stride", "history_depth",
                  "boundary_tolerance", "clean_F", "n_out", "data",
                  "wavepacket"},
                 "");
  RunConfig cfg;
  cfg.mode = j.value("mode", std::string("compressible"));
  if (j.contains("grid")) cfg.grid = parse_grid(j["grid"]);
  if (j.contains("eos")) cfg.eos = parse_eos(j["eos"]);
  cfg.fbar = j.contains("fbar") ? parse_fbar(j["fbar"], cfg.grid.dim)
                                : BackgroundDeformation::defaults(cfg.grid.dim);
  if (!j.contains("eps")) throw ConfigError("missing required key \"eps\"");
  cfg.eps = j["eps"].get<double>();
  cfg.cfl = j.value("cfl", 0.4);
  cfg.t_end = j.value("t_end", 0.5);
  if (j.contains("prepared")) cfg.prepared = parse_prepared(j["prepared"]);
  cfg.seed = j.value("seed", 1234ull);
  cfg.snapshot_stride = j.value("snapshot_stride", 16);
  cfg.history_depth = j.value("history_depth", 5);
  cfg.boundary_tolerance = j.value("boundary_tolerance", 1e-12);
  cfg.clean_F = j.value("clean_F", false);
  cfg.n_out = j.value("n_out", 8);
  if (j.contains("data")) cfg.data = parse_data(j["data"]);
  if (j.contains("wavepacket")) {
    const json& wp = j["wavepacket"];
    reject_unknown(wp, {"enabled", "tau_max", "n_tau"}, "wavepacket.");
    cfg.wavepacket_enabled = wp.value("enabled", false);
    cfg.wavepacket_tau_max = wp.value("tau_max", 4.0);
    cfg.wavepacket_n_tau = wp.value("n_tau", 128);
  }
  cfg.validate();
  return cfg;
}

RunConfig parse_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_run_config_str(ss.str());
}

SweepConfig parse_sweep_config_str(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    syntax_error(text, e);
  }
  reject_unknown(j,
                 {"eps_list", "prepared", "grid", "eos", "fbar", "cfl", "T",
                  "n_out", "seed", "locality_radius", "data", "snapshot_stride",
                  "history_depth", "clean_F"},
                 "");
  SweepConfig cfg;
  if (!j.contains("eps_list")) throw ConfigError("missing required key \"eps_list\"");
  cfg.eps_list = j["eps_list"].get<std::vector<double>>();
  if (j.contains("prepared")) cfg.prepared = parse_prepared(j["prepared"]);
  if (j.contains("grid")) cfg.grid = parse_grid(j["grid"]);
  if (j.contains("eos")) cfg.eos = parse_eos(j["eos"]);
  cfg.fbar = j.contains("fbar") ? parse_fbar(j["fbar"], cfg.grid.dim)
                                : BackgroundDeformation::defaults(cfg.grid.dim);
  cfg.cfl = j.value("cfl", 0.4);
  cfg.T = j.value("T", 0.5);
  cfg.n_out = j.value("n_out", 64);
  cfg.seed = j.value("seed", 1234ull);
  cfg.locality_radius = j.value("locality_radius", -1.0);
  if (j.contains("data")) cfg.data = parse_data(j["data"]);
  cfg.snapshot_stride = j.value("snapshot_stride", 16);
  cfg.history_depth = j.value("history_depth", 5);
  cfg.clean_F = j.value("clean_F", false);
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    // Name the offending key for list-shape errors.
    throw ConfigError(std::string(e.what()) +
                      (std::string(e.what()).find("eps_list") == std::string::npos
                           ? ""
                           : " (key \"eps_list\")"));
  }
  return cfg;
}

SweepConfig parse_sweep_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_sweep_config_str(ss.str());
}

std::string dump_run_config(const RunConfig& cfg) {
  json j = {{"mode", cfg.mode},
            {"grid", grid_json(cfg.grid)},
            {"eos", {{"gamma", cfg.eos.gamma}, {"rho_floor", cfg.eos.rho_floor}}},
            {"fbar", fbar_json(cfg.fbar)},
            {"eps", cfg.eps},
            {"cfl", cfg.cfl},
            {"t_end", cfg.t_end},
            {"prepared", cfg.prepared == Preparedness::Well ? "well" : "ill"},
            {"seed", cfg.seed},
            {"snapshot_stride", cfg.snapshot_stride},
            {"history_depth", cfg.history_depth},
            {"boundary_tolerance", cfg.boundary_tolerance},
            {"clean_F", cfg.clean_F},
            {"n_out", cfg.n_out},
            {"data", data_json(cfg.data)},
            {"wavepacket",
             {{"enabled", cfg.wavepacket_enabled},
              {"tau_max", cfg.wavepacket_tau_max},
              {"n_tau", cfg.wavepacket_n_tau}}}};
  return j.dump(2);
}

std::string dump_sweep_config(const SweepConfig& cfg) {
  json j = {{"eps_list", cfg.eps_list},
            {"prepared", cfg.prepared == Preparedness::Well ? "well" : "ill"},
            {"grid", grid_json(cfg.grid)},
            {"eos", {{"gamma", cfg.eos.gamma}, {"rho_floor", cfg.eos.rho_floor}}},
            {"fbar", fbar_json(cfg.fbar)},
            {"cfl", cfg.cfl},
            {"T", cfg.T},
            {"n_out", cfg.n_out},
            {"seed", cfg.seed},
            {"locality_radius", cfg.locality_radius},
            {"data", data_json(cfg.data)},
            {"snapshot_stride", cfg.snapshot_stride},
            {"history_depth", cfg.history_depth},
            {"clean_F", cfg.clean_F}};
  return j.dump(2);
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void RunManifest::write(const std::filesystem::path& path) const {
  json j = {{"schema_version", schema_version},
            {"tool_version", tool_version},
            {"command", command},
            {"resolved_config", json::parse(resolved_config.empty() ? "{}" : resolved_config)},
            {"started_utc", started_utc},
            {"finished_utc", finished_utc},
            {"outputs", outputs},
            {"run_hash", run_hash}};
  json checks_json = json::object();
  for (const auto& [name, pass] : checks) checks_json[name] = pass;
  j["checks"] = checks_json;

  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string());
    out << j.dump(2) << "\n";
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace machlimit
