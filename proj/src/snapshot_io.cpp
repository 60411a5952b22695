#include "machlimit/snapshot_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "json.hpp"

namespace machlimit {

namespace {

void write_le_doubles(std::ofstream& out, const double* p, std::size_t n) {
  static_assert(sizeof(double) == 8);
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(n * 8));
  } else {
    for (std::size_t k = 0; k < n; ++k) {
      std::uint64_t u;
      std::memcpy(&u, &p[k], 8);
      char b[8];
      for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((u >> (8 * i)) & 0xff);
      out.write(b, 8);
    }
  }
}

void read_le_doubles(std::ifstream& in, double* p, std::size_t n) {
  if constexpr (std::endian::native == std::endian::little) {
    in.read(reinterpret_cast<char*>(p), static_cast<std::streamsize>(n * 8));
  } else {
    for (std::size_t k = 0; k < n; ++k) {
      char b[8];
      in.read(b, 8);
      std::uint64_t u = 0;
      for (int i = 0; i < 8; ++i)
        u |= static_cast<std::uint64_t>(static_cast<unsigned char>(b[i])) << (8 * i);
      std::memcpy(&p[k], &u, 8);
    }
  }
}

}  // namespace

void write_component(const std::filesystem::path& stem, const ScalarField& f,
                     const Grid& g, const std::string& component, double t,
                     double eps) {
  require_match(f, g, "write_component");
  std::filesystem::path bin = stem;
  bin += ".f64";
  std::ofstream out(bin, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + bin.string());
  std::vector<double> row(static_cast<std::size_t>(g.nodes1()));
  for (int j3 = 0; j3 < g.nodes3(); ++j3)
    for (int j2 = 0; j2 < g.nodes2(); ++j2) {
      for (int i = 0; i < g.nodes1(); ++i) row[static_cast<std::size_t>(i)] = f(i, j2, j3);
      write_le_doubles(out, row.data(), row.size());
    }
  if (!out) throw IoError("write failed: " + bin.string());

  nlohmann::json meta = {
      {"dim", g.dim}, {"n1", g.n1},   {"n2", g.dim == 3 ? g.n2 : 1},
      {"n3", g.n3},   {"L1", g.L1},   {"L2", g.dim == 3 ? g.L2 : 0.0},
      {"L3", g.L3},   {"t", t},       {"eps", eps},
      {"component", component}};
  std::filesystem::path side = stem;
  side += ".json";
  std::ofstream js(side, std::ios::trunc);
  if (!js) throw IoError("cannot open " + side.string());
  js << meta.dump(2) << "\n";
}

ScalarField read_component(const std::filesystem::path& stem, const Grid& g,
                           std::string* component, double* t, double* eps) {
  std::filesystem::path side = stem;
  side += ".json";
  std::ifstream js(side);
  if (!js) throw IoError("cannot open " + side.string());
  nlohmann::json meta = nlohmann::json::parse(js);
  if (meta.at("dim").get<int>() != g.dim || meta.at("n1").get<int>() != g.n1 ||
      meta.at("n3").get<int>() != g.n3)
    throw ShapeError("read_component: sidecar grid does not match");
  if (component) *component = meta.at("component").get<std::string>();
  if (t) *t = meta.at("t").get<double>();
  if (eps) *eps = meta.at("eps").get<double>();

  std::filesystem::path bin = stem;
  bin += ".f64";
  std::ifstream in(bin, std::ios::binary);
  if (!in) throw IoError("cannot open " + bin.string());
  ScalarField f(g);
  std::vector<double> row(static_cast<std::size_t>(g.nodes1()));
  for (int j3 = 0; j3 < g.nodes3(); ++j3)
    for (int j2 = 0; j2 < g.nodes2(); ++j2) {
      read_le_doubles(in, row.data(), row.size());
      if (!in) throw IoError("short read: " + bin.string());
      for (int i = 0; i < g.nodes1(); ++i) f(i, j2, j3) = row[static_cast<std::size_t>(i)];
    }
  return f;
}

void write_state(const std::filesystem::path& dir, const std::string& prefix,
                 const State& s, const Grid& g) {
  std::filesystem::create_directories(dir);
  auto stem = [&](const std::string& comp) { return dir / (prefix + "_" + comp); };
  write_component(stem("q"), s.q, g, "q", s.t, s.eps);
  write_component(stem("S"), s.S, g, "S", s.t, s.eps);
  for (int d = 0; d < g.dim; ++d) {
    const std::string axis = d == g.normal_axis() ? "3" : std::to_string(d + 1);
    write_component(stem("u" + axis), s.u[d], g, "u" + axis, s.t, s.eps);
  }
  for (int j = 0; j < g.dim; ++j)
    for (int d = 0; d < g.dim; ++d) {
      const std::string cj = j == g.normal_axis() ? "3" : std::to_string(j + 1);
      const std::string ci = d == g.normal_axis() ? "3" : std::to_string(d + 1);
      write_component(stem("F" + ci + cj), s.F[j][d], g, "F" + ci + cj, s.t, s.eps);
    }
}

void write_matrix(const std::filesystem::path& stem,
                  const std::vector<double>& data, int n_fast, int n_slow,
                  double fast_extent, double slow_extent,
                  const std::string& component) {
  if (data.size() != static_cast<std::size_t>(n_fast) * n_slow)
    throw ShapeError("write_matrix: size mismatch");
  std::filesystem::path bin = stem;
  bin += ".f64";
  std::ofstream out(bin, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + bin.string());
  write_le_doubles(out, data.data(), data.size());
  nlohmann::json meta = {{"dim", 2},          {"n1", n_fast}, {"n2", 1},
                         {"n3", n_slow - 1},  {"L1", fast_extent},
                         {"L2", 0.0},         {"L3", slow_extent},
                         {"t", 0.0},          {"eps", 0.0},
                         {"component", component}};
  std::filesystem::path side = stem;
  side += ".json";
  std::ofstream js(side, std::ios::trunc);
  if (!js) throw IoError("cannot open " + side.string());
  js << meta.dump(2) << "\n";
}

}  // namespace machlimit
