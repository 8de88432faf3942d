#include "morrey/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace morrey {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size())
    throw ConfigError("config key " + key + ": bad number '" + v + "'");
  return out;
}

long parse_long(const std::string& key, const std::string& v) {
  long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size())
    throw ConfigError("config key " + key + ": bad integer '" + v + "'");
  return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size())
    throw ConfigError("config key " + key + ": bad unsigned integer '" + v + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("config key " + key + ": bad boolean '" + v + "'");
}

std::vector<double> parse_double_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::istringstream ss(v);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(parse_double(key, trim(cell)));
  if (out.empty()) throw ConfigError("config key " + key + ": empty list");
  return out;
}

}  // namespace

void apply_override(RunConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError("expected key=value, got '" + assignment + "'");
  const std::string key = trim(assignment.substr(0, eq));
  const std::string val = trim(assignment.substr(eq + 1));
  if (key.empty()) throw ConfigError("empty config key in '" + assignment + "'");

  if (key == "params.n") {
    const long n = parse_long(key, val);
    if (n != 1 && n != 2) throw ConfigError("params.n must be 1 or 2");
    cfg.n = static_cast<int>(n);
  } else if (key == "params.s") {
    cfg.s = parse_double(key, val);
  } else if (key == "params.p") {
    cfg.p = parse_double(key, val);
  } else if (key == "geometry.L") {
    cfg.L = parse_double(key, val);
  } else if (key == "geometry.h") {
    cfg.h = parse_double(key, val);
  } else if (key == "pins.a") {
    cfg.pin_a = parse_double(key, val);
  } else if (key == "pins.b") {
    cfg.pin_b = parse_double(key, val);
  } else if (key == "pins.x0") {
    cfg.pin_x0 = parse_double_list(key, val);
  } else if (key == "pins.y0") {
    cfg.pin_y0 = parse_double_list(key, val);
  } else if (key == "solver.tol") {
    cfg.tol = parse_double(key, val);
  } else if (key == "solver.max_iter") {
    cfg.max_iter = parse_long(key, val);
  } else if (key == "solver.preconditioned") {
    cfg.preconditioned = parse_bool(key, val);
  } else if (key == "solver.free_far_field") {
    cfg.free_far_field = parse_bool(key, val);
  } else if (key == "experiment") {
    cfg.experiment = val;
  } else if (key == "sweep.axis") {
    if (val != "s" && val != "p" && val != "h" && val != "L")
      throw ConfigError("sweep.axis must be one of s, p, h, L");
    cfg.sweep_axis = val;
  } else if (key == "sweep.values") {
    cfg.sweep_values = parse_double_list(key, val);
  } else if (key == "barrier.r0") {
    cfg.barrier_r0 = parse_double(key, val);
  } else if (key == "barrier.r1") {
    cfg.barrier_r1 = parse_double(key, val);
  } else if (key == "barrier.M") {
    cfg.barrier_M = parse_double(key, val);
  } else if (key == "rng_seed") {
    cfg.rng_seed = parse_u64(key, val);
  } else if (key == "output_dir") {
    cfg.output_dir = val;
  } else {
    throw ConfigError("unknown config key: " + key);
  }
}

RunConfig load_config(const std::optional<std::filesystem::path>& file,
                      const std::vector<std::string>& overrides) {
  RunConfig cfg;
  if (file) {
    std::ifstream in(*file);
    if (!in) throw ConfigError("cannot open config file " + file->string());
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const std::string t = trim(line);
      if (t.empty() || t[0] == '#') continue;
      try {
        apply_override(cfg, t);
      } catch (const ConfigError& e) {
        throw ConfigError(file->string() + ":" + std::to_string(lineno) + ": " + e.what());
      }
    }
  }
  for (const std::string& o : overrides) apply_override(cfg, o);
  return cfg;
}

Lattice config_lattice(const RunConfig& cfg) {
  return build_lattice(make_frac_params(cfg.n, cfg.s, cfg.p), cfg.L, cfg.h);
}

PinSpec config_pins(const RunConfig& cfg, const Lattice& lat) {
  PinSpec pins = canonical_pins(lat);
  pins.a = cfg.pin_a;
  pins.b = cfg.pin_b;
  const auto place = [&](const std::vector<double>& coords, const char* key) {
    if (static_cast<int>(coords.size()) != lat.params.n)
      throw ConfigError(std::string(key) + " needs " + std::to_string(lat.params.n) +
                        " coordinates");
    Point pt{0.0, 0.0};
    for (int k = 0; k < lat.params.n; ++k) pt[k] = coords[k];
    const auto node = lat.node_at(pt);
    if (!node) throw ConfigError(std::string(key) + " is not a lattice node");
    return *node;
  };
  if (cfg.pin_x0) pins.x0 = place(*cfg.pin_x0, "pins.x0");
  if (cfg.pin_y0) pins.y0 = place(*cfg.pin_y0, "pins.y0");
  return pins;
}

SolveOptions config_solve_options(const RunConfig& cfg) {
  SolveOptions opt;
  opt.tol = cfg.tol;
  opt.max_iter = cfg.max_iter;
  opt.preconditioned = cfg.preconditioned;
  opt.free_far_field = cfg.free_far_field;
  return opt;
}

}  // namespace morrey
