#include "morrey/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace morrey {

namespace {

using nlohmann::json;

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);  // binary: no platform newline games
  if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
  return out;
}

std::string read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json_file(const std::filesystem::path& path) {
  json j = json::parse(read_all(path), nullptr, false);
  if (j.is_discarded()) throw ConfigError("malformed JSON in " + path.string());
  return j;
}

double parse_double(const std::string& s, const std::filesystem::path& path) {
  double v = 0.0;
  const char* begin = s.data();
  const char* end = begin + s.size();
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end)
    throw ConfigError("bad number '" + s + "' in " + path.string());
  return v;
}

json grid_sidecar(const Lattice& lat, double far_field) {
  return json{{"n", lat.params.n}, {"s", lat.params.s},       {"p", lat.params.p},
              {"L", lat.L},        {"h", lat.h},              {"far_field", far_field}};
}

Lattice lattice_from_sidecar(const json& j, const std::filesystem::path& path) {
  for (const char* key : {"n", "s", "p", "L", "h", "far_field"})
    if (!j.contains(key)) throw ConfigError(path.string() + " is missing key " + key);
  try {
    return build_lattice(make_frac_params(j["n"].get<int>(), j["s"].get<double>(),
                                          j["p"].get<double>()),
                         j["L"].get<double>(), j["h"].get<double>());
  } catch (const MorreyError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void write_value_csv(const Lattice& lat, const std::vector<double>& values,
                     const std::vector<std::uint8_t>* mask,
                     const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  out << (lat.params.n == 1 ? "x,value" : "x,y,value") << (mask ? ",mask\n" : "\n");
  for (int i = 0; i < lat.node_count; ++i) {
    const Point x = lat.coord(i);
    out << format_double(x[0]);
    if (lat.params.n == 2) out << ',' << format_double(x[1]);
    out << ',' << format_double(values[i]);
    if (mask) out << ',' << int((*mask)[i]);
    out << '\n';
  }
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const std::filesystem::path& path) {
  const std::string text = read_all(path);
  CsvTable t;
  std::istringstream lines(text);
  std::string line;
  bool first = true;
  while (std::getline(lines, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (first) {
      t.header = std::move(cells);
      first = false;
    } else {
      t.rows.push_back(std::move(cells));
    }
  }
  if (t.header.empty()) throw ConfigError(path.string() + " has no header row");
  return t;
}

/// Reads the `x[,y],value[,mask]` layout shared by the grid artifacts and
/// validates coordinates against the lattice.
void read_values_csv(const CsvTable& t, const Lattice& lat, bool expect_mask,
                     const std::filesystem::path& path, std::vector<double>& values,
                     std::vector<std::uint8_t>* mask) {
  const std::size_t want_cols = static_cast<std::size_t>(lat.params.n) + 1 + (expect_mask ? 1 : 0);
  if (t.header.size() != want_cols)
    throw ConfigError(path.string() + " has the wrong number of columns");
  if (t.rows.size() != static_cast<std::size_t>(lat.node_count))
    throw ConfigError(path.string() + " row count does not match the lattice");
  values.assign(lat.node_count, 0.0);
  if (mask) mask->assign(lat.node_count, 0);
  for (int i = 0; i < lat.node_count; ++i) {
    const auto& row = t.rows[i];
    if (row.size() != want_cols)
      throw ConfigError(path.string() + " has a ragged row at node " + std::to_string(i));
    const Point x = lat.coord(i);
    for (int k = 0; k < lat.params.n; ++k)
      if (std::abs(parse_double(row[k], path) - x[k]) > 1e-9)
        throw ConfigError(path.string() + " node order does not match the lattice");
    values[i] = parse_double(row[lat.params.n], path);
    if (mask) {
      const std::string& m = row[lat.params.n + 1];
      if (m != "0" && m != "1") throw ConfigError(path.string() + " has a non-boolean mask");
      (*mask)[i] = static_cast<std::uint8_t>(m == "1");
    }
  }
}

void dump_json(const json& j, const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

void write_grid_function(const GridFunction& u, const std::filesystem::path& csv_path,
                         const std::filesystem::path& json_path) {
  write_value_csv(u.lattice, u.values, nullptr, csv_path);
  dump_json(grid_sidecar(u.lattice, u.far_field), json_path);
}

GridFunction read_grid_function(const std::filesystem::path& csv_path,
                                const std::filesystem::path& json_path) {
  const json j = parse_json_file(json_path);
  GridFunction u;
  u.lattice = lattice_from_sidecar(j, json_path);
  u.far_field = j["far_field"].get<double>();
  read_values_csv(read_csv(csv_path), u.lattice, false, csv_path, u.values, nullptr);
  return u;
}

void write_seminorm_report(const SeminormReport& rep, const std::filesystem::path& json_path) {
  dump_json(json{{"holder", rep.holder},
                 {"gagliardo", rep.gagliardo},
                 {"ratio", rep.ratio},
                 {"argpair", {rep.arg_i, rep.arg_j}}},
            json_path);
}

void write_residual(const Residual& r, const Lattice& lat,
                    const std::filesystem::path& csv_path,
                    const std::filesystem::path& json_path) {
  std::ofstream out = open_out(csv_path);
  out << (lat.params.n == 1 ? "node_index,x,residual" : "node_index,x,y,residual") << '\n';
  for (std::size_t k = 0; k < r.nodes.size(); ++k) {
    const Point x = lat.coord(r.nodes[k]);
    out << r.nodes[k] << ',' << format_double(x[0]);
    if (lat.params.n == 2) out << ',' << format_double(x[1]);
    out << ',' << format_double(r.values[k]) << '\n';
  }
  json j{{"max_abs", r.max_abs}, {"mean_abs", r.mean_abs}};
  if (r.pin_masses) {
    j["pin_masses"] = {(*r.pin_masses)[0], (*r.pin_masses)[1]};
    j["expected_pin_mass"] = r.expected_pin_mass;
  } else {
    j["pin_masses"] = nullptr;
  }
  dump_json(j, json_path);
}

void write_extremal_result(const ExtremalResult& res, const std::filesystem::path& csv_path,
                           const std::filesystem::path& json_path) {
  write_value_csv(res.u.lattice, res.u.values, nullptr, csv_path);
  json j = grid_sidecar(res.u.lattice, res.u.far_field);
  j["pins"] = json{{"x0", res.pins.x0}, {"y0", res.pins.y0}, {"a", res.pins.a},
                   {"b", res.pins.b}};
  j["gagliardo"] = res.gagliardo;
  j["holder"] = res.holder;
  j["c_star_hat"] = res.c_star_hat;
  j["iterations"] = res.iterations;
  j["final_grad_norm"] = res.final_grad_norm;
  j["tol"] = res.tol;
  dump_json(j, json_path);
}

ExtremalResult read_extremal_result(const std::filesystem::path& csv_path,
                                    const std::filesystem::path& json_path) {
  const json j = parse_json_file(json_path);
  for (const char* key : {"pins", "gagliardo", "holder", "c_star_hat", "iterations",
                          "final_grad_norm", "tol"})
    if (!j.contains(key)) throw ConfigError(json_path.string() + " is missing key " + key);
  ExtremalResult res;
  res.u.lattice = lattice_from_sidecar(j, json_path);
  res.u.far_field = j["far_field"].get<double>();
  read_values_csv(read_csv(csv_path), res.u.lattice, false, csv_path, res.u.values, nullptr);
  const json& pins = j["pins"];
  for (const char* key : {"x0", "y0", "a", "b"})
    if (!pins.contains(key))
      throw ConfigError(json_path.string() + " pins are missing key " + key);
  res.pins.x0 = pins["x0"].get<int>();
  res.pins.y0 = pins["y0"].get<int>();
  res.pins.a = pins["a"].get<double>();
  res.pins.b = pins["b"].get<double>();
  if (res.pins.x0 < 0 || res.pins.x0 >= res.u.lattice.node_count || res.pins.y0 < 0 ||
      res.pins.y0 >= res.u.lattice.node_count)
    throw ConfigError(json_path.string() + " pin indices are out of range");
  res.gagliardo = j["gagliardo"].get<double>();
  res.holder = j["holder"].get<double>();
  res.c_star_hat = j["c_star_hat"].get<double>();
  res.iterations = j["iterations"].get<long>();
  res.final_grad_norm = j["final_grad_norm"].get<double>();
  res.tol = j["tol"].get<double>();
  return res;
}

void write_complement_data(const ComplementData& data, const Lattice& lat,
                           const std::filesystem::path& csv_path,
                           const std::filesystem::path& json_path) {
  write_value_csv(lat, data.g, &data.domain_mask, csv_path);
  dump_json(grid_sidecar(lat, data.far_field), json_path);
}

std::pair<ComplementData, Lattice> read_complement_data(
    const std::filesystem::path& csv_path, const std::filesystem::path& json_path) {
  const json j = parse_json_file(json_path);
  const Lattice lat = lattice_from_sidecar(j, json_path);
  ComplementData data;
  data.far_field = j["far_field"].get<double>();
  read_values_csv(read_csv(csv_path), lat, true, csv_path, data.g, &data.domain_mask);
  return {data, lat};
}

void write_radius_report(const std::vector<double>& radii,
                         const std::vector<double>& values,
                         const std::filesystem::path& json_path) {
  if (radii.size() != values.size())
    throw ConfigError("radius report arrays have different lengths");
  json j = json::array();
  for (std::size_t i = 0; i < radii.size(); ++i) j.push_back({radii[i], values[i]});
  dump_json(j, json_path);
}

}  // namespace morrey
