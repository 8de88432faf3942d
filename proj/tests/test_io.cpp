#include <cstdlib>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "morrey/io.hpp"
#include "test_util.hpp"

using namespace morrey;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void rewrite_line(const fs::path& path, std::size_t line_no, const std::string& line) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  std::string l;
  while (std::getline(in, l)) lines.push_back(l);
  in.close();
  REQUIRE(line_no < lines.size());
  lines[line_no] = line;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  for (const auto& s : lines) out << s << '\n';
}

}  // namespace

TEST_CASE("format_double round-trips exactly") {
  for (double v : {0.0, -0.0, 0.1, -3.5, 1.0 / 3.0, 1e-17, 6.02e23, 2.0,
                   1.0 + std::numeric_limits<double>::epsilon()}) {
    const std::string s = format_double(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
  CHECK(format_double(2.0) == "2");
}

TEST_CASE("grid function round trip, 1d and 2d, with byte determinism") {
  SplitRng rng(71);
  for (const Lattice& lat :
       {testutil::lat1d(0.8, 2.0, 2.0, 0.5), testutil::lat2d(0.9, 4.0, 1.0, 0.5)}) {
    const GridFunction u = testutil::random_function(lat, rng, 1.0 / 3.0);
    const auto dir = testutil::fresh_dir("io_grid_" + std::to_string(lat.params.n));
    write_grid_function(u, dir / "u.csv", dir / "u.json");
    const GridFunction back = read_grid_function(dir / "u.csv", dir / "u.json");
    CHECK(back.lattice == lat);
    CHECK(back.values == u.values);  // bitwise, via shortest round-trip format
    CHECK(back.far_field == u.far_field);

    const std::string csv1 = testutil::slurp(dir / "u.csv");
    const std::string json1 = testutil::slurp(dir / "u.json");
    write_grid_function(u, dir / "u.csv", dir / "u.json");
    CHECK(testutil::slurp(dir / "u.csv") == csv1);
    CHECK(testutil::slurp(dir / "u.json") == json1);
  }
}

TEST_CASE("grid function reader rejects inconsistent files") {
  SplitRng rng(72);
  const Lattice lat = testutil::lat1d(0.8, 2.0, 2.0, 0.5);
  const GridFunction u = testutil::random_function(lat, rng);
  const auto dir = testutil::fresh_dir("io_bad");
  write_grid_function(u, dir / "u.csv", dir / "u.json");

  SUBCASE("wrong column count") {
    rewrite_line(dir / "u.csv", 3, "0.5,1.0,9.9");
    CHECK_THROWS_AS(read_grid_function(dir / "u.csv", dir / "u.json"), ConfigError);
  }
  SUBCASE("missing row") {
    std::ofstream out(dir / "u.csv", std::ios::binary | std::ios::trunc);
    out << "x,value\n0,1\n";
    out.close();
    CHECK_THROWS_AS(read_grid_function(dir / "u.csv", dir / "u.json"), ConfigError);
  }
  SUBCASE("coordinate drift") {
    rewrite_line(dir / "u.csv", 1, "-1.75,0.5");
    CHECK_THROWS_AS(read_grid_function(dir / "u.csv", dir / "u.json"), ConfigError);
  }
  SUBCASE("unparsable value") {
    rewrite_line(dir / "u.csv", 2, "-1.5,abc");
    CHECK_THROWS_AS(read_grid_function(dir / "u.csv", dir / "u.json"), ConfigError);
  }
  SUBCASE("malformed sidecar") {
    std::ofstream out(dir / "u.json", std::ios::binary | std::ios::trunc);
    out << "{ not json";
    out.close();
    CHECK_THROWS_AS(read_grid_function(dir / "u.csv", dir / "u.json"), ConfigError);
  }
}

TEST_CASE("extremal result round trip preserves values and metadata") {
  const Lattice lat = testutil::lat1d(0.8, 3.0, 1.0, 0.5);
  const KernelWeights kw = build_weights(lat);
  const ExtremalResult res = solve_extremal(lat, kw, canonical_pins(lat), 1e-9, 100000);
  const auto dir = testutil::fresh_dir("io_extremal");
  write_extremal_result(res, dir / "e.csv", dir / "e.json");
  const ExtremalResult back = read_extremal_result(dir / "e.csv", dir / "e.json");
  CHECK(back.u.lattice == lat);
  CHECK(back.u.values == res.u.values);
  CHECK(back.u.far_field == res.u.far_field);
  CHECK(back.pins.x0 == res.pins.x0);
  CHECK(back.pins.y0 == res.pins.y0);
  CHECK(back.pins.a == res.pins.a);
  CHECK(back.pins.b == res.pins.b);
  CHECK(back.gagliardo == res.gagliardo);
  CHECK(back.holder == res.holder);
  CHECK(back.c_star_hat == res.c_star_hat);
  CHECK(back.iterations == res.iterations);
  CHECK(back.tol == res.tol);

  // Pins outside the lattice are rejected.
  json j = json::parse(testutil::slurp(dir / "e.json"));
  j["pins"]["x0"] = lat.node_count + 3;
  std::ofstream out(dir / "e.json", std::ios::binary | std::ios::trunc);
  out << j.dump(2) << '\n';
  out.close();
  CHECK_THROWS_AS(read_extremal_result(dir / "e.csv", dir / "e.json"), ConfigError);
}

TEST_CASE("complement data round trip preserves the mask") {
  const Lattice lat = testutil::lat2d(0.9, 4.0, 1.0, 0.25);
  const ComplementData data = make_slit_data(lat);
  const auto dir = testutil::fresh_dir("io_complement");
  write_complement_data(data, lat, dir / "d.csv", dir / "d.json");
  const auto [back, blat] = read_complement_data(dir / "d.csv", dir / "d.json");
  CHECK(blat == lat);
  CHECK(back.domain_mask == data.domain_mask);
  CHECK(back.g == data.g);
  CHECK(back.far_field == data.far_field);

  rewrite_line(dir / "d.csv", 1, "-1,-1,0,2");  // mask must be 0/1
  CHECK_THROWS_AS(read_complement_data(dir / "d.csv", dir / "d.json"), ConfigError);
}

TEST_CASE("report writers emit the documented shapes") {
  const auto dir = testutil::fresh_dir("io_reports");

  write_radius_report({0.25, 0.5}, {0.1, 0.4}, dir / "rings.json");
  const json rings = json::parse(testutil::slurp(dir / "rings.json"));
  REQUIRE(rings.is_array());
  REQUIRE(rings.size() == 2);
  CHECK(rings[0][0].get<double>() == 0.25);
  CHECK(rings[1][1].get<double>() == 0.4);

  const Lattice lat = testutil::lat1d(0.8, 2.0, 2.0, 0.5);
  const KernelWeights kw = build_weights(lat);
  SplitRng rng(73);
  const GridFunction u = testutil::random_function(lat, rng);
  const SeminormReport rep = verify_morrey_bound(u, kw);
  write_seminorm_report(rep, dir / "semi.json");
  const json semi = json::parse(testutil::slurp(dir / "semi.json"));
  CHECK(semi.at("holder").get<double>() == rep.holder);
  CHECK(semi.at("gagliardo").get<double>() == rep.gagliardo);
  CHECK(semi.at("ratio").get<double>() == rep.ratio);
  CHECK(semi.at("argpair")[0].get<int>() == rep.arg_i);

  Residual r;
  r.nodes = {1, 2};
  r.values = {0.5, -1.0};
  r.max_abs = 1.0;
  r.mean_abs = 0.75;
  write_residual(r, lat, dir / "res.csv", dir / "res.json");
  json jr = json::parse(testutil::slurp(dir / "res.json"));
  CHECK(jr.at("max_abs").get<double>() == 1.0);
  CHECK(jr.at("pin_masses").is_null());
  const std::string csv = testutil::slurp(dir / "res.csv");
  CHECK(csv.find("node_index") == 0);

  r.pin_masses = std::array<double, 2>{0.25, -0.25};
  r.expected_pin_mass = 0.25;
  write_residual(r, lat, dir / "res.csv", dir / "res.json");
  jr = json::parse(testutil::slurp(dir / "res.json"));
  CHECK(jr.at("pin_masses")[0].get<double>() == 0.25);
  CHECK(jr.at("expected_pin_mass").get<double>() == 0.25);
}
