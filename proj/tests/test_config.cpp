#include <fstream>
#include <string>

#include "doctest.h"
#include "morrey/config.hpp"
#include "test_util.hpp"

using namespace morrey;
namespace fs = std::filesystem;

TEST_CASE("defaults describe the standard 1d problem") {
  const RunConfig cfg = load_config(std::nullopt, {});
  CHECK(cfg.n == 1);
  CHECK(cfg.s == 0.8);
  CHECK(cfg.p == 2.0);
  CHECK(cfg.L == 4.0);
  CHECK(cfg.h == 0.25);
  CHECK(cfg.tol == 1e-8);
  CHECK(cfg.max_iter == 100000);
  CHECK(cfg.preconditioned);
  CHECK_FALSE(cfg.free_far_field);
  CHECK(cfg.rng_seed == 0);
  CHECK(cfg.output_dir == ".");
}

TEST_CASE("apply_override parses every key family") {
  RunConfig cfg;
  apply_override(cfg, "params.n=2");
  apply_override(cfg, "params.s=0.9");
  apply_override(cfg, "params.p=4");
  apply_override(cfg, "geometry.L=2");
  apply_override(cfg, "geometry.h=0.125");
  apply_override(cfg, "pins.a=2.5");
  apply_override(cfg, "pins.b=-0.5");
  apply_override(cfg, "pins.x0=0.0,1.0");
  apply_override(cfg, "pins.y0=0.0,-1.0");
  apply_override(cfg, "solver.tol=1e-10");
  apply_override(cfg, "solver.max_iter=500");
  apply_override(cfg, "solver.preconditioned=false");
  apply_override(cfg, "solver.free_far_field=1");
  apply_override(cfg, "sweep.axis=s");
  apply_override(cfg, "sweep.values=0.7,0.8,0.9");
  apply_override(cfg, "barrier.r0=0.4");
  apply_override(cfg, "barrier.r1=0.2");
  apply_override(cfg, "barrier.M=2");
  apply_override(cfg, "rng_seed=42");
  apply_override(cfg, "output_dir=/tmp/somewhere");
  apply_override(cfg, "experiment=slit");

  CHECK(cfg.n == 2);
  CHECK(cfg.s == 0.9);
  CHECK(cfg.p == 4.0);
  CHECK(cfg.L == 2.0);
  CHECK(cfg.h == 0.125);
  CHECK(cfg.pin_a == 2.5);
  CHECK(cfg.pin_b == -0.5);
  REQUIRE(cfg.pin_x0.has_value());
  CHECK((*cfg.pin_x0)[1] == 1.0);
  CHECK(cfg.tol == 1e-10);
  CHECK(cfg.max_iter == 500);
  CHECK_FALSE(cfg.preconditioned);
  CHECK(cfg.free_far_field);
  CHECK(cfg.sweep_axis == "s");
  REQUIRE(cfg.sweep_values.size() == 3);
  CHECK(cfg.sweep_values[2] == 0.9);
  CHECK(cfg.barrier_M == 2.0);
  CHECK(cfg.rng_seed == 42);
  CHECK(cfg.output_dir == "/tmp/somewhere");
  CHECK(cfg.experiment == "slit");
}

TEST_CASE("apply_override rejects bad input") {
  RunConfig cfg;
  CHECK_THROWS_AS(apply_override(cfg, "not-an-assignment"), ConfigError);
  CHECK_THROWS_AS(apply_override(cfg, "params.s=fast"), ConfigError);
  CHECK_THROWS_AS(apply_override(cfg, "params.n=3"), ConfigError);
  CHECK_THROWS_AS(apply_override(cfg, "solver.preconditioned=maybe"), ConfigError);
  CHECK_THROWS_AS(apply_override(cfg, "sweep.axis=q"), ConfigError);
  CHECK_THROWS_AS(apply_override(cfg, "sweep.values="), ConfigError);
  try {
    apply_override(cfg, "params.sigma=0.5");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("params.sigma") != std::string::npos);
  }
}

TEST_CASE("load_config reads files, skips comments, and layers overrides") {
  const fs::path dir = testutil::fresh_dir("config");
  const fs::path file = dir / "run.cfg";
  {
    std::ofstream out(file);
    out << "# standard 2d setup\n";
    out << "\n";
    out << "params.n=2\n";
    out << "params.s=0.9\n";
    out << "params.p=4\n";
    out << "geometry.L=2\n";
    out << "   geometry.h=0.25   \n";  // surrounding whitespace is fine
  }
  const RunConfig cfg = load_config(file, {"geometry.L=1", "rng_seed=7"});
  CHECK(cfg.n == 2);
  CHECK(cfg.L == 1.0);  // override wins over the file
  CHECK(cfg.h == 0.25);
  CHECK(cfg.rng_seed == 7);

  {
    std::ofstream out(file, std::ios::trunc);
    out << "params.n=2\n";
    out << "params.bogus=1\n";
  }
  try {
    load_config(file, {});
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("run.cfg") != std::string::npos);
    CHECK(msg.find("2") != std::string::npos);  // offending line number
  }
  CHECK_THROWS_AS(load_config(dir / "missing.cfg", {}), ConfigError);
}

TEST_CASE("config builders produce lattice, pins, and solver options") {
  RunConfig cfg;
  cfg.n = 2;
  cfg.s = 0.9;
  cfg.p = 4.0;
  cfg.L = 1.0;
  cfg.h = 0.25;
  const Lattice lat = config_lattice(cfg);
  CHECK(lat.m == 9);

  PinSpec pins = config_pins(cfg, lat);
  CHECK(pins.x0 == *lat.node_at(Point{0.0, 1.0}));
  CHECK(pins.y0 == *lat.node_at(Point{0.0, -1.0}));
  CHECK(pins.a == 1.0);
  CHECK(pins.b == -1.0);

  cfg.pin_x0 = std::vector<double>{0.25, 0.5};
  cfg.pin_a = 2.0;
  pins = config_pins(cfg, lat);
  CHECK(pins.x0 == *lat.node_at(Point{0.25, 0.5}));
  CHECK(pins.a == 2.0);

  cfg.pin_x0 = std::vector<double>{0.3, 0.0};  // not a lattice node
  CHECK_THROWS_AS(config_pins(cfg, lat), ConfigError);
  cfg.pin_x0 = std::vector<double>{0.25};  // wrong arity for n = 2
  CHECK_THROWS_AS(config_pins(cfg, lat), ConfigError);
  cfg.pin_x0.reset();

  cfg.tol = 1e-9;
  cfg.max_iter = 777;
  cfg.preconditioned = false;
  cfg.free_far_field = true;
  const SolveOptions opt = config_solve_options(cfg);
  CHECK(opt.tol == 1e-9);
  CHECK(opt.max_iter == 777);
  CHECK_FALSE(opt.preconditioned);
  CHECK(opt.free_far_field);

  // Regime violations surface as config-level errors with context.
  cfg.s = 0.4;
  cfg.p = 2.0;
  CHECK_THROWS_AS(config_lattice(cfg), MorreyError);
}
