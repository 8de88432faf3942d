#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "morrey/extremal.hpp"

namespace morrey {

/// One flat bag of settings for every subcommand, read from `key=value`
/// lines (# comments, blank lines ignored) and overridable one assignment
/// at a time. Unknown keys are errors. Keys:
///   params.n params.s params.p
///   geometry.L geometry.h
///   pins.a pins.b pins.x0 pins.y0        (coordinates, comma-separated)
///   solver.tol solver.max_iter solver.preconditioned solver.free_far_field
///   sweep.axis sweep.values              (axis in {s,p,h,L}; comma list)
///   barrier.r0 barrier.r1 barrier.M
///   experiment rng_seed output_dir
struct RunConfig {
  int n = 1;
  double s = 0.8;
  double p = 2.0;
  double L = 4.0;
  double h = 0.25;
  double pin_a = 1.0;
  double pin_b = -1.0;
  std::optional<std::vector<double>> pin_x0;  // defaults to the +e_n node
  std::optional<std::vector<double>> pin_y0;  // defaults to the -e_n node
  double tol = 1e-8;
  long max_iter = 100000;
  bool preconditioned = true;
  bool free_far_field = false;
  std::string experiment;
  std::string sweep_axis;
  std::vector<double> sweep_values;
  double barrier_r0 = 0.5;
  double barrier_r1 = 0.25;
  double barrier_M = 1.0;
  std::uint64_t rng_seed = 0;
  std::string output_dir = ".";
};

/// Applies one `key=value` assignment; throws ConfigError on unknown keys or
/// unparsable values.
void apply_override(RunConfig& cfg, const std::string& assignment);

/// Defaults, then the file (when given), then the overrides in order.
RunConfig load_config(const std::optional<std::filesystem::path>& file,
                      const std::vector<std::string>& overrides);

/// Builders that funnel RunConfig into the library types, converting their
/// validation failures into ConfigError-rooted exceptions where needed.
Lattice config_lattice(const RunConfig& cfg);
PinSpec config_pins(const RunConfig& cfg, const Lattice& lat);
SolveOptions config_solve_options(const RunConfig& cfg);

}  // namespace morrey
