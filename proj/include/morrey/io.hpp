#pragma once

#include <filesystem>
#include <string>
#include <utility>

#include "morrey/operator.hpp"
#include "morrey/perron.hpp"

namespace morrey {

/// Shortest decimal that round-trips the double; the one float format used
/// in every artifact, so identical inputs give byte-identical files.
std::string format_double(double v);

/// CSV `x[,y],value` in node order plus a JSON sidecar
/// {n, s, p, L, h, far_field}.
void write_grid_function(const GridFunction& u, const std::filesystem::path& csv_path,
                         const std::filesystem::path& json_path);
/// Inverse of write_grid_function; throws ConfigError on malformed or
/// inconsistent files.
GridFunction read_grid_function(const std::filesystem::path& csv_path,
                                const std::filesystem::path& json_path);

/// JSON {holder, gagliardo, ratio, argpair: [i, j]}.
void write_seminorm_report(const SeminormReport& rep, const std::filesystem::path& json_path);

/// CSV `node_index,x[,y],residual` plus JSON summary
/// {max_abs, mean_abs, pin_masses} (pin_masses null when absent).
void write_residual(const Residual& r, const Lattice& lat,
                    const std::filesystem::path& csv_path,
                    const std::filesystem::path& json_path);

/// The GridFunction CSV plus JSON
/// {pins, gagliardo, holder, c_star_hat, iterations, final_grad_norm, ...}.
void write_extremal_result(const ExtremalResult& res, const std::filesystem::path& csv_path,
                           const std::filesystem::path& json_path);
/// Inverse of write_extremal_result. Derived seminorm fields are taken from
/// the JSON as stored; consumers that distrust the file recompute them.
ExtremalResult read_extremal_result(const std::filesystem::path& csv_path,
                                    const std::filesystem::path& json_path);

/// The GridFunction CSV with an extra `mask` column (1 = free node).
void write_complement_data(const ComplementData& data, const Lattice& lat,
                           const std::filesystem::path& csv_path,
                           const std::filesystem::path& json_path);
std::pair<ComplementData, Lattice> read_complement_data(
    const std::filesystem::path& csv_path, const std::filesystem::path& json_path);

/// JSON array of [radius, value] pairs.
void write_radius_report(const std::vector<double>& radii,
                         const std::vector<double>& values,
                         const std::filesystem::path& json_path);

}  // namespace morrey
