#pragma once

#include <stdexcept>
#include <string>

namespace morrey {

/// Base class for all library errors. Subcommands map these to exit code 1
/// (configuration/validation) or 2 (NonConvergenceError); they never abort.
struct MorreyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parameters outside the Morrey regime s*p > n.
struct RegimeError : MorreyError {
  using MorreyError::MorreyError;
};

/// Lattice geometry violation (divisibility, node off the lattice, origin node).
struct GeometryError : MorreyError {
  using MorreyError::MorreyError;
};

/// Operands built over different lattices.
struct MismatchError : MorreyError {
  using MorreyError::MorreyError;
};

/// A region query (ball, ring) selected no nodes.
struct EmptyRegionError : MorreyError {
  using MorreyError::MorreyError;
};

/// Constant function where a non-constant one is required.
struct DegenerateError : MorreyError {
  using MorreyError::MorreyError;
};

/// A Hölder argpair that cannot be used as a pin pair.
struct UnmappablePairError : MorreyError {
  using MorreyError::MorreyError;
};

/// Input data violating a documented hypothesis of a check.
struct PreconditionError : MorreyError {
  using MorreyError::MorreyError;
};

/// Malformed or inconsistent run configuration.
struct ConfigError : MorreyError {
  using MorreyError::MorreyError;
};

/// Iterative solver exhausted max_iter before reaching tolerance.
struct NonConvergenceError : MorreyError {
  NonConvergenceError(const std::string& what, long iterations, double grad_norm)
      : MorreyError(what), iterations(iterations), grad_norm(grad_norm) {}
  long iterations;
  double grad_norm;
};

}  // namespace morrey
