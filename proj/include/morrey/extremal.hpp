#pragma once

#include <optional>
#include <vector>

#include "morrey/seminorm.hpp"

namespace morrey {

/// Two pinned node values normalizing the extremal.
struct PinSpec {
  int x0 = 0;
  int y0 = 0;
  double a = 1.0;
  double b = -1.0;
};

/// Pins at the nodes +e_n and -e_n with values +1 and -1.
PinSpec canonical_pins(const Lattice& lat);

struct SolveOptions {
  double tol = 1e-8;       // on the projected-gradient max-norm in operator units
  long max_iter = 100000;
  bool preconditioned = true;
  /// Value outside the box; defaults to (a+b)/2, the limit the extremal
  /// attains at infinity. The stability check overrides it to match its
  /// comparison function.
  std::optional<double> far_field;
  /// Sensitivity mode: optimize the far-field value as one extra scalar
  /// (outer root-find on dE/dg, which is monotone by convexity). far_field /
  /// the (a+b)/2 default then only seeds the search; the result's
  /// u.far_field reports the optimum. For mirror-image pins the optimum is
  /// (a+b)/2 itself, which is the point of measuring it.
  bool free_far_field = false;
  /// Initial node values (pins get overwritten); defaults to the far field.
  std::optional<std::vector<double>> init;
  /// When set, receives the energy after every accepted step (monotone).
  std::vector<double>* energy_trace = nullptr;
};

struct ExtremalResult {
  GridFunction u;
  PinSpec pins;
  double gagliardo = 0.0;
  double holder = 0.0;
  double c_star_hat = 0.0;  // holder / gagliardo
  long iterations = 0;
  double final_grad_norm = 0.0;
  double tol = 0.0;  // tolerance the solve was run with
};

/// Minimizes the Gagliardo p-energy over node values with u[x0] = a,
/// u[y0] = b and the far field held fixed. Gradient descent with a
/// Barzilai-Borwein initial step, monotone backtracking line search, and
/// diagonal preconditioning; converged when
/// max over free nodes of |dE/du_k| / (p h^n) <= tol.
/// Throws NonConvergenceError past max_iter.
ExtremalResult solve_extremal(const Lattice& lat, const KernelWeights& w,
                              const PinSpec& pins, const SolveOptions& opt);
ExtremalResult solve_extremal(const Lattice& lat, const KernelWeights& w,
                              const PinSpec& pins, double tol = 1e-8,
                              long max_iter = 100000);

/// holder / gagliardo of a converged result; the lattice estimate of the
/// sharp constant. Throws DegenerateError when gagliardo is 0.
double estimate_sharp_constant(const ExtremalResult& res);

struct UniquenessReport {
  double max_gap = 0.0;  // max-norm distance between solutions from different inits
  std::vector<long> iterations;
};

/// Re-solves from every provided initial guess; solutions must coincide.
UniquenessReport verify_uniqueness(const Lattice& lat, const KernelWeights& w,
                                   const PinSpec& pins,
                                   const std::vector<std::vector<double>>& inits,
                                   const SolveOptions& opt);

struct SymmetryReport {
  /// max over nodes of |u(x) - u(Rx)| over the lattice isometries R fixing
  /// the pin axis (empty group for n = 1, where this stays 0).
  double axis_defect = 0.0;
  /// max over nodes of |u(x', x_n) + u(x', -x_n)|.
  double antisym_defect = 0.0;
};

/// Requires canonical-type pins (nodes at +-e_n, values a = -b).
SymmetryReport verify_symmetries(const ExtremalResult& res);

struct BoundsReport {
  bool within_bounds = false;  // b - delta <= u <= a + delta everywhere, delta = 10 tol
  /// min over non-pinned nodes at distance >= 2h from both pins of
  /// min(a - u_i, u_i - b); positive means strict interior bounds.
  double strict_margin = 0.0;
};

BoundsReport verify_pointwise_bounds(const ExtremalResult& res);

struct StabilityReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;  // (rhs - lhs)/rhs, >= 0 up to numerical slack
  double matched_c = 0.0;  // sharp-constant estimate of the matched extremal
  bool p_ge_2_branch = false;
};

/// Checks the stability inequality for v against the extremal matched to v's
/// Hölder-attaining pair: the matched problem pins v's argpair values and
/// inherits v's far field, and its own sharp-constant estimate plays C*.
/// res supplies solver settings and is reused when it already matches.
StabilityReport verify_stability(const ExtremalResult& res, const GridFunction& v,
                                 const KernelWeights& w);

namespace detail {

struct MinimizeStats {
  long iterations = 0;
  double final_grad_norm = 0.0;  // in operator units, max_k |dE/du_k| / (p h^n)
};

/// Shared descent core: minimizes the p-energy over the free_nodes entries of
/// vals in place (every other entry, and the far field, stays fixed).
/// Diagonally preconditioned Barzilai-Borwein steps with monotone
/// backtracking. Throws NonConvergenceError with vals left at the best
/// iterate found.
MinimizeStats minimize_masked_energy(const KernelWeights& kw, std::vector<double>& vals,
                                     const std::vector<int>& free_nodes, double far_field,
                                     double tol, long max_iter, bool preconditioned,
                                     std::vector<double>* energy_trace);

/// -(1/p) dE/dg at fixed node values: the far-field stationarity measure.
double far_field_balance(const KernelWeights& kw, const std::vector<double>& vals, double g);

}  // namespace detail

}  // namespace morrey
