#pragma once

#include <array>
#include <optional>

#include "morrey/extremal.hpp"

namespace morrey {

/// Pointwise values of the discrete fractional p-Laplacian over a set of
/// nodes, with norm summaries. For pinned problems the Dirac masses
/// h^n * (-Delta_p)^s u at the two pins come along too.
struct Residual {
  std::vector<int> nodes;
  std::vector<double> values;
  double max_abs = 0.0;
  double mean_abs = 0.0;
  /// h^n * operator at (x0, y0); only set by euler_lagrange_residual.
  std::optional<std::array<double, 2>> pin_masses;
  /// J_p(a-b) / (|x0-y0|^{sp-n} * c_star_hat^p): the mass the pinned problem
  /// carries at x0 (y0 gets its negative). Exact at the exact minimizer when
  /// the pin nodes are mirror images and the Hölder seminorm is attained at
  /// the pin pair; 0 when unpinned.
  double expected_pin_mass = 0.0;
};

/// Discrete fractional p-Laplacian at one node:
///   (1/(p h^n)) * dE/du_k = h^{-n} (2 sum_j w_kj J_p(u_k - u_j)
///                                   + far_k J_p(u_k - far_field)).
/// The principal value needs no excision: the lattice sum has no k = k term.
/// Exactly 0 for constant u. Throws MismatchError on a foreign lattice.
double frac_p_laplacian(const GridFunction& u, const KernelWeights& w, int node);

/// G(x) = |x|^{(sp-n)/(p-1)}, the explicit (s,p)-harmonic barrier away
/// from the origin. G(0) = 0, radially increasing, homogeneous of degree
/// (sp-n)/(p-1).
double barrier_value(const Point& x, const FracParams& params);

/// Operator residual of the sampled barrier at the test nodes. The far field
/// is G(L + 1), a truncation stand-in for the unbounded tail; the residual is
/// meaningful under refinement (L up, h down), not in absolute terms.
/// Throws GeometryError when a test node sits within 2h of the origin,
/// EmptyRegionError when test_nodes is empty.
Residual verify_barrier_harmonicity(const FracParams& params, const Lattice& lat,
                                    const std::vector<int>& test_nodes);

/// Operator values of a converged extremal at every non-pinned node (all of
/// which should vanish to solver tolerance), plus the two pin masses, which
/// carry opposite signs, sum to zero for mirror-image pins, and match
/// expected_pin_mass in magnitude when the Hölder pair is the pin pair.
Residual euler_lagrange_residual(const ExtremalResult& res, const KernelWeights& w);

}  // namespace morrey
