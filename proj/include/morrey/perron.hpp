#pragma once

#include <cstdint>

#include "morrey/extremal.hpp"

namespace morrey {

/// Dirichlet data prescribed on the whole complement of the domain: every
/// non-free node carries a value, and far_field covers everything outside
/// the truncation box. The discrete energy solution is unique (strict
/// convexity), so it stands in for both the upper and the lower Perron
/// solution, whose gap is a continuum artifact.
struct ComplementData {
  std::vector<std::uint8_t> domain_mask;  // 1 = free node, interior to the domain
  std::vector<double> g;                  // read at constrained nodes only
  double far_field = 0.0;
};

enum class SweepMode {
  gauss_seidel,  // in-place sweeps; the reference mode
  jacobi         // simultaneous updates from the previous iterate
};

/// Nonlinear relaxation for the complement-value problem: each free node in
/// turn is moved to the root of its strictly increasing J_p balance
///   2 sum_j w_ij J_p(u_i - u_j) + far_i J_p(u_i - far_field) = 0
/// by bisection on [min_j u_j, max_j u_j] (far field included in the
/// bracket), at most 100 halvings per solve. A loose gradient-descent pass
/// on the same masked energy warm-starts the sweeps. Converged when the
/// free-node balance max-norm, scaled by h^{-n}, is <= tol; max_iter counts
/// sweeps. Constrained values are never touched; the solution obeys the
/// discrete maximum principle. init, when given, seeds the free values.
GridFunction solve_dirichlet(const Lattice& lat, const KernelWeights& w,
                             const ComplementData& data, double tol = 1e-8,
                             long max_iter = 100000,
                             SweepMode mode = SweepMode::gauss_seidel,
                             const std::vector<double>* init = nullptr);

struct BarrierBoundReport {
  /// max over free y of |u(y)| / (bound_constant * min_x |x - y|^beta), the
  /// min over constrained x within r1 of the barrier center.
  double worst_ratio = 0.0;
  double bound_constant = 0.0;  // M * (r0 - r1)^{-beta}
  double beta = 0.0;            // (sp - n)/(p - 1)
  int worst_y = -1;
  int worst_x = -1;
};

/// Boundary-barrier estimate: with complement data vanishing on B(x0, r0)
/// and |g| <= M everywhere, the solution obeys
///   |u(y)| <= M (r0 - r1)^{-beta} |x - y|^beta
/// for every constrained x in B(x0, r1) and every free y. Reports the worst
/// ratio. Throws PreconditionError when the data violate the hypotheses,
/// EmptyRegionError when no constrained node lies within r1 of x0.
/// precomputed, when given, must be the solve_dirichlet solution for data
/// and skips the internal solve.
BarrierBoundReport verify_barrier_bound(const Lattice& lat, const KernelWeights& w,
                                        const ComplementData& data, const Point& x0,
                                        double r0, double r1, double M,
                                        double tol = 1e-8, long max_iter = 100000,
                                        const GridFunction* precomputed = nullptr);

/// Complement data of the slit problem: 0 on the slit {x2 = 0, x1 >= 0}
/// (which wins on overlaps), 1 at nodes with |x| >= 1 and outside the box.
/// Requires n = 2.
ComplementData make_slit_data(const Lattice& lat);

struct SlitReport {
  std::vector<double> radii;     // 4h, 8h, 16h, ... up to 1/2
  std::vector<double> ring_max;  // max |u| over nodes with ||x| - rho| <= h/2
  /// Worst violation of the radial monotonicity u(y) <= u(2y) over free node
  /// pairs y, 2y inside the unit ball.
  double radial_violation = 0.0;
  /// max |u_U + u_L| for the negated-data run; exactly 0, the scheme is odd.
  double negation_gap = 0.0;
  GridFunction u;
};

/// Solves the slit problem at the given resolution and reports the decay of
/// the solution toward 0 near the slit tip, the radial monotonicity of
/// rescalings, and the odd-symmetry cross-check. Requires params.n = 2.
SlitReport run_slit_experiment(const FracParams& params, double L, double h,
                               double tol = 1e-8, long max_iter = 100000);

struct DecayReport {
  std::vector<double> radii;
  std::vector<double> max_dev;  // max |u - (a+b)/2| over nodes with |x| >= radius
  /// Worst violation of sign(u - (a+b)/2) = sign(x_n) over off-hyperplane
  /// nodes (0 when the sign pattern holds).
  double sign_defect = 0.0;
  /// |dE/dg| / (p h^n) at the result's far field: how far (a+b)/2 is from
  /// the free-far-field optimum (0 at the exact minimizer for mirror pins).
  double far_field_balance = 0.0;
};

/// Limit-at-infinity report for a pinned extremal with canonical-type pins:
/// deviation of u from the pin midpoint over the outer regions |x| >= r,
/// the half-space sign pattern, and the far-field stationarity measure.
DecayReport run_decay_experiment(const ExtremalResult& res, const std::vector<double>& radii,
                                 const KernelWeights& w);

}  // namespace morrey
