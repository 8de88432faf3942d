#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "morrey/extremal.hpp"
#include "morrey/operator.hpp"
#include "test_util.hpp"

using namespace morrey;

namespace {

// Direct linear-solve oracle for p = 2: the stationarity system over the free
// nodes is linear in u.
std::vector<double> linear_oracle(const Lattice& lat, const KernelWeights& kw,
                                  const PinSpec& pins, double far) {
  std::vector<int> free_nodes;
  for (int i = 0; i < lat.node_count; ++i)
    if (i != pins.x0 && i != pins.y0) free_nodes.push_back(i);
  const int nf = static_cast<int>(free_nodes.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nf, nf);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nf);
  std::vector<int> slot(lat.node_count, -1);
  for (int r = 0; r < nf; ++r) slot[free_nodes[r]] = r;
  for (int r = 0; r < nf; ++r) {
    const int k = free_nodes[r];
    double diag = kw.far[k];
    for (int j = 0; j < lat.node_count; ++j) {
      if (j == k) continue;
      const double w = 2.0 * kw.w(k, j);
      diag += w;
      if (slot[j] >= 0)
        A(r, slot[j]) -= w;
      else
        rhs(r) += w * (j == pins.x0 ? pins.a : pins.b);
    }
    A(r, r) += diag;
    rhs(r) += kw.far[k] * far;
  }
  const Eigen::VectorXd x = A.partialPivLu().solve(rhs);
  std::vector<double> u(lat.node_count);
  u[pins.x0] = pins.a;
  u[pins.y0] = pins.b;
  for (int r = 0; r < nf; ++r) u[free_nodes[r]] = x(r);
  return u;
}

// Brute-force oracle for general p: cyclic coordinate descent with a
// golden-section line search on the one-dimensional energy slices.
std::vector<double> coordinate_descent_oracle(const Lattice& lat, const KernelWeights& kw,
                                              const PinSpec& pins, double far,
                                              int sweeps = 4000) {
  GridFunction u = constant_function(lat, far);
  u.values[pins.x0] = pins.a;
  u.values[pins.y0] = pins.b;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  const auto energy = [&] { return gagliardo_energy(u, kw); };
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    double moved = 0.0;
    for (int k = 0; k < lat.node_count; ++k) {
      if (k == pins.x0 || k == pins.y0) continue;
      double lo = std::min(pins.b, far) - 1.0, hi = std::max(pins.a, far) + 1.0;
      const double before = u.values[k];
      for (int it = 0; it < 200; ++it) {
        const double m1 = hi - gr * (hi - lo), m2 = lo + gr * (hi - lo);
        u.values[k] = m1;
        const double e1 = energy();
        u.values[k] = m2;
        const double e2 = energy();
        if (e1 < e2)
          hi = m2;
        else
          lo = m1;
        if (hi - lo < 1e-14) break;
      }
      u.values[k] = 0.5 * (lo + hi);
      moved = std::max(moved, std::abs(u.values[k] - before));
    }
    if (moved < 1e-13) break;
  }
  return u.values;
}

double max_gap(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("three-node problem has the symmetric solution") {
  const Lattice lat = testutil::lat1d(0.8, 3.0, 1.0, 1.0);  // nodes -1, 0, 1
  const KernelWeights kw = build_weights(lat);
  const ExtremalResult res = solve_extremal(lat, kw, canonical_pins(lat), 1e-11, 100000);
  CHECK(res.u.values[0] == -1.0);
  CHECK(res.u.values[2] == 1.0);
  CHECK(std::abs(res.u.values[1]) <= 1e-9);
  CHECK(res.u.far_field == 0.0);
  CHECK(res.final_grad_norm <= 1e-11);
  CHECK(res.c_star_hat == doctest::Approx(res.holder / res.gagliardo));
}

TEST_CASE("p = 2 solver matches the dense linear oracle") {
  const Lattice lat = testutil::lat1d(0.8, 2.0, 2.0, 0.25);  // m = 17
  const KernelWeights kw = build_weights(lat);
  const PinSpec pins = canonical_pins(lat);
  const ExtremalResult res = solve_extremal(lat, kw, pins, 1e-10, 100000);
  const std::vector<double> oracle = linear_oracle(lat, kw, pins, 0.0);
  CHECK(max_gap(res.u.values, oracle) <= 1e-8);
}

TEST_CASE("general p solver matches coordinate descent") {
  for (double p : {1.5, 3.0}) {
    const Lattice lat = testutil::lat1d(0.8, p, 1.0, 0.5);  // 3 free nodes
    const KernelWeights kw = build_weights(lat);
    const PinSpec pins = canonical_pins(lat);
    const ExtremalResult res = solve_extremal(lat, kw, pins, 1e-11, 200000);
    const std::vector<double> oracle = coordinate_descent_oracle(lat, kw, pins, 0.0);
    CHECK(max_gap(res.u.values, oracle) <= 1e-6);
  }
}

TEST_CASE("solutions from different seeds and inits coincide") {
  const Lattice lat = testutil::lat1d(0.8, 3.0, 2.0, 0.25);
  const KernelWeights kw = build_weights(lat);
  const PinSpec pins = canonical_pins(lat);
  SplitRng rng(51);
  std::vector<std::vector<double>> inits;
  inits.emplace_back(lat.node_count, 0.0);
  for (int trial = 0; trial < 2; ++trial) {
    std::vector<double> v(lat.node_count);
    for (double& x : v) x = rng.uniform(-1.0, 1.0);
    inits.push_back(std::move(v));
  }
  SolveOptions opt;
  opt.tol = 1e-10;
  const UniquenessReport rep = verify_uniqueness(lat, kw, pins, inits, opt);
  CHECK(rep.max_gap <= 1e-7);
  CHECK(rep.iterations.size() == 3);
  CHECK_THROWS_AS(verify_uniqueness(lat, kw, pins, {inits[0]}, opt), ConfigError);
}

TEST_CASE("canonical extremal symmetry, bounds, and monotone energy") {
  const Lattice lat = testutil::lat2d(0.9, 4.0, 1.0, 0.25);  // m = 9, 81 nodes
  const KernelWeights kw = build_weights(lat);
  std::vector<double> trace;
  SolveOptions opt;
  opt.tol = 1e-9;
  opt.energy_trace = &trace;
  const ExtremalResult res = solve_extremal(lat, kw, canonical_pins(lat), opt);

  const SymmetryReport sym = verify_symmetries(res);
  CHECK(sym.antisym_defect <= 1e-7);
  CHECK(sym.axis_defect <= 1e-7);

  const BoundsReport bounds = verify_pointwise_bounds(res);
  CHECK(bounds.within_bounds);
  CHECK(bounds.strict_margin > 0.0);

  REQUIRE(trace.size() >= 2);
  // Monotone up to the line search's explicit roundoff allowance.
  for (std::size_t i = 1; i < trace.size(); ++i)
    CHECK(trace[i] <= trace[i - 1] + 1e-13 * (1.0 + trace[i - 1]));
  CHECK(trace.back() == doctest::Approx(std::pow(res.gagliardo, 4.0)).epsilon(1e-10));

  // Symmetry checks require the canonical normalization.
  ExtremalResult skew = res;
  skew.pins.a = 2.0;
  CHECK_THROWS_AS(verify_symmetries(skew), PreconditionError);
}

TEST_CASE("solver is equivariant under lattice rescaling") {
  const double s = 0.8, p = 3.0;
  const Lattice lat = testutil::lat1d(s, p, 2.0, 0.5);
  const KernelWeights kw = build_weights(lat);
  const ExtremalResult base = solve_extremal(lat, kw, canonical_pins(lat), 1e-11, 200000);

  const Lattice half = testutil::lat1d(s, p, 1.0, 0.25);
  const KernelWeights kwh = build_weights(half);
  const double f = std::pow(2.0, 1.0 / p - s);
  PinSpec pins;
  pins.x0 = *half.node_at(Point{0.5, 0.0});
  pins.y0 = *half.node_at(Point{-0.5, 0.0});
  pins.a = f;
  pins.b = -f;
  SolveOptions opt;
  opt.tol = 1e-11;
  opt.max_iter = 200000;
  const ExtremalResult scaled = solve_extremal(half, kwh, pins, opt);

  for (int i = 0; i < half.node_count; ++i) {
    const Point x = half.coord(i);
    const int src = *lat.node_at(Point{2.0 * x[0], 0.0});
    CHECK(scaled.u.values[i] == doctest::Approx(f * base.u.values[src]).epsilon(1e-6));
  }
  CHECK(estimate_sharp_constant(scaled) ==
        doctest::Approx(estimate_sharp_constant(base)).epsilon(1e-7));
}

TEST_CASE("stability inequality on random comparison functions") {
  SplitRng rng(52);
  for (double p : {1.5, 3.0}) {
    const Lattice lat = testutil::lat1d(0.8, p, 2.0, 0.5);
    const KernelWeights kw = build_weights(lat);
    const ExtremalResult res = solve_extremal(lat, kw, canonical_pins(lat), 1e-9, 200000);
    for (int trial = 0; trial < 10; ++trial) {
      const GridFunction v = testutil::random_function(lat, rng);
      const StabilityReport rep = verify_stability(res, v, kw);
      CHECK(rep.residual >= -1e-8);
      CHECK(rep.lhs <= rep.rhs * (1.0 + 1e-8));
      CHECK(rep.p_ge_2_branch == (p >= 2.0));
      CHECK(rep.matched_c > 0.0);
    }
    // v equal to the extremal itself saturates the inequality.
    const StabilityReport eq = verify_stability(res, res.u, kw);
    CHECK(eq.residual == doctest::Approx(0.0).epsilon(1e-9));
    CHECK_THROWS_AS(verify_stability(res, constant_function(lat, 0.3), kw), DegenerateError);
  }
}

TEST_CASE("free far field settles at the pin midpoint for mirror pins") {
  const Lattice lat = testutil::lat1d(0.8, 3.0, 2.0, 0.5);
  const KernelWeights kw = build_weights(lat);
  SolveOptions opt;
  opt.tol = 1e-10;
  opt.free_far_field = true;
  const ExtremalResult sym = solve_extremal(lat, kw, canonical_pins(lat), opt);
  CHECK(std::abs(sym.u.far_field) <= 1e-6);

  // Mirror pin nodes with asymmetric values: the optimum is still the
  // midpoint, because the shifted problem is antisymmetric.
  PinSpec pins = canonical_pins(lat);
  pins.a = 1.0;
  pins.b = 0.0;
  const ExtremalResult shifted = solve_extremal(lat, kw, pins, opt);
  CHECK(shifted.u.far_field == doctest::Approx(0.5).epsilon(1e-5));
  const double balance =
      detail::far_field_balance(kw, shifted.u.values, shifted.u.far_field);
  CHECK(std::abs(balance) / lat.h <= 1e-9);

  // Pins without mirror symmetry force the outer root-find to do real work;
  // the optimum must still zero the far-field stationarity measure.
  PinSpec off;
  off.x0 = *lat.node_at(Point{1.0, 0.0});
  off.y0 = *lat.node_at(Point{0.5, 0.0});
  const ExtremalResult asym = solve_extremal(lat, kw, off, opt);
  const double off_balance =
      detail::far_field_balance(kw, asym.u.values, asym.u.far_field);
  CHECK(std::abs(off_balance) / lat.h <= 1e-8);
  CHECK(asym.u.far_field > -1.0);
  CHECK(asym.u.far_field < 1.0);
}

TEST_CASE("solver input validation and non-convergence reporting") {
  const Lattice lat = testutil::lat1d(0.8, 3.0, 2.0, 0.5);
  const KernelWeights kw = build_weights(lat);
  const PinSpec pins = canonical_pins(lat);

  PinSpec same = pins;
  same.y0 = same.x0;
  CHECK_THROWS_AS(solve_extremal(lat, kw, same, 1e-8, 1000), ConfigError);
  PinSpec flat = pins;
  flat.b = flat.a;
  CHECK_THROWS_AS(solve_extremal(lat, kw, flat, 1e-8, 1000), ConfigError);
  CHECK_THROWS_AS(solve_extremal(lat, kw, pins, -1.0, 1000), ConfigError);

  SolveOptions bad_init;
  bad_init.init = std::vector<double>(3, 0.0);
  CHECK_THROWS_AS(solve_extremal(lat, kw, pins, bad_init), ConfigError);

  const KernelWeights other = build_weights(testutil::lat1d(0.8, 3.0, 2.0, 0.25));
  CHECK_THROWS_AS(solve_extremal(lat, other, pins, 1e-8, 1000), MismatchError);

  SolveOptions strict;
  strict.tol = 1e-13;
  strict.max_iter = 1;
  SplitRng rng(53);
  std::vector<double> init(lat.node_count);
  for (double& x : init) x = rng.uniform(-1.0, 1.0);
  strict.init = init;
  try {
    solve_extremal(lat, kw, pins, strict);
    FAIL("expected NonConvergenceError");
  } catch (const NonConvergenceError& e) {
    CHECK(e.iterations == 1);
    CHECK(e.grad_norm > 1e-13);
  }
}
