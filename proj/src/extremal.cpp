#include "morrey/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace morrey {

namespace detail {

MinimizeStats minimize_masked_energy(const KernelWeights& kw, std::vector<double>& vals,
                                     const std::vector<int>& free_nodes, double far_field,
                                     double tol, long max_iter, bool preconditioned,
                                     std::vector<double>* energy_trace) {
  const Lattice& lat = kw.lattice;
  const int F = static_cast<int>(free_nodes.size());
  const double hn = std::pow(lat.h, lat.params.n);
  const Isa isa = active_isa();

  // Diagonal of the scaled-energy Hessian at the current iterate,
  //   diag_k = (p-1) [2 sum_j w_kj |u_k-u_j|^{p-2} + far_k |u_k-g|^{p-2}],
  // which for p = 2 is the constant 2 sum_j w_kj + far_k. Away from p = 2 a
  // fixed diagonal misses the |.|^{p-2} curvature scale entirely: for p < 2
  // the energy has curvature spikes where values coincide (notably u_k = g on
  // the symmetry axis) and for p > 2 it flattens there, so the diagonal is
  // refreshed from the current values every iteration.
  const double p = lat.params.p;
  const PowKind kind = pow_kind_for(p);
  std::vector<double> rowscale(F, 1.0);
  for (int f = 0; f < F; ++f) {
    const int k = free_nodes[f];
    double rowsum = 0.0;
    for_each_row_block(kw, k, [&](const double* w, int, int len) {
      for (int t = 0; t < len; ++t) rowsum += w[t];
    });
    rowscale[f] = 2.0 * rowsum + kw.far[k];
  }

  std::vector<double> diag(F, 1.0);
  if (preconditioned) diag = rowscale;
  const bool adaptive = preconditioned && p != 2.0;

  const auto curvature_pow = [&](double d, double floor_t) {
    const double a = std::max(std::abs(d), floor_t);
    switch (kind) {
      case PowKind::p15: return 1.0 / std::sqrt(a);
      case PowKind::p3: return a;
      case PowKind::p4: return a * a;
      default: return std::pow(a, p - 2.0);
    }
  };

  const auto refresh_diag = [&]() {
    if (!adaptive) return;
    for (int f = 0; f < F; ++f) {
      const int k = free_nodes[f];
      const double uk = vals[k];
      // For p < 2 the curvature at an offset below this scale no longer
      // affects whether the gradient criterion can be met, so clamping there
      // keeps the diagonal finite without flattening any step that matters.
      const double floor_t =
          p < 2.0 ? std::pow(0.01 * tol * hn / rowscale[f], 1.0 / (p - 1.0)) : 0.0;
      double acc = 0.0;
      for_each_row_block(kw, k, [&](const double* w, int ustart, int len) {
        for (int t = 0; t < len; ++t)
          acc += w[t] * curvature_pow(uk - vals[ustart + t], floor_t);
      });
      acc = 2.0 * acc + kw.far[k] * curvature_pow(uk - far_field, floor_t);
      // The additive term keeps directions bounded where p > 2 curvature
      // degenerates (locally constant values); elsewhere it is negligible.
      diag[f] = (p - 1.0) * acc + 1e-9 * rowscale[f];
    }
  };
  refresh_diag();

  const auto grad_at = [&](std::vector<double>& grad) {
    double opnorm = 0.0;
    for (int f = 0; f < F; ++f) {
      grad[f] = pair_gradient_at(kw, vals, far_field, free_nodes[f], isa);
      opnorm = std::max(opnorm, std::abs(grad[f]) / hn);
    }
    return opnorm;
  };

  std::vector<double> grad(F), dir(F), prev_vals_free(F), prev_grad(F), trial(vals);
  double energy = pair_energy_total(kw, vals, far_field, isa);
  if (energy_trace) energy_trace->push_back(energy);
  double opnorm = grad_at(grad);
  MinimizeStats stats;
  bool have_prev = false;

  while (opnorm > tol) {
    if (stats.iterations >= max_iter) {
      stats.final_grad_norm = opnorm;
      throw NonConvergenceError("energy minimization exceeded max_iter (grad norm " +
                                    std::to_string(opnorm) + ")",
                                stats.iterations, opnorm);
    }
    ++stats.iterations;

    double gd = 0.0;  // directional derivative along dir, up to the 1/p scale
    for (int f = 0; f < F; ++f) {
      dir[f] = -grad[f] / diag[f];
      gd += grad[f] * dir[f];
    }

    // Barzilai-Borwein step in the diag metric, clamped; 1.0 on the first pass.
    double step = 1.0;
    if (have_prev) {
      double sy = 0.0, sds = 0.0;
      for (int f = 0; f < F; ++f) {
        const double s = vals[free_nodes[f]] - prev_vals_free[f];
        sy += s * (grad[f] - prev_grad[f]);
        sds += s * diag[f] * s;
      }
      if (sy > 0.0 && std::isfinite(sds / sy)) step = std::clamp(sds / sy, 1e-14, 1e14);
    }
    for (int f = 0; f < F; ++f) {
      prev_vals_free[f] = vals[free_nodes[f]];
      prev_grad[f] = grad[f];
    }

    // Armijo backtracking with an explicit roundoff allowance: near the
    // minimizer the true decrease per step drops below what the energy sum
    // can certify long before the gradient criterion is met, so steps inside
    // the noise band are accepted and convergence is judged by the gradient
    // alone (which stays accurately computable at these scales).
    const double noise =
        64.0 * std::numeric_limits<double>::epsilon() * (std::abs(energy) + 1.0);
    double new_energy = energy;
    for (int bt = 0; bt < 80; ++bt) {
      for (int f = 0; f < F; ++f) trial[free_nodes[f]] = prev_vals_free[f] + step * dir[f];
      new_energy = pair_energy_total(kw, trial, far_field, isa);
      if (new_energy <= energy + 1e-4 * step * gd + noise) break;
      step *= 0.5;
    }
    if (new_energy > energy + noise) {
      // Even the shortest step raises the energy beyond roundoff.
      stats.final_grad_norm = opnorm;
      throw NonConvergenceError("energy minimization stalled at machine precision (grad norm " +
                                    std::to_string(opnorm) + ")",
                                stats.iterations, opnorm);
    }
    bool moved = false;
    for (int f = 0; f < F; ++f) {
      moved = moved || trial[free_nodes[f]] != prev_vals_free[f];
      vals[free_nodes[f]] = trial[free_nodes[f]];
    }
    if (!moved) {
      // The step underflowed: no representable movement is left.
      stats.final_grad_norm = opnorm;
      throw NonConvergenceError("energy minimization stalled at machine precision (grad norm " +
                                    std::to_string(opnorm) + ")",
                                stats.iterations, opnorm);
    }
    energy = new_energy;
    if (energy_trace) energy_trace->push_back(energy);
    have_prev = true;
    refresh_diag();
    opnorm = grad_at(grad);
  }

  stats.final_grad_norm = opnorm;
  return stats;
}

double far_field_balance(const KernelWeights& kw, const std::vector<double>& vals, double g) {
  double r = 0.0;
  const double p = kw.lattice.params.p;
  for (int i = 0; i < kw.lattice.node_count; ++i) r += kw.far[i] * j_p(vals[i] - g, p);
  return r;
}

}  // namespace detail

namespace {

using detail::far_field_balance;

void validate_pins(const Lattice& lat, const PinSpec& pins) {
  if (pins.x0 == pins.y0) throw ConfigError("pin nodes must be distinct");
  if (pins.a == pins.b) throw ConfigError("pin values must be distinct");
  if (pins.x0 < 0 || pins.x0 >= lat.node_count || pins.y0 < 0 || pins.y0 >= lat.node_count)
    throw ConfigError("pin node index out of range");
}

ExtremalResult solve_with_free_far_field(const Lattice& lat, const KernelWeights& kw,
                                         const PinSpec& pins, const SolveOptions& opt) {
  const double hn = std::pow(lat.h, lat.params.n);
  SolveOptions inner = opt;
  inner.free_far_field = false;

  const auto solve_at = [&](double g, ExtremalResult* warm) {
    inner.far_field = g;
    if (warm) inner.init = warm->u.values;
    return solve_extremal(lat, kw, pins, inner);
  };

  // The balance r(g) = -(1/p) dE/dg is strictly decreasing by convexity,
  // positive far below the pins and negative far above; bisect its root.
  ExtremalResult res = solve_at(opt.far_field.value_or((pins.a + pins.b) / 2.0), nullptr);
  double r_mid = far_field_balance(kw, res.u.values, res.u.far_field);
  if (std::abs(r_mid) / hn <= opt.tol) return res;
  const double span = std::abs(pins.a - pins.b);
  double lo, hi;
  bool bracketed = false;
  if (r_mid > 0.0) {
    lo = res.u.far_field;
    hi = std::max(pins.a, pins.b);
    for (double step = span; step < 1e18; step *= 2.0) {
      res = solve_at(hi, &res);
      if (far_field_balance(kw, res.u.values, hi) <= 0.0) {
        bracketed = true;
        break;
      }
      lo = hi;
      hi += step;
    }
  } else {
    hi = res.u.far_field;
    lo = std::min(pins.a, pins.b);
    for (double step = span; step < 1e18; step *= 2.0) {
      res = solve_at(lo, &res);
      if (far_field_balance(kw, res.u.values, lo) >= 0.0) {
        bracketed = true;
        break;
      }
      hi = lo;
      lo -= step;
    }
  }
  if (!bracketed)
    throw NonConvergenceError("far-field sensitivity search failed to bracket the optimum", 0,
                              std::abs(r_mid) / hn);
  for (int it = 0; it < 200; ++it) {
    const double g = 0.5 * (lo + hi);
    res = solve_at(g, &res);
    const double r = far_field_balance(kw, res.u.values, g);
    if (std::abs(r) / hn <= opt.tol || hi - lo < 1e-15 * (1.0 + std::abs(g))) return res;
    (r > 0.0 ? lo : hi) = g;
  }
  throw NonConvergenceError("far-field sensitivity search failed to localize the optimum", 200,
                            (hi - lo) / hn);
}

}  // namespace

PinSpec canonical_pins(const Lattice& lat) {
  Point top{0.0, 0.0}, bottom{0.0, 0.0};
  top[lat.params.n - 1] = 1.0;
  bottom[lat.params.n - 1] = -1.0;
  const auto x0 = lat.node_at(top);
  const auto y0 = lat.node_at(bottom);
  if (!x0 || !y0) throw GeometryError("pin points +-e_n are not lattice nodes");
  return PinSpec{*x0, *y0, 1.0, -1.0};
}

ExtremalResult solve_extremal(const Lattice& lat, const KernelWeights& kw,
                              const PinSpec& pins, const SolveOptions& opt) {
  if (!(lat == kw.lattice)) throw MismatchError("weights built for a different lattice");
  validate_pins(lat, pins);
  if (!(opt.tol > 0.0)) throw ConfigError("solver tolerance must be positive");
  if (opt.free_far_field) return solve_with_free_far_field(lat, kw, pins, opt);

  const int N = lat.node_count;
  const double g = opt.far_field.value_or((pins.a + pins.b) / 2.0);

  std::vector<int> free_nodes;
  free_nodes.reserve(N - 2);
  for (int i = 0; i < N; ++i)
    if (i != pins.x0 && i != pins.y0) free_nodes.push_back(i);

  std::vector<double> vals;
  if (opt.init) {
    if (static_cast<int>(opt.init->size()) != N)
      throw ConfigError("initial guess has wrong length");
    vals = *opt.init;
  } else {
    vals.assign(N, g);
  }
  vals[pins.x0] = pins.a;
  vals[pins.y0] = pins.b;

  const detail::MinimizeStats stats = detail::minimize_masked_energy(
      kw, vals, free_nodes, g, opt.tol, opt.max_iter, opt.preconditioned, opt.energy_trace);

  ExtremalResult res;
  res.u.lattice = lat;
  res.u.values = std::move(vals);
  res.u.far_field = g;
  res.pins = pins;
  res.gagliardo = gagliardo_seminorm(res.u, kw);
  const HolderResult h = holder_seminorm(res.u);
  res.holder = h.value;
  res.c_star_hat = res.gagliardo > 0.0 ? res.holder / res.gagliardo : 0.0;
  res.iterations = stats.iterations;
  res.final_grad_norm = stats.final_grad_norm;
  res.tol = opt.tol;
  return res;
}

ExtremalResult solve_extremal(const Lattice& lat, const KernelWeights& w,
                              const PinSpec& pins, double tol, long max_iter) {
  SolveOptions opt;
  opt.tol = tol;
  opt.max_iter = max_iter;
  return solve_extremal(lat, w, pins, opt);
}

double estimate_sharp_constant(const ExtremalResult& res) {
  if (res.gagliardo == 0.0) throw DegenerateError("extremal has zero Gagliardo seminorm");
  return res.holder / res.gagliardo;
}

UniquenessReport verify_uniqueness(const Lattice& lat, const KernelWeights& w,
                                   const PinSpec& pins,
                                   const std::vector<std::vector<double>>& inits,
                                   const SolveOptions& opt) {
  if (inits.size() < 2) throw ConfigError("uniqueness check needs at least two initial guesses");
  UniquenessReport rep;
  std::vector<std::vector<double>> sols;
  for (const auto& init : inits) {
    SolveOptions o = opt;
    o.init = init;
    ExtremalResult r = solve_extremal(lat, w, pins, o);
    rep.iterations.push_back(r.iterations);
    sols.push_back(std::move(r.u.values));
  }
  for (std::size_t a = 0; a < sols.size(); ++a)
    for (std::size_t b = a + 1; b < sols.size(); ++b)
      for (int i = 0; i < lat.node_count; ++i)
        rep.max_gap = std::max(rep.max_gap, std::abs(sols[a][i] - sols[b][i]));
  return rep;
}

SymmetryReport verify_symmetries(const ExtremalResult& res) {
  const Lattice& lat = res.u.lattice;
  const PinSpec canon = canonical_pins(lat);
  const bool canonical_nodes =
      (res.pins.x0 == canon.x0 && res.pins.y0 == canon.y0) ||
      (res.pins.x0 == canon.y0 && res.pins.y0 == canon.x0);
  if (!canonical_nodes || res.pins.a != -res.pins.b)
    throw PreconditionError("symmetry check requires pins at +-e_n with opposite values");

  SymmetryReport rep;
  const int m = lat.m;
  const int axis = lat.params.n - 1;  // the pin axis
  for (int i = 0; i < lat.node_count; ++i) {
    auto ai = lat.axis_index(i);
    ai[axis] = m - 1 - ai[axis];
    rep.antisym_defect = std::max(
        rep.antisym_defect, std::abs(res.u.values[i] + res.u.values[lat.linear_index(ai)]));
  }
  if (lat.params.n == 2) {
    for (int i = 0; i < lat.node_count; ++i) {
      auto ai = lat.axis_index(i);
      ai[0] = m - 1 - ai[0];  // reflection across the pin axis
      rep.axis_defect = std::max(
          rep.axis_defect, std::abs(res.u.values[i] - res.u.values[lat.linear_index(ai)]));
    }
  }
  return rep;
}

BoundsReport verify_pointwise_bounds(const ExtremalResult& res) {
  const Lattice& lat = res.u.lattice;
  const double a = std::max(res.pins.a, res.pins.b);
  const double b = std::min(res.pins.a, res.pins.b);
  const double delta = 10.0 * res.tol;
  BoundsReport rep;
  rep.within_bounds = true;
  rep.strict_margin = a - b;
  const Point px = lat.coord(res.pins.x0);
  const Point py = lat.coord(res.pins.y0);
  for (int i = 0; i < lat.node_count; ++i) {
    const double ui = res.u.values[i];
    if (ui < b - delta || ui > a + delta) rep.within_bounds = false;
    if (i == res.pins.x0 || i == res.pins.y0) continue;
    const Point xi = lat.coord(i);
    if (point_dist(xi, px, lat.params.n) < 2.0 * lat.h ||
        point_dist(xi, py, lat.params.n) < 2.0 * lat.h)
      continue;
    rep.strict_margin = std::min(rep.strict_margin, std::min(a - ui, ui - b));
  }
  return rep;
}

StabilityReport verify_stability(const ExtremalResult& res, const GridFunction& v,
                                 const KernelWeights& kw) {
  const Lattice& lat = kw.lattice;
  if (!(v.lattice == lat)) throw MismatchError("v lives on a different lattice");
  const double p = lat.params.p;

  const double vW = gagliardo_seminorm(v, kw);
  if (vW == 0.0) throw DegenerateError("stability check needs a non-constant v");
  const HolderResult vh = holder_seminorm(v);
  const double va = v.values[vh.i];
  const double vb = v.values[vh.j];
  if (va == vb)
    throw UnmappablePairError("v's Hölder argpair carries equal values and cannot be pinned");

  // The matched extremal: pinned to v at v's argpair, sharing v's far field.
  const bool reuse = ((res.pins.x0 == vh.i && res.pins.y0 == vh.j && res.pins.a == va &&
                       res.pins.b == vb) ||
                      (res.pins.x0 == vh.j && res.pins.y0 == vh.i && res.pins.a == vb &&
                       res.pins.b == va)) &&
                     res.u.far_field == v.far_field && res.u.lattice == lat;
  ExtremalResult matched;
  if (reuse) {
    matched = res;
  } else {
    SolveOptions opt;
    opt.tol = res.tol > 0.0 ? res.tol : 1e-8;
    opt.max_iter = 200000;
    opt.far_field = v.far_field;
    matched = solve_extremal(lat, kw, PinSpec{vh.i, vh.j, va, vb}, opt);
  }

  StabilityReport rep;
  rep.matched_c = estimate_sharp_constant(matched);
  GridFunction diff;
  diff.lattice = lat;
  diff.far_field = matched.u.far_field - v.far_field;  // zero by construction
  diff.values.resize(lat.node_count);
  for (int i = 0; i < lat.node_count; ++i) diff.values[i] = matched.u.values[i] - v.values[i];
  const double dW = gagliardo_seminorm(diff, kw);

  const double C = rep.matched_c;
  rep.p_ge_2_branch = p >= 2.0;
  const double e = rep.p_ge_2_branch ? p : p / (p - 1.0);
  rep.lhs = std::pow(C / 2.0 * dW, e) + std::pow(vh.value, e);
  rep.rhs = std::pow(C * vW, e);
  rep.residual = (rep.rhs - rep.lhs) / rep.rhs;
  return rep;
}

}  // namespace morrey
