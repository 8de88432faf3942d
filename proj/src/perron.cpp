#include "morrey/perron.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace morrey {

namespace {

void validate_data(const Lattice& lat, const ComplementData& data) {
  const std::size_t n = static_cast<std::size_t>(lat.node_count);
  if (data.domain_mask.size() != n || data.g.size() != n)
    throw MismatchError("complement data sized for a different lattice");
  int free_count = 0;
  for (int i = 0; i < lat.node_count; ++i) {
    if (data.domain_mask[i]) {
      ++free_count;
    } else if (!std::isfinite(data.g[i])) {
      throw ConfigError("complement value at node " + std::to_string(i) + " is not finite");
    }
  }
  if (!std::isfinite(data.far_field)) throw ConfigError("far-field value is not finite");
  if (free_count == 0) throw ConfigError("complement data leaves no free node");
  if (free_count == lat.node_count) throw ConfigError("complement data constrains no node");
}

/// Root of the strictly increasing balance t -> 2 sum_j w_ij J_p(t - u_j)
/// + far_i J_p(t - far), found by bisection. vals[i] is scratch during the
/// search and holds the root afterwards.
void relax_node(const KernelWeights& kw, std::vector<double>& vals, double far_field, int i,
                double lo, double hi, Isa isa) {
  const auto balance = [&](double t) {
    vals[i] = t;
    return pair_gradient_at(kw, vals, far_field, i, isa);
  };
  for (int it = 0; it < 100 && hi - lo > 1e-15 * (1.0 + std::max(std::abs(lo), std::abs(hi)));
       ++it) {
    const double mid = 0.5 * (lo + hi);
    const double b = balance(mid);
    if (b > 0.0) {
      hi = mid;
    } else if (b < 0.0) {
      lo = mid;
    } else {
      // Exact root; returning here also keeps the update odd-symmetric
      // (a tie broken toward either side would not negate cleanly).
      vals[i] = mid;
      return;
    }
  }
  vals[i] = 0.5 * (lo + hi);
}

}  // namespace

GridFunction solve_dirichlet(const Lattice& lat, const KernelWeights& kw,
                             const ComplementData& data, double tol, long max_iter,
                             SweepMode mode, const std::vector<double>* init) {
  if (!(lat == kw.lattice)) throw MismatchError("weights built for a different lattice");
  validate_data(lat, data);
  if (!(tol > 0.0)) throw ConfigError("solver tolerance must be positive");
  const int N = lat.node_count;
  const double hn = std::pow(lat.h, lat.params.n);
  const Isa isa = active_isa();

  std::vector<int> free_nodes;
  for (int i = 0; i < N; ++i)
    if (data.domain_mask[i]) free_nodes.push_back(i);

  // The solution lives between the extremes of the complement data.
  double glo = data.far_field, ghi = data.far_field;
  for (int i = 0; i < N; ++i) {
    if (data.domain_mask[i]) continue;
    glo = std::min(glo, data.g[i]);
    ghi = std::max(ghi, data.g[i]);
  }

  std::vector<double> vals(N);
  for (int i = 0; i < N; ++i) vals[i] = data.domain_mask[i] ? 0.5 * (glo + ghi) : data.g[i];
  if (init) {
    if (static_cast<int>(init->size()) != N) throw ConfigError("initial guess has wrong length");
    for (int i : free_nodes) vals[i] = (*init)[i];
  }

  // Descent pass to place the sweeps at (or very near) the solution: the
  // relaxation below owns the convergence guarantee, but pointwise bisection
  // closes distance far too slowly to cross orders of magnitude on its own.
  try {
    detail::minimize_masked_energy(kw, vals, free_nodes, data.far_field, tol, 20000, true,
                                   nullptr);
  } catch (const NonConvergenceError&) {
    // Best-effort start.
  }

  std::vector<double> next;
  for (long sweep = 0; sweep < max_iter; ++sweep) {
    // Bracket from the current iterate (maximum principle keeps it valid).
    double lo = data.far_field, hi = data.far_field;
    for (int i = 0; i < N; ++i) {
      lo = std::min(lo, vals[i]);
      hi = std::max(hi, vals[i]);
    }

    if (mode == SweepMode::gauss_seidel) {
      for (int i : free_nodes) {
        // Skip nodes already in balance; their turn comes when neighbors move.
        if (std::abs(pair_gradient_at(kw, vals, data.far_field, i, isa)) / hn <= 0.01 * tol)
          continue;
        relax_node(kw, vals, data.far_field, i, lo, hi, isa);
      }
    } else {
      next = vals;
      for (int i : free_nodes) {
        const double keep = vals[i];
        if (std::abs(pair_gradient_at(kw, vals, data.far_field, i, isa)) / hn > 0.01 * tol) {
          relax_node(kw, vals, data.far_field, i, lo, hi, isa);
          next[i] = vals[i];
        }
        vals[i] = keep;
      }
      vals.swap(next);
    }

    double residual = 0.0;
    for (int i : free_nodes)
      residual = std::max(residual,
                          std::abs(pair_gradient_at(kw, vals, data.far_field, i, isa)) / hn);
    if (residual <= tol) {
      GridFunction u;
      u.lattice = lat;
      u.values = std::move(vals);
      u.far_field = data.far_field;
      return u;
    }
  }

  double residual = 0.0;
  for (int i : free_nodes)
    residual =
        std::max(residual, std::abs(pair_gradient_at(kw, vals, data.far_field, i, isa)) / hn);
  throw NonConvergenceError("relaxation exceeded max sweeps (residual " +
                                std::to_string(residual) + ")",
                            max_iter, residual);
}

BarrierBoundReport verify_barrier_bound(const Lattice& lat, const KernelWeights& kw,
                                        const ComplementData& data, const Point& x0,
                                        double r0, double r1, double M, double tol,
                                        long max_iter, const GridFunction* precomputed) {
  if (!(0.0 < r1 && r1 < r0)) throw PreconditionError("radii must satisfy 0 < r1 < r0");
  if (!(M > 0.0)) throw PreconditionError("data bound M must be positive");
  validate_data(lat, data);

  // Hypotheses: data vanishes on B(x0, r0), is bounded by M everywhere.
  for (int i = 0; i < lat.node_count; ++i) {
    if (data.domain_mask[i]) continue;
    const double d = point_dist(lat.coord(i), x0, lat.params.n);
    if (d <= r0 && data.g[i] != 0.0)
      throw PreconditionError("complement data must vanish on B(x0, r0)");
    if (std::abs(data.g[i]) > M)
      throw PreconditionError("complement data exceeds the bound M");
  }
  if (std::abs(data.far_field) > M)
    throw PreconditionError("far-field value exceeds the bound M");
  const double hull = lat.L + lat.h / 2.0;
  double max_axis = 0.0;
  for (int k = 0; k < lat.params.n; ++k) max_axis = std::max(max_axis, std::abs(x0[k]));
  if (max_axis + r0 > hull && data.far_field != 0.0)
    throw PreconditionError("B(x0, r0) leaves the box but the far field is nonzero");

  GridFunction u;
  if (precomputed) {
    if (!(precomputed->lattice == lat))
      throw MismatchError("precomputed solution lives on a different lattice");
    u = *precomputed;
  } else {
    u = solve_dirichlet(lat, kw, data, tol, max_iter);
  }

  std::vector<int> near_boundary;
  for (int i = 0; i < lat.node_count; ++i)
    if (!data.domain_mask[i] && point_dist(lat.coord(i), x0, lat.params.n) <= r1)
      near_boundary.push_back(i);
  if (near_boundary.empty())
    throw EmptyRegionError("no constrained node within r1 of the barrier center");

  BarrierBoundReport rep;
  rep.beta = (lat.params.s * lat.params.p - lat.params.n) / (lat.params.p - 1.0);
  rep.bound_constant = M * std::pow(r0 - r1, -rep.beta);
  for (int y = 0; y < lat.node_count; ++y) {
    if (!data.domain_mask[y]) continue;
    const Point py = lat.coord(y);
    double dmin = std::numeric_limits<double>::infinity();
    int best_x = -1;
    for (int x : near_boundary) {
      const double d = point_dist(lat.coord(x), py, lat.params.n);
      if (d < dmin) {
        dmin = d;
        best_x = x;
      }
    }
    const double ratio = std::abs(u.values[y]) / (rep.bound_constant * std::pow(dmin, rep.beta));
    if (ratio > rep.worst_ratio) {
      rep.worst_ratio = ratio;
      rep.worst_y = y;
      rep.worst_x = best_x;
    }
  }
  return rep;
}

ComplementData make_slit_data(const Lattice& lat) {
  if (lat.params.n != 2) throw GeometryError("slit data is two-dimensional");
  ComplementData data;
  data.domain_mask.assign(lat.node_count, 1);
  data.g.assign(lat.node_count, 0.0);
  data.far_field = 1.0;
  const Point origin{0.0, 0.0};
  for (int i = 0; i < lat.node_count; ++i) {
    const Point x = lat.coord(i);
    if (x[1] == 0.0 && x[0] >= 0.0) {
      data.domain_mask[i] = 0;  // slit wins on overlaps
      data.g[i] = 0.0;
    } else if (point_dist(x, origin, 2) >= 1.0) {
      data.domain_mask[i] = 0;
      data.g[i] = 1.0;
    }
  }
  return data;
}

SlitReport run_slit_experiment(const FracParams& params, double L, double h, double tol,
                               long max_iter) {
  if (params.n != 2) throw GeometryError("the slit experiment is two-dimensional");
  // Ring diagnostics sample dyadic radii 4h, 8h, ... up to 1/2; a coarser mesh
  // has no rings at all, so reject it before doing any work.
  if (4.0 * h > 0.5) throw GeometryError("slit ring diagnostics need h <= 1/8");
  const Lattice lat = build_lattice(params, L, h);
  const KernelWeights kw = build_weights(lat);
  const ComplementData data = make_slit_data(lat);

  SlitReport rep;
  rep.u = solve_dirichlet(lat, kw, data, tol, max_iter);

  const Point origin{0.0, 0.0};
  for (double rho = 4.0 * h; rho <= 0.5; rho *= 2.0) {
    double mx = 0.0;
    for (int i : nodes_in_annulus(lat, origin, rho - h / 2.0, rho + h / 2.0))
      mx = std::max(mx, std::abs(rep.u.values[i]));
    rep.radii.push_back(rho);
    rep.ring_max.push_back(mx);
  }

  for (int i = 0; i < lat.node_count; ++i) {
    if (!data.domain_mask[i]) continue;
    const Point x = lat.coord(i);
    const Point x2{2.0 * x[0], 2.0 * x[1]};
    if (point_dist(x2, origin, 2) >= 1.0) continue;
    const auto j = lat.node_at(x2);
    if (!j || !data.domain_mask[*j]) continue;
    rep.radial_violation =
        std::max(rep.radial_violation, rep.u.values[i] - rep.u.values[*j]);
  }

  ComplementData negated = data;
  for (int i = 0; i < lat.node_count; ++i)
    if (!negated.domain_mask[i]) negated.g[i] = -negated.g[i];
  negated.far_field = -negated.far_field;
  const GridFunction neg = solve_dirichlet(lat, kw, negated, tol, max_iter);
  for (int i = 0; i < lat.node_count; ++i)
    rep.negation_gap = std::max(rep.negation_gap,
                                std::abs(rep.u.values[i] + neg.values[i]));
  return rep;
}

DecayReport run_decay_experiment(const ExtremalResult& res, const std::vector<double>& radii,
                                 const KernelWeights& kw) {
  const Lattice& lat = res.u.lattice;
  if (!(lat == kw.lattice)) throw MismatchError("weights built for a different lattice");
  const PinSpec canon = canonical_pins(lat);
  const bool canonical_nodes =
      (res.pins.x0 == canon.x0 && res.pins.y0 == canon.y0) ||
      (res.pins.x0 == canon.y0 && res.pins.y0 == canon.x0);
  if (!canonical_nodes)
    throw PreconditionError("decay experiment requires pins at the +-e_n nodes");

  const double mid = (res.pins.a + res.pins.b) / 2.0;
  const double a_at_top = res.pins.x0 == canon.x0 ? res.pins.a : res.pins.b;
  const double upper_sign = a_at_top > mid ? 1.0 : -1.0;
  const Point origin{0.0, 0.0};
  const int axis = lat.params.n - 1;

  DecayReport rep;
  for (double r : radii) {
    double dev = 0.0;
    bool any = false;
    for (int i = 0; i < lat.node_count; ++i) {
      if (point_dist(lat.coord(i), origin, lat.params.n) < r) continue;
      any = true;
      dev = std::max(dev, std::abs(res.u.values[i] - mid));
    }
    if (!any) throw EmptyRegionError("no node at or beyond radius " + std::to_string(r));
    rep.radii.push_back(r);
    rep.max_dev.push_back(dev);
  }

  for (int i = 0; i < lat.node_count; ++i) {
    const double xn = lat.coord(i)[axis];
    if (xn == 0.0) continue;
    const double want = xn > 0.0 ? upper_sign : -upper_sign;
    rep.sign_defect = std::max(rep.sign_defect, -want * (res.u.values[i] - mid));
  }
  rep.sign_defect = std::max(rep.sign_defect, 0.0);

  const double hn = std::pow(lat.h, lat.params.n);
  rep.far_field_balance =
      std::abs(detail::far_field_balance(kw, res.u.values, res.u.far_field)) / hn;
  return rep;
}

}  // namespace morrey
