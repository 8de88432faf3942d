#include "morrey/operator.hpp"

#include <cmath>

namespace morrey {

namespace {

void fill_summaries(Residual& r) {
  double mx = 0.0, sum = 0.0;
  for (double v : r.values) {
    mx = std::max(mx, std::abs(v));
    sum += std::abs(v);
  }
  r.max_abs = mx;
  r.mean_abs = r.values.empty() ? 0.0 : sum / static_cast<double>(r.values.size());
}

}  // namespace

double frac_p_laplacian(const GridFunction& u, const KernelWeights& w, int node) {
  if (!(u.lattice == w.lattice)) throw MismatchError("weights built for a different lattice");
  if (node < 0 || node >= u.lattice.node_count) throw GeometryError("node index out of range");
  const double hn = std::pow(u.lattice.h, u.lattice.params.n);
  return pair_gradient_at(w, u.values, u.far_field, node, active_isa()) / hn;
}

double barrier_value(const Point& x, const FracParams& params) {
  const double r = point_dist(x, Point{0.0, 0.0}, params.n);
  if (r == 0.0) return 0.0;
  const double beta = (params.s * params.p - params.n) / (params.p - 1.0);
  return std::pow(r, beta);
}

Residual verify_barrier_harmonicity(const FracParams& params, const Lattice& lat,
                                    const std::vector<int>& test_nodes) {
  if (params.n != lat.params.n || params.s != lat.params.s || params.p != lat.params.p)
    throw MismatchError("lattice was built for different fractional parameters");
  if (test_nodes.empty()) throw EmptyRegionError("no barrier test nodes given");
  const Point origin{0.0, 0.0};
  for (int k : test_nodes) {
    if (k < 0 || k >= lat.node_count) throw GeometryError("test node index out of range");
    if (point_dist(lat.coord(k), origin, params.n) < 2.0 * lat.h)
      throw GeometryError("barrier test node within 2h of the origin");
  }

  GridFunction g;
  g.lattice = lat;
  g.values.resize(lat.node_count);
  for (int i = 0; i < lat.node_count; ++i) g.values[i] = barrier_value(lat.coord(i), params);
  Point ref{0.0, 0.0};
  ref[0] = lat.L + 1.0;
  g.far_field = barrier_value(ref, params);

  const KernelWeights kw = build_weights(lat);
  Residual r;
  r.nodes = test_nodes;
  r.values.reserve(test_nodes.size());
  for (int k : test_nodes) r.values.push_back(frac_p_laplacian(g, kw, k));
  fill_summaries(r);
  return r;
}

Residual euler_lagrange_residual(const ExtremalResult& res, const KernelWeights& w) {
  const Lattice& lat = res.u.lattice;
  if (!(lat == w.lattice)) throw MismatchError("weights built for a different lattice");
  Residual r;
  r.nodes.reserve(lat.node_count - 2);
  r.values.reserve(lat.node_count - 2);
  for (int k = 0; k < lat.node_count; ++k) {
    if (k == res.pins.x0 || k == res.pins.y0) continue;
    r.nodes.push_back(k);
    r.values.push_back(frac_p_laplacian(res.u, w, k));
  }
  fill_summaries(r);

  const double hn = std::pow(lat.h, lat.params.n);
  r.pin_masses = {hn * frac_p_laplacian(res.u, w, res.pins.x0),
                  hn * frac_p_laplacian(res.u, w, res.pins.y0)};
  const double D = point_dist(lat.coord(res.pins.x0), lat.coord(res.pins.y0), lat.params.n);
  const double spn = lat.params.s * lat.params.p - lat.params.n;
  const double cp = std::pow(res.c_star_hat, lat.params.p);
  if (cp > 0.0)
    r.expected_pin_mass = j_p(res.pins.a - res.pins.b, lat.params.p) / (std::pow(D, spn) * cp);
  return r;
}

}  // namespace morrey
