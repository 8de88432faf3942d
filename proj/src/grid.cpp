#include "morrey/grid.hpp"

#include <cmath>
#include <string>

namespace morrey {

namespace {

bool near_integer(double x, double tol = 1e-9) {
  return std::abs(x - std::round(x)) <= tol * std::max(1.0, std::abs(x));
}

}  // namespace

FracParams make_frac_params(int n, double s, double p) {
  if (n != 1 && n != 2)
    throw ConfigError("dimension n must be 1 or 2, got " + std::to_string(n));
  if (!(s > 0.0 && s < 1.0))
    throw ConfigError("fractional order s must lie in (0,1), got " + std::to_string(s));
  if (!(p > 1.0))
    throw ConfigError("exponent p must exceed 1, got " + std::to_string(p));
  if (!(s * p > n))
    throw RegimeError("parameters outside the Morrey regime: s*p = " + std::to_string(s * p) +
                      " <= n = " + std::to_string(n));
  FracParams fp;
  fp.n = n;
  fp.s = s;
  fp.p = p;
  fp.alpha = s - n / p;
  return fp;
}

Lattice build_lattice(const FracParams& params, double L, double h) {
  // Re-validate so a hand-built FracParams cannot smuggle in a bad regime.
  const FracParams fp = make_frac_params(params.n, params.s, params.p);
  if (!(h > 0.0)) throw GeometryError("spacing h must be positive");
  if (!(L >= 1.0)) throw GeometryError("half-extent L must be at least 1");
  if (!near_integer(1.0 / h))
    throw GeometryError("h must divide 1 so the pin nodes at distance 1 exist");
  if (!near_integer(2.0 * L / h))
    throw GeometryError("h must divide 2L");
  Lattice lat;
  lat.params = fp;
  lat.L = L;
  lat.h = h;
  lat.m = static_cast<int>(std::llround(2.0 * L / h)) + 1;
  lat.node_count = fp.n == 1 ? lat.m : lat.m * lat.m;
  return lat;
}

std::vector<int> nodes_in_annulus(const Lattice& lat, const Point& center,
                                  double r_lo, double r_hi) {
  std::vector<int> out;
  for (int i = 0; i < lat.node_count; ++i) {
    const double r = point_dist(lat.coord(i), center, lat.params.n);
    if (r >= r_lo && r <= r_hi) out.push_back(i);
  }
  if (out.empty()) throw EmptyRegionError("annulus holds no lattice nodes");
  return out;
}

std::optional<int> Lattice::node_at(const Point& x) const {
  std::array<int, 2> ai{0, 0};
  for (int k = 0; k < params.n; ++k) {
    const double t = (x[k] + L) / h;
    const double r = std::round(t);
    if (std::abs(t - r) > 1e-9) return std::nullopt;
    if (r < 0 || r > m - 1) return std::nullopt;
    ai[k] = static_cast<int>(r);
  }
  return linear_index(ai);
}

GridFunction constant_function(const Lattice& lat, double c) {
  GridFunction u;
  u.lattice = lat;
  u.values.assign(lat.node_count, c);
  u.far_field = c;
  return u;
}

GridFunction apply_transform(const GridFunction& u, const RigidTransform& t) {
  const Lattice& lat = u.lattice;
  const int n = lat.params.n;
  GridFunction v;
  v.lattice = lat;
  v.values.resize(lat.node_count);
  v.far_field = u.far_field;

  using K = RigidTransform::Kind;
  switch (t.kind) {
    case K::negate:
      for (int i = 0; i < lat.node_count; ++i) v.values[i] = -u.values[i];
      v.far_field = -u.far_field;
      return v;

    case K::add_constant:
      for (int i = 0; i < lat.node_count; ++i) v.values[i] = u.values[i] + t.c;
      v.far_field = u.far_field + t.c;
      return v;

    case K::scale: {
      if (!(t.lambda > 0.0)) throw GeometryError("scale factor must be positive");
      // v(x) = lambda^{n/p-s} u(lambda x) lives on the lattice (L/lambda, h/lambda),
      // whose nodes are exactly the old nodes divided by lambda; the index map is
      // the identity, so only the values are rescaled.
      v.lattice = build_lattice(lat.params, lat.L / t.lambda, lat.h / t.lambda);
      const double f = std::pow(t.lambda, n / lat.params.p - lat.params.s);
      for (int i = 0; i < lat.node_count; ++i) v.values[i] = f * u.values[i];
      v.far_field = f * u.far_field;
      return v;
    }

    case K::translate: {
      std::array<int, 2> steps{0, 0};
      for (int k = 0; k < n; ++k) {
        const double tk = t.shift[k] / lat.h;
        if (std::abs(tk - std::round(tk)) > 1e-9)
          throw GeometryError("translation must be a multiple of h per axis");
        steps[k] = static_cast<int>(std::llround(tk));
      }
      for (int i = 0; i < lat.node_count; ++i) {
        auto ai = lat.axis_index(i);
        bool inside = true;
        for (int k = 0; k < n; ++k) {
          ai[k] += steps[k];
          if (ai[k] < 0 || ai[k] >= lat.m) inside = false;
        }
        v.values[i] = inside ? u.values[lat.linear_index(ai)] : u.far_field;
      }
      return v;
    }

    case K::reflect_axis: {
      if (t.axis < 0 || t.axis >= n) throw GeometryError("reflection axis out of range");
      for (int i = 0; i < lat.node_count; ++i) {
        auto ai = lat.axis_index(i);
        ai[t.axis] = lat.m - 1 - ai[t.axis];
        v.values[i] = u.values[lat.linear_index(ai)];
      }
      return v;
    }

    case K::rotate90: {
      if (n != 2) throw GeometryError("rotate90 requires n = 2");
      // v(x, y) = u(-y, x): the image node of (ix, iy) is (m-1-iy, ix).
      for (int i = 0; i < lat.node_count; ++i) {
        const auto ai = lat.axis_index(i);
        v.values[i] = u.values[lat.linear_index({lat.m - 1 - ai[1], ai[0]})];
      }
      return v;
    }

    case K::permute_axes: {
      if (n != 2) throw GeometryError("permute_axes requires n = 2");
      for (int i = 0; i < lat.node_count; ++i) {
        const auto ai = lat.axis_index(i);
        v.values[i] = u.values[lat.linear_index({ai[1], ai[0]})];
      }
      return v;
    }
  }
  throw GeometryError("unknown transform kind");
}

}  // namespace morrey
