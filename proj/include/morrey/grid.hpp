#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "morrey/errors.hpp"

namespace morrey {

/// Point in R^n for n in {1, 2}; the unused component stays 0 for n = 1.
using Point = std::array<double, 2>;

/// Fractional-order parameters (n, s, p) in the Morrey regime s*p > n,
/// with the derived Hölder exponent alpha = s - n/p in (0, 1).
struct FracParams {
  int n = 1;
  double s = 0.0;
  double p = 0.0;
  double alpha = 0.0;
};

/// Validates and derives alpha. Throws ConfigError for out-of-range fields,
/// RegimeError when s*p <= n.
FracParams make_frac_params(int n, double s, double p);

/// Regular grid on [-L, L]^n with spacing h, nodes enumerated row-major
/// (last axis fastest). Small value type; node coordinates are derived from
/// (L, h) on demand, never stored.
struct Lattice {
  FracParams params;
  double L = 0.0;
  double h = 0.0;
  int m = 0;        // nodes per axis, 2L/h + 1
  int node_count = 0;  // m^n

  std::array<int, 2> axis_index(int linear) const {
    if (params.n == 1) return {linear, 0};
    return {linear / m, linear % m};
  }
  int linear_index(const std::array<int, 2>& ai) const {
    return params.n == 1 ? ai[0] : ai[0] * m + ai[1];
  }
  Point coord(int linear) const {
    const auto ai = axis_index(linear);
    Point x{-L + ai[0] * h, 0.0};
    if (params.n == 2) x[1] = -L + ai[1] * h;
    return x;
  }
  /// Nearest node if `x` lies on the lattice within 1e-9*h, else nullopt.
  std::optional<int> node_at(const Point& x) const;

  bool operator==(const Lattice& o) const {
    return params.n == o.params.n && params.s == o.params.s &&
           params.p == o.params.p && L == o.L && h == o.h;
  }
};

/// Throws GeometryError unless L >= 1 and h divides 1 and 2L (1e-9 relative);
/// RegimeError propagates from the params.
Lattice build_lattice(const FracParams& params, double L, double h);

/// Node indices with r_lo <= |x - center| <= r_hi, ascending.
/// Throws EmptyRegionError when no node qualifies.
std::vector<int> nodes_in_annulus(const Lattice& lat, const Point& center,
                                  double r_lo, double r_hi);

/// Node values over a lattice plus the constant value assumed everywhere
/// outside [-L, L]^n.
struct GridFunction {
  Lattice lattice;
  std::vector<double> values;
  double far_field = 0.0;
};

/// Constant function c (values and far field).
GridFunction constant_function(const Lattice& lat, double c);

/// Lattice-preserving transformations under which the seminorms are invariant.
struct RigidTransform {
  enum class Kind {
    negate,        // u -> -u
    add_constant,  // u -> u + c
    scale,         // u -> lambda^{n/p-s} u(lambda x), new lattice (L/lambda, h/lambda)
    translate,     // u -> u(x + a), a in h*Z^n; lost boundary values become far_field
    reflect_axis,  // u -> u(x with axis k negated)
    rotate90,      // u -> u(Ox), O the 90-degree rotation (n = 2 only)
    permute_axes,  // u -> u(x_sigma(0), x_sigma(1)) (n = 2 only)
  };
  Kind kind = Kind::negate;
  double c = 0.0;                    // add_constant
  double lambda = 1.0;               // scale, > 0
  std::array<double, 2> shift{0, 0};  // translate
  int axis = 0;                      // reflect_axis

  static RigidTransform negate() { return {Kind::negate, 0, 1, {0, 0}, 0}; }
  static RigidTransform add_constant(double c) { return {Kind::add_constant, c, 1, {0, 0}, 0}; }
  static RigidTransform scale(double lambda) { return {Kind::scale, 0, lambda, {0, 0}, 0}; }
  static RigidTransform translate(const std::array<double, 2>& a) {
    return {Kind::translate, 0, 1, a, 0};
  }
  static RigidTransform reflect_axis(int k) { return {Kind::reflect_axis, 0, 1, {0, 0}, k}; }
  static RigidTransform rotate90() { return {Kind::rotate90, 0, 1, {0, 0}, 0}; }
  static RigidTransform permute_axes() { return {Kind::permute_axes, 0, 1, {0, 0}, 0}; }
};

/// Applies `t` pointwise. Index relabelings (reflect, rotate90, permute_axes,
/// translate) never do coordinate arithmetic on values, so inverse pairs
/// compose to the exact identity. Throws GeometryError when the transform
/// does not respect the lattice.
GridFunction apply_transform(const GridFunction& u, const RigidTransform& t);

inline double sqr(double x) { return x * x; }

inline double point_dist(const Point& a, const Point& b, int n) {
  double d2 = sqr(a[0] - b[0]);
  if (n == 2) d2 += sqr(a[1] - b[1]);
  return std::sqrt(d2);
}

}  // namespace morrey
