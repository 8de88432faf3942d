#include "morrey/exterior.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace morrey {

namespace {

/// Distance from x (inside the box) to the box boundary along direction phi.
/// Rays from an interior point exit the convex box exactly once, so the
/// complement in polar form is {r > exit(phi)}.
double exit_distance(double B, const Point& x, double phi) {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  double r = std::numeric_limits<double>::infinity();
  if (c > 0)
    r = std::min(r, (B - x[0]) / c);
  else if (c < 0)
    r = std::min(r, (-B - x[0]) / c);
  if (s > 0)
    r = std::min(r, (B - x[1]) / s);
  else if (s < 0)
    r = std::min(r, (-B - x[1]) / s);
  return r;
}

}  // namespace

double tail_integral(int n, double sp, double B, const Point& x) {
  if (n == 1) {
    // int_{|y| > B} |x - y|^{-(1+sp)} dy in closed form.
    return (std::pow(B - x[0], -sp) + std::pow(B + x[0], -sp)) / sp;
  }
  // n = 2: radially, int_{r > exit(phi)} r^{-(2+sp)} r dr = exit(phi)^{-sp}/sp,
  // so T = (1/sp) int_0^{2pi} exit(phi)^{-sp} dphi. exit() is analytic except
  // at the four corner directions; integrate each smooth sector separately.
  double corners[4] = {
      std::atan2(B - x[1], B - x[0]), std::atan2(B - x[1], -B - x[0]),
      std::atan2(-B - x[1], -B - x[0]), std::atan2(-B - x[1], B - x[0])};
  std::sort(corners, corners + 4);

  using boost::math::quadrature::gauss_kronrod;
  const auto f = [&](double phi) { return std::pow(exit_distance(B, x, phi), -sp); };
  double total = 0.0;
  for (int k = 0; k < 4; ++k) {
    const double a = corners[k];
    const double b = k + 1 < 4 ? corners[k + 1] : corners[0] + 2.0 * M_PI;
    total += gauss_kronrod<double, 31>::integrate(f, a, b, 10, 1e-12);
  }
  return total / sp;
}

double tail_integral(const Lattice& lat, int node) {
  return tail_integral(lat.params.n, lat.params.s * lat.params.p, lat.L + lat.h / 2.0,
                       lat.coord(node));
}

}  // namespace morrey
