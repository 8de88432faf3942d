#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>

#include "doctest.h"
#include "morrey/exterior.hpp"
#include "test_util.hpp"

using namespace morrey;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Independent n = 1 oracle: integrate the two half-lines numerically.
// tanh-sinh handles the semi-infinite range of a slowly decaying power to
// near machine precision, where fixed-order rules plateau around 1e-9.
double oracle_1d(double sp, double B, double x) {
  boost::math::quadrature::tanh_sinh<double> quad;
  const auto right = [&](double y) { return std::pow(y - x, -1.0 - sp); };
  const auto left = [&](double y) { return std::pow(x - y, -1.0 - sp); };
  return quad.integrate(right, B, kInf) + quad.integrate(left, -kInf, -B);
}

// Independent n = 2 oracle via a slab/strip decomposition of the box
// complement. The vertical slabs {|y1| > B} integrate in closed form through
//   int_R (a^2 + t^2)^(-K/2) dt = |a|^(1-K) sqrt(pi) Gamma((K-1)/2)/Gamma(K/2);
// the horizontal strips {|y1| <= B, |y2| > B} are nested 1D quadratures.
double oracle_2d(double sp, double B, const Point& x) {
  const double K = 2.0 + sp;
  const double ck = std::sqrt(M_PI) * boost::math::tgamma((K - 1.0) / 2.0) /
                    boost::math::tgamma(K / 2.0);
  const double slabs =
      ck * (std::pow(B - x[0], -sp) + std::pow(B + x[0], -sp)) / sp;

  using inner_quad = boost::math::quadrature::gauss_kronrod<double, 61>;
  using outer_quad = boost::math::quadrature::gauss_kronrod<double, 31>;
  const auto strip_column = [&](double y1) {
    const double a2 = (y1 - x[0]) * (y1 - x[0]);
    const auto rad = [&](double t) { return std::pow(a2 + t * t, -K / 2.0); };
    return inner_quad::integrate(rad, B - x[1], kInf, 12) +
           inner_quad::integrate(rad, B + x[1], kInf, 12);
  };
  const double strips = outer_quad::integrate(strip_column, -B, B, 12);
  return slabs + strips;
}

}  // namespace

TEST_CASE("1d exterior tail matches numeric integration") {
  for (double sp : {1.2, 1.6, 2.4}) {
    for (double B : {2.25, 4.125}) {
      for (double x : {0.0, 0.5, -1.75, B - 0.125}) {
        const double got = tail_integral(1, sp, B, Point{x, 0.0});
        const double want = oracle_1d(sp, B, x);
        CHECK(got == doctest::Approx(want).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("2d exterior tail matches the slab/strip oracle") {
  for (double sp : {2.4, 3.6}) {
    const double B = 1.25;
    for (const Point& x : {Point{0.0, 0.0}, Point{0.5, 0.25}, Point{-1.0, 0.75},
                           Point{1.125, -1.125}}) {
      const double got = tail_integral(2, sp, B, x);
      const double want = oracle_2d(sp, B, x);
      CHECK(got == doctest::Approx(want).epsilon(1e-8));
    }
  }
}

TEST_CASE("exterior tail symmetry and boundary growth") {
  const double sp = 3.6, B = 2.25;
  CHECK(tail_integral(2, sp, B, Point{0.5, -0.75}) ==
        doctest::Approx(tail_integral(2, sp, B, Point{-0.5, 0.75})).epsilon(1e-12));
  CHECK(tail_integral(2, sp, B, Point{0.5, 0.75}) ==
        doctest::Approx(tail_integral(2, sp, B, Point{0.75, 0.5})).epsilon(1e-12));
  // Closer to the boundary sees more of the complement.
  double prev = 0.0;
  for (double x : {0.0, 0.5, 1.0, 1.5, 2.0}) {
    const double t = tail_integral(1, 1.6, B, Point{x, 0.0});
    CHECK(t > prev);
    prev = t;
  }
}

TEST_CASE("lattice node overload uses the cell-union extent") {
  const Lattice lat = testutil::lat1d(0.8, 2.0, 2.0, 0.5);
  for (int i : {0, 2, 4, 7}) {
    const double got = tail_integral(lat, i);
    const double want =
        tail_integral(1, lat.params.s * lat.params.p, lat.L + lat.h / 2.0, lat.coord(i));
    CHECK(got == doctest::Approx(want).epsilon(1e-13));
  }
  const Lattice lat2 = testutil::lat2d(0.9, 4.0, 1.0, 0.5);
  const int corner = *lat2.node_at(Point{1.0, 1.0});
  const double got = tail_integral(lat2, corner);
  CHECK(got == doctest::Approx(oracle_2d(3.6, 1.25, Point{1.0, 1.0})).epsilon(1e-8));
}
