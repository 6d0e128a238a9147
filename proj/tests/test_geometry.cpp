#include "doctest.h"
#include "oracles.hpp"

#include "graftlab/geometry.hpp"

#include <cmath>
#include <random>

using namespace graftlab;
using geometry::GraftedCollar;
using doctest::Approx;

TEST_CASE("metric coefficient on each stratum") {
  const GraftedCollar chart(2.0 * kPi, 2.0, 1.0);
  const auto mid = geometry::metric_coefficient(chart, 0.0);
  CHECK(mid.g == 1.0);
  CHECK(mid.dg == 0.0);
  CHECK(mid.d2g_minus == 0.0);
  CHECK(mid.d2g_plus == 0.0);

  const auto outer = geometry::metric_coefficient(chart, 2.0);
  CHECK(outer.g == Approx(std::cosh(1.0)).epsilon(1e-15));
  CHECK(outer.g == Approx(1.5431).epsilon(1e-4));
  CHECK(outer.dg == Approx(std::sinh(1.0)).epsilon(1e-15));

  const auto left_outer = geometry::metric_coefficient(chart, -2.0);
  CHECK(left_outer.g == Approx(std::cosh(1.0)).epsilon(1e-15));
  CHECK(left_outer.dg == Approx(-std::sinh(1.0)).epsilon(1e-15));
}

TEST_CASE("seam has one-sided second derivatives") {
  const GraftedCollar chart(2.0 * kPi, 2.0, 1.0);
  const auto right = geometry::metric_coefficient(chart, 1.0);
  CHECK(right.g == 1.0);
  CHECK(right.dg == 0.0);
  CHECK(right.d2g_minus == 0.0);
  CHECK(right.d2g_plus == 1.0);
  const auto left = geometry::metric_coefficient(chart, -1.0);
  CHECK(left.d2g_minus == 1.0);
  CHECK(left.d2g_plus == 0.0);
}

TEST_CASE("metric coefficient matches a finite difference of cosh away from seams") {
  const GraftedCollar chart(3.0, 1.5, 2.0);
  const double h = 1e-5;
  for (double x : {-2.3, -1.1, 0.9, 1.7, 2.5}) {
    auto g = [&](double z) { return geometry::metric_coefficient(chart, z).g; };
    const auto m = geometry::metric_coefficient(chart, x);
    CHECK(m.dg == Approx((g(x + h) - g(x - h)) / (2 * h)).epsilon(1e-8));
    CHECK(m.d2g_minus == Approx((g(x + h) - 2 * g(x) + g(x - h)) / (h * h)).epsilon(1e-4));
  }
}

TEST_CASE("gauss curvature") {
  const GraftedCollar chart(2.0 * kPi, 2.0, 1.0);
  CHECK(geometry::gauss_curvature(chart, 0.0) == 0.0);
  CHECK(geometry::gauss_curvature(chart, 1.5) == Approx(-1.0).epsilon(1e-15));
  CHECK(geometry::gauss_curvature(chart, -1.5) == Approx(-1.0).epsilon(1e-15));
  CHECK_THROWS_AS(geometry::gauss_curvature(chart, 1.0), DomainError);
  CHECK_THROWS_AS(geometry::gauss_curvature(chart, -1.0), DomainError);
  CHECK_THROWS_WITH(geometry::gauss_curvature(chart, 1.0),
                    doctest::Contains("curvature discontinuous"));
  CHECK_THROWS_AS(geometry::gauss_curvature(chart, 5.0), DomainError);
}

TEST_CASE("curvature agrees with the Brioschi difference oracle") {
  const GraftedCollar chart(4.0, 1.0, 1.5);
  auto e = [](double, double) { return 1.0; };
  auto f = [&](double x, double) {
    const double g = geometry::metric_coefficient(chart, x).g;
    return g * g;
  };
  for (double x : {-1.6, -0.2, 0.3, 1.2}) {
    CHECK(geometry::curvature_orthogonal_fd(e, f, x, 0.7, 1e-3) ==
          Approx(geometry::gauss_curvature(chart, x)).epsilon(1e-5));
  }
}

TEST_CASE("total area") {
  const GraftedCollar chart(2.0 * kPi, 2.0, 1.0);
  const double expected = 2.0 * 2.0 * kPi * std::sinh(1.0) + 4.0 * kPi;
  CHECK(geometry::total_area(chart) == Approx(expected).epsilon(1e-15));
  const double quad = 2.0 * kPi * oracle::simpson(
                                      [&](double x) {
                                        return geometry::metric_coefficient(chart, x).g;
                                      },
                                      -2.0, 2.0, 4000);
  CHECK(geometry::total_area(chart) == Approx(quad).epsilon(1e-10));
  CHECK(geometry::total_area_quadrature(chart) == Approx(expected).epsilon(1e-12));

  CHECK(geometry::total_area(GraftedCollar(3.0, 0.0, 2.0)) ==
        Approx(2.0 * 3.0 * std::sinh(2.0)).epsilon(1e-15));
  CHECK(geometry::total_area(GraftedCollar(3.0, 1.7, 1e-9)) == Approx(3.0 * 1.7).epsilon(1e-8));
}

TEST_CASE("conformal modulus") {
  CHECK(geometry::gudermannian(1.0) == Approx(oracle::gd(1.0)).epsilon(1e-12));
  CHECK(geometry::gudermannian(1.0) == Approx(2.0 * std::atan(std::tanh(0.5))).epsilon(1e-15));
  const GraftedCollar chart(2.0 * kPi, 0.0, 1.0);
  CHECK(geometry::conformal_modulus(chart) == Approx(0.2756).epsilon(1e-3));
  CHECK(geometry::conformal_modulus(chart) ==
        Approx(2.0 * oracle::gd(1.0) / (2.0 * kPi)).epsilon(1e-12));
  CHECK(geometry::conformal_modulus(GraftedCollar(3.0, 1.2, 1e-12)) ==
        Approx(1.2 / 3.0).epsilon(1e-10));
  const GraftedCollar other(5.0, 1.3, 0.7);
  CHECK(geometry::conformal_modulus_quadrature(other) ==
        Approx(geometry::conformal_modulus(other)).epsilon(1e-10));
}

TEST_CASE("modulus strictly decreasing in ell and increasing in s (property)") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.05, 10.0);
  for (int i = 0; i < 500; ++i) {
    double l1 = u(rng), l2 = u(rng);
    if (l1 == l2) continue;
    if (l1 > l2) std::swap(l1, l2);
    const double s = u(rng) * 0.4, a = u(rng) * 0.3;
    CHECK(geometry::conformal_modulus(GraftedCollar(l1, s, a)) >
          geometry::conformal_modulus(GraftedCollar(l2, s, a)));
    double s1 = u(rng) * 0.4, s2 = u(rng) * 0.4;
    if (s1 == s2) continue;
    if (s1 > s2) std::swap(s1, s2);
    CHECK(geometry::conformal_modulus(GraftedCollar(l1, s1, a)) <
          geometry::conformal_modulus(GraftedCollar(l1, s2, a)));
  }
}

TEST_CASE("grafted length") {
  CHECK(geometry::grafted_length(2.0 * kPi, 2.0) == Approx(4.0 * kPi).epsilon(1e-15));
  CHECK(geometry::grafted_length(2.0 * kPi, 0.0) == 0.0);
  CHECK(geometry::grafted_length(1.0, 1.0) == 1.0);
}

TEST_CASE("chart validation and json round trip") {
  CHECK_THROWS_AS(GraftedCollar(0.0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(GraftedCollar(1.0, -1.0, 1.0), DomainError);
  CHECK_THROWS_AS(GraftedCollar(1.0, 1.0, -0.5), DomainError);
  const GraftedCollar chart(2.5, 0.75, 1.25, OuterBoundary::neumann_zero);
  CHECK(geometry::chart_from_json(geometry::to_json(chart)) == chart);
  CHECK(geometry::on_seam(chart, 0.375));
  CHECK_FALSE(geometry::on_seam(chart, 0.2));
}
