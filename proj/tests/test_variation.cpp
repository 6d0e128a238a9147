#include "doctest.h"
#include "oracles.hpp"

#include "graftlab/variation.hpp"

#include <cmath>
#include <random>

using namespace graftlab;
using namespace graftlab::spectral;
using namespace graftlab::variation;
using doctest::Approx;

namespace {

FourierSolution blank(double ell, double s, std::size_t n) {
  FourierSolution sol;
  sol.ell = ell;
  sol.s = s;
  sol.modes.resize(n);
  return sol;
}

QuadDiffModes blank_quad(double ell, double s, std::size_t n) {
  QuadDiffModes q;
  q.ell = ell;
  q.s = s;
  q.modes.resize(n);
  return q;
}

// Solves V'' = f by dividing Fourier coefficients sampled with the trapezoid rule.
Complex spectral_inverse(const std::function<double(double)>& f, double ell, int n) {
  const double k = 2.0 * kPi * n / ell;
  return oracle::coefficient(f, ell, n) / (-k * k);
}

}  // namespace

TEST_CASE("solvability requires a vanishing flat Neumann mean") {
  auto sol = blank(2.0 * kPi, 2.0, 2);
  sol.c0 = 0.1;
  CHECK_THROWS_AS(solve_flat_variation(neumann_trace_flat(sol, Side::left), 0.0), DomainError);
  CHECK_THROWS_WITH(solve_flat_variation(neumann_trace_flat(sol, Side::right), 0.0),
                    doctest::Contains("no periodic solution"));
  sol.c0 = 0.0;
  CHECK_NOTHROW(solve_flat_variation(neumann_trace_flat(sol, Side::left), 0.0));
}

TEST_CASE("solvability property over random inputs") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  std::bernoulli_distribution coin(0.5);
  for (int i = 0; i < 300; ++i) {
    auto sol = random_solution(1.0 + i % 7, 0.1 + 0.01 * i, 6, 100 + i);
    const bool bad = coin(rng);
    if (bad) {
      sol.c0 = normal(rng);
      if (sol.c0 == 0.0) sol.c0 = 1e-3;
    }
    bool threw = false;
    try {
      (void)solve_flat_variation(neumann_trace_flat(sol, Side::left), 0.0);
    } catch (const DomainError&) {
      threw = true;
    }
    CHECK(threw == bad);
  }
}

TEST_CASE("flat variation coefficients") {
  auto sol = blank(2.0 * kPi, 2.0, 1);
  sol.modes[0].c = 1.0;
  const auto v = solve_flat_variation(neumann_trace_flat(sol, Side::left), 0.0);
  CHECK(v.modes[0].real() == Approx(-std::sinh(1.0) / 2.0).epsilon(1e-15));
  CHECK(v.modes[0].real() == Approx(-0.5876).epsilon(1e-4));
  CHECK(std::abs(flat_variation_coefficient(sol, Side::left, 1) - v.modes[0]) < 1e-15);

  const auto zero = solve_flat_variation(neumann_trace_flat(blank(3.0, 1.0, 4), Side::right), 0.7);
  for (double y : {0.0, 1.0, 2.5}) CHECK(value(zero, y) == Approx(0.7));
}

TEST_CASE("variation solves V_yy = -1/2 d_x H against a trapezoid oracle") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const auto sol = random_solution(1.5 + 0.4 * seed, 0.1 + 0.25 * seed, 8, seed);
    std::vector<oracle::Mode> modes;
    for (const auto& m : sol.modes) modes.push_back({m.c, m.d});
    for (Side side : {Side::left, Side::right}) {
      const double x = side_sign(side) * 0.5 * sol.s;
      const auto v = solve_flat_variation(neumann_trace_flat(sol, side), 0.0);
      for (int n = 1; n <= 8; ++n) {
        const Complex ref = spectral_inverse(
            [&](double y) { return -0.5 * oracle::series_dx(sol.ell, 0.0, modes, x, y); },
            sol.ell, n);
        CHECK(std::abs(v.modes[n - 1] - ref) < 1e-10 * (1.0 + std::abs(ref)));
      }
      for (double y : {0.2, 1.7})
        CHECK(second_derivative(v, y) ==
              Approx(-0.5 * oracle::series_dx(sol.ell, 0.0, modes, x, y)).epsilon(1e-10));
    }
  }
}

TEST_CASE("hyperbolic neumann map") {
  auto sol = blank(2.0 * kPi, 2.0, 1);
  sol.modes[0].c = 1.0;
  const auto v = solve_flat_variation(neumann_trace_flat(sol, Side::left), 0.0);
  const auto n = hyperbolic_neumann(v);
  CHECK(n.modes[0].real() == Approx(-2.0 * std::sinh(1.0)).epsilon(1e-14));
  CHECK(n.modes[0].real() == Approx(-2.3504).epsilon(1e-4));

  VariationField c{Side::left, 3.0, 0.5, {}, false};
  const auto t = hyperbolic_neumann(c);
  CHECK(t.mean == 1.0);
  CHECK(trace_value(t, 1.2) == Approx(1.0));

  VariationField z{Side::right, 3.0, 0.0, std::vector<Complex>(4), false};
  for (auto m : hyperbolic_neumann(z).modes) CHECK(m == Complex{});
}

TEST_CASE("hyperbolic neumann equals -2(V_yy - V) pointwise") {
  const auto sol = random_solution(3.7, 1.1, 10, 77);
  for (Side side : {Side::left, Side::right}) {
    const auto v = solve_flat_variation(neumann_trace_flat(sol, side), -0.3);
    const auto n = hyperbolic_neumann(v);
    const auto cl = hyperbolic_neumann_closed(sol, side, -0.3);
    for (double y : {0.0, 0.6, 2.9}) {
      const double ref = -2.0 * (second_derivative(v, y) - value(v, y));
      CHECK(trace_value(n, y) == Approx(ref).epsilon(1e-12));
      CHECK(trace_value(cl, y) == Approx(ref).epsilon(1e-12));
    }
  }
}

TEST_CASE("amended variation examples") {
  const auto sol = blank(2.0 * kPi, 2.0, 1);
  auto q = blank_quad(2.0 * kPi, 2.0, 1);
  q.modes[0].u = 1.0;
  const auto w = solve_amended_variation(neumann_trace_flat(sol, Side::left), q, 0.0);
  CHECK(w.amended);
  CHECK(std::abs(w.modes[0] - Complex(0.0, -std::cosh(1.0))) < 1e-14);

  auto qv = blank_quad(2.0 * kPi, 2.0, 1);
  qv.modes[0].v = 1.0;
  const auto wl = solve_amended_variation(neumann_trace_flat(sol, Side::left), qv, 0.0);
  const auto wr = solve_amended_variation(neumann_trace_flat(sol, Side::right), qv, 0.0);
  CHECK(std::abs(wl.modes[0] - Complex(0.0, std::sinh(1.0))) < 1e-14);
  CHECK(std::abs(wr.modes[0] - Complex(0.0, -std::sinh(1.0))) < 1e-14);

  const auto en = extended_hyperbolic_neumann(w);
  CHECK(std::abs(en.modes[0] - Complex(0.0, -4.0 * std::cosh(1.0))) < 1e-13);
  const auto ec = extended_hyperbolic_neumann_closed(sol, q, Side::left, 0.0);
  CHECK(std::abs(ec.modes[0] - Complex(0.0, -4.0 * std::cosh(1.0))) < 1e-13);
}

TEST_CASE("amended variation solves W_yy = -1/2 d_x H + d_y Im phi") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto sol = random_solution(2.0 + 0.3 * seed, 0.4 + 0.2 * seed, 6, seed);
    const auto q = random_quad(sol.ell, sol.s, 6, seed + 50);
    std::vector<oracle::Mode> hm, qm;
    for (const auto& m : sol.modes) hm.push_back({m.c, m.d});
    for (const auto& m : q.modes) qm.push_back({m.u, m.v});
    for (Side side : {Side::left, Side::right}) {
      const double x = side_sign(side) * 0.5 * sol.s;
      const auto w = solve_amended_variation(neumann_trace_flat(sol, side), q, 0.0);
      const double h = 1e-4;
      auto im_dy = [&](double y) {
        return (oracle::series(q.ell, q.u0, q.v0, qm, x, y + h) -
                oracle::series(q.ell, q.u0, q.v0, qm, x, y - h)) /
               (2 * h);
      };
      for (int n = 1; n <= 6; ++n) {
        const Complex ref = spectral_inverse(
            [&](double y) { return -0.5 * oracle::series_dx(sol.ell, 0.0, hm, x, y) + im_dy(y); },
            sol.ell, n);
        CHECK(std::abs(w.modes[n - 1] - ref) < 1e-6 * (1.0 + std::abs(ref)));
      }
    }
  }
}

TEST_CASE("extended maps reduce to the conformal ones at q = 0") {
  const auto sol = random_solution(4.2, 1.7, 12, 8);
  const auto q = blank_quad(4.2, 1.7, 12);
  for (Side side : {Side::left, Side::right}) {
    const auto trace = neumann_trace_flat(sol, side);
    const auto v = solve_flat_variation(trace, 0.3);
    const auto w = solve_amended_variation(trace, q, 0.3);
    CHECK(v.mean == w.mean);
    for (std::size_t i = 0; i < v.modes.size(); ++i) CHECK(v.modes[i] == w.modes[i]);
    const auto a = hyperbolic_neumann_closed(sol, side, 0.3);
    const auto b = extended_hyperbolic_neumann_closed(sol, q, side, 0.3);
    CHECK(a.mean == b.mean);
    for (std::size_t i = 0; i < a.modes.size(); ++i) CHECK(a.modes[i] == b.modes[i]);
    const auto na = hyperbolic_neumann(v);
    const auto nb = extended_hyperbolic_neumann(w);
    for (std::size_t i = 0; i < na.modes.size(); ++i) CHECK(na.modes[i] == nb.modes[i]);
  }
}

TEST_CASE("extended closed form equals -2(W_yy - W)") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto sol = random_solution(1.0 + 0.6 * seed, 0.2 + 0.3 * seed, 16, seed);
    const auto q = random_quad(sol.ell, sol.s, 16, seed * 7);
    for (Side side : {Side::left, Side::right}) {
      const auto w = solve_amended_variation(neumann_trace_flat(sol, side), q, 0.1);
      const auto a = extended_hyperbolic_neumann(w);
      const auto b = extended_hyperbolic_neumann_closed(sol, q, side, 0.1);
      for (std::size_t i = 0; i < a.modes.size(); ++i)
        CHECK(std::abs(a.modes[i] - b.modes[i]) <= 1e-12 * (1.0 + std::abs(a.modes[i])));
    }
  }
}

TEST_CASE("Re phi is the harmonic conjugate of Im phi") {
  const auto q = random_quad(3.0, 1.2, 6, 4);
  const double h = 1e-5;
  for (double x : {-0.4, 0.0, 0.5})
    for (double y : {0.3, 1.1, 2.2}) {
      // phi holomorphic in z = x + iy: d_x Re = d_y Im, d_y Re = -d_x Im
      const double rx = (re_phi(q, x + h, y) - re_phi(q, x - h, y)) / (2 * h);
      const double iy = (im_phi(q, x, y + h) - im_phi(q, x, y - h)) / (2 * h);
      const double ry = (re_phi(q, x, y + h) - re_phi(q, x, y - h)) / (2 * h);
      const double ix = (im_phi(q, x + h, y) - im_phi(q, x - h, y)) / (2 * h);
      CHECK(rx == Approx(iy).epsilon(1e-7));
      CHECK(ry == Approx(-ix).epsilon(1e-7));
    }
  CHECK_THROWS_AS(re_phi(q, 2.0, 0.0), DomainError);
}

TEST_CASE("periodic collocation rejects forcing with a mean") {
  CHECK_THROWS_AS(solve_periodic_collocation([](double) { return 1.0; }, Side::left, 2.0, 0.0, 4),
                  DomainError);
  const auto v = solve_periodic_collocation(
      [](double y) { return -std::cos(y); }, Side::left, 2.0 * kPi, 0.25, 4);
  CHECK(std::abs(v.mean - 0.25) < 1e-12);
  CHECK(std::abs(v.modes[0] - Complex(0.5, 0.0)) < 1e-12);
}
