#include "doctest.h"
#include "oracles.hpp"

#include "graftlab/spectral.hpp"

#include <cmath>
#include <random>

using namespace graftlab;
using namespace graftlab::spectral;
using doctest::Approx;

namespace {

FourierSolution blank(double ell, double s, std::size_t n) {
  FourierSolution sol;
  sol.ell = ell;
  sol.s = s;
  sol.modes.resize(n);
  return sol;
}

std::vector<oracle::Mode> oracle_modes(const FourierSolution& sol) {
  std::vector<oracle::Mode> out;
  for (const auto& m : sol.modes) out.push_back({m.c, m.d});
  return out;
}

}  // namespace

TEST_CASE("evaluate simple fields") {
  auto sol = blank(2.0 * kPi, 2.0, 4);
  sol.d0 = 3.0;
  for (double x : {-1.0, 0.0, 0.4})
    for (double y : {0.0, 1.3, 5.9}) CHECK(evaluate(sol, x, y) == Approx(3.0).epsilon(1e-15));
  auto c1 = blank(2.0 * kPi, 2.0, 1);
  c1.modes[0].c = 1.0;
  CHECK(evaluate(c1, 0.0, 0.0) == Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_AS(evaluate(c1, 1.5, 0.0), DomainError);
}

TEST_CASE("evaluate matches the direct series and is real") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto sol = random_solution(1.0 + 0.3 * seed, 0.2 + 0.15 * seed, 12, seed);
    CHECK(sol.c0 == 0.0);
    const auto modes = oracle_modes(sol);
    for (double fx : {-0.5, -0.1, 0.3, 0.5})
      for (double y : {0.0, 0.37, 2.1}) {
        const double x = fx * sol.s;
        const double ref = oracle::series(sol.ell, sol.c0, sol.d0, modes, x, y);
        CHECK(evaluate(sol, x, y) == Approx(ref).epsilon(1e-12));
        CHECK(evaluate_dx(sol, x, y) ==
              Approx(oracle::series_dx(sol.ell, sol.c0, modes, x, y)).epsilon(1e-12));
        const auto sym = evaluate_symmetric(sol, x, y);
        CHECK(std::abs(sym.imag()) < 1e-12 * (1.0 + std::abs(ref)));
        CHECK(sym.real() == Approx(ref).epsilon(1e-12));
      }
  }
}

TEST_CASE("dirichlet traces") {
  auto sol = blank(2.0 * kPi, 2.0, 3);
  sol.d0 = 1.0;
  CHECK(dirichlet_trace(sol, Side::left).mean == 1.0);
  CHECK(dirichlet_trace(sol, Side::right).mean == 1.0);

  auto c1 = blank(2.0 * kPi, 2.0, 1);
  c1.modes[0].c = 1.0;
  CHECK(dirichlet_trace(c1, Side::left).modes[0].real() == Approx(std::cosh(1.0)).epsilon(1e-15));

  auto lin = blank(3.0, 2.0, 0);
  lin.c0 = 2.0;
  CHECK(dirichlet_trace(lin, Side::left).mean == Approx(-2.0));
  CHECK(dirichlet_trace(lin, Side::right).mean == Approx(2.0));
}

TEST_CASE("traces reproduce point values on the seams") {
  const auto sol = random_solution(4.0, 1.3, 10, 5);
  const auto modes = oracle_modes(sol);
  for (Side side : {Side::left, Side::right}) {
    const double x = side_sign(side) * 0.65;
    const auto d = dirichlet_trace(sol, side);
    const auto n = neumann_trace_flat(sol, side);
    for (double y : {0.0, 0.9, 3.3}) {
      CHECK(trace_value(d, y) ==
            Approx(oracle::series(sol.ell, sol.c0, sol.d0, modes, x, y)).epsilon(1e-12));
      CHECK(trace_value(n, y) ==
            Approx(oracle::series_dx(sol.ell, sol.c0, modes, x, y)).epsilon(1e-12));
    }
  }
}

TEST_CASE("flat neumann traces") {
  auto sol = blank(2.0 * kPi, 2.0, 3);
  sol.d0 = 4.0;
  for (Side side : {Side::left, Side::right}) {
    const auto n = neumann_trace_flat(sol, side);
    CHECK(n.mean == 0.0);
    for (auto m : n.modes) CHECK(m == Complex{});
  }
  auto c1 = blank(2.0 * kPi, 2.0, 1);
  c1.modes[0].c = 1.0;
  CHECK(neumann_trace_flat(c1, Side::left).modes[0].real() ==
        Approx(-std::sinh(1.0)).epsilon(1e-15));
  CHECK(neumann_trace_flat(c1, Side::right).modes[0].real() ==
        Approx(std::sinh(1.0)).epsilon(1e-15));
}

TEST_CASE("from_boundary_data inverts the traces") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto sol = random_solution(2.0 + seed * 0.4, 0.3 * seed, 16, seed);
    sol.c0 = 0.25 * static_cast<double>(seed);
    const auto back = from_boundary_data(dirichlet_trace(sol, Side::left),
                                         dirichlet_trace(sol, Side::right), sol.ell, sol.s);
    CHECK(back.c0 == Approx(sol.c0).epsilon(1e-12));
    CHECK(back.d0 == Approx(sol.d0).epsilon(1e-12));
    for (std::size_t i = 0; i < sol.modes.size(); ++i) {
      CHECK(std::abs(back.modes[i].c - sol.modes[i].c) < 1e-10);
      CHECK(std::abs(back.modes[i].d - sol.modes[i].d) < 1e-10);
    }
  }
  auto same = blank(3.0, 1.0, 2);
  same.d0 = 0.7;
  const auto back = from_boundary_data(dirichlet_trace(same, Side::left),
                                       dirichlet_trace(same, Side::right), 3.0, 1.0);
  CHECK(back.c0 == 0.0);
}

TEST_CASE("from_boundary_data is singular at s = 0 for differing sides") {
  TraceModes left{Side::left, TraceKind::dirichlet, 2.0, 0.0, {Complex(1.0, 0.0)}};
  TraceModes right{Side::right, TraceKind::dirichlet, 2.0, 0.0, {Complex(0.5, 0.0)}};
  CHECK_THROWS_AS(from_boundary_data(left, right, 2.0, 0.0), DomainError);
  right.modes[0] = 1.0;
  CHECK_NOTHROW(from_boundary_data(left, right, 2.0, 0.0));
}

TEST_CASE("rotation shifts the trace") {
  const auto sol = random_solution(3.0, 1.0, 8, 9);
  const auto d = dirichlet_trace(sol, Side::right);
  const auto r = rotate(d, 0.8);
  for (double y : {0.0, 0.5, 2.7}) CHECK(trace_value(r, y) == Approx(trace_value(d, y - 0.8)));
}

TEST_CASE("harmonicity residual") {
  auto sol = blank(2.0 * kPi, 2.0, 3);
  sol.d0 = 1.7;
  const StencilGrid grid{-1.0, 1.0, 2.0 * kPi, 2.0 * kPi / 256.0};
  CHECK(harmonicity_residual(sol, grid) < 1e-12);

  const double bumped = harmonicity_residual(
      [&](double x, double y) { return evaluate(sol, x, y) + x * x; }, grid);
  CHECK(bumped == Approx(2.0).epsilon(1e-8));

  // Five-point truncation error (h^2/12)|f_xxxx + f_yyyy| with k = 3 and unit coefficients.
  auto c3 = blank(2.0 * kPi, 2.0, 3);
  c3.modes[2] = {Complex(1.0, 0.0), Complex(0.0, 1.0)};
  const double h = grid.h;
  const double k = 3.0;
  double peak = 0.0;
  for (double x = -1.0; x <= 1.0; x += 0.01)
    peak = std::max(peak, 2.0 * std::hypot(std::cosh(k * x), std::sinh(k * x)));
  const double bound = h * h / 12.0 * 2.0 * std::pow(k, 4) * peak * 1.01;
  const double r = harmonicity_residual(c3, grid);
  CHECK(r < bound);
  const StencilGrid half{-1.0, 1.0, 2.0 * kPi, h / 2.0};
  CHECK(harmonicity_residual(c3, half) == Approx(r / 4.0).epsilon(0.02));
}

TEST_CASE("json round trip") {
  const auto sol = random_solution(2.0, 0.6, 5, 3);
  const auto back = solution_from_json(to_json(sol));
  CHECK(back.ell == sol.ell);
  CHECK(back.d0 == sol.d0);
  REQUIRE(back.modes.size() == sol.modes.size());
  for (std::size_t i = 0; i < sol.modes.size(); ++i) CHECK(back.modes[i].d == sol.modes[i].d);
}

TEST_CASE("random_solution is seeded") {
  const auto a = random_solution(2.0, 1.0, 6, 42);
  const auto b = random_solution(2.0, 1.0, 6, 42);
  const auto c = random_solution(2.0, 1.0, 6, 43);
  CHECK(a.modes[3].c == b.modes[3].c);
  CHECK(a.modes[3].c != c.modes[3].c);
}
