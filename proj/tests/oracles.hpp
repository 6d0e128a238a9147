#pragma once

// Reference computations written without the library's series, trace or solver code.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;
inline constexpr double pi = std::numbers::pi;

struct Mode {
  Complex c;
  Complex d;
};

// c0 x + d0 + 2 Re sum (c_n cosh + d_n sinh) e^{i k_n y}
inline double series(double ell, double c0, double d0, const std::vector<Mode>& modes, double x,
                     double y) {
  double out = c0 * x + d0;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const double k = 2.0 * pi * static_cast<double>(i + 1) / ell;
    const Complex e = std::polar(1.0, k * y);
    out += 2.0 * ((modes[i].c * std::cosh(k * x) + modes[i].d * std::sinh(k * x)) * e).real();
  }
  return out;
}

inline double series_dx(double ell, double c0, const std::vector<Mode>& modes, double x,
                        double y) {
  double out = c0;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const double k = 2.0 * pi * static_cast<double>(i + 1) / ell;
    const Complex e = std::polar(1.0, k * y);
    out += 2.0 * (k * (modes[i].c * std::sinh(k * x) + modes[i].d * std::cosh(k * x)) * e).real();
  }
  return out;
}

inline double trapezoid_periodic(const std::function<double(double)>& f, double period,
                                 std::size_t points) {
  double sum = 0.0;
  for (std::size_t j = 0; j < points; ++j) sum += f(period * static_cast<double>(j) / points);
  return sum * period / static_cast<double>(points);
}

inline double simpson(const std::function<double(double)>& f, double lo, double hi,
                      std::size_t panels) {
  if (panels % 2) ++panels;
  const double h = (hi - lo) / static_cast<double>(panels);
  double sum = f(lo) + f(hi);
  for (std::size_t j = 1; j < panels; ++j) sum += (j % 2 ? 4.0 : 2.0) * f(lo + h * j);
  return sum * h / 3.0;
}

// Fourier coefficient (1/ell) int f e^{-i k_n y} by the periodic trapezoid rule.
inline Complex coefficient(const std::function<double(double)>& f, double ell, int n,
                           std::size_t points = 512) {
  Complex sum{};
  for (std::size_t j = 0; j < points; ++j) {
    const double y = ell * static_cast<double>(j) / points;
    sum += f(y) * std::polar(1.0, -2.0 * pi * n * y / ell);
  }
  return sum / static_cast<double>(points);
}

// b'' = -tanh(xi) b' + (k^2 sech^2 + 2) b integrated from xi = a down to 0 with classical RK4.
// Returns b'(0) / b(0) for the outer condition b(a) = 0 (dirichlet) or b'(a) = 0.
inline double mode_dtn(int n, double ell, double a, bool dirichlet, std::size_t steps = 20000) {
  const double k = 2.0 * pi * n / ell;
  auto rhs = [k](double xi, double b, double db, double& out_b, double& out_db) {
    const double sech = 1.0 / std::cosh(xi);
    out_b = db;
    out_db = -std::tanh(xi) * db + (k * k * sech * sech + 2.0) * b;
  };
  double b = dirichlet ? 0.0 : 1.0;
  double db = dirichlet ? 1.0 : 0.0;
  const double h = -a / static_cast<double>(steps);
  double xi = a;
  for (std::size_t i = 0; i < steps; ++i) {
    double k1b, k1d, k2b, k2d, k3b, k3d, k4b, k4d;
    rhs(xi, b, db, k1b, k1d);
    rhs(xi + 0.5 * h, b + 0.5 * h * k1b, db + 0.5 * h * k1d, k2b, k2d);
    rhs(xi + 0.5 * h, b + 0.5 * h * k2b, db + 0.5 * h * k2d, k3b, k3d);
    rhs(xi + h, b + h * k3b, db + h * k3d, k4b, k4d);
    b += h / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);
    db += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
    xi += h;
    // keep the growing solution bounded
    const double scale = std::max(std::abs(b), std::abs(db));
    if (scale > 1e100) {
      b /= scale;
      db /= scale;
    }
  }
  return db / b;
}

// Gudermannian by direct quadrature of sech.
inline double gd(double a) {
  return simpson([](double x) { return 1.0 / std::cosh(x); }, 0.0, a, 4000);
}

}  // namespace oracle
