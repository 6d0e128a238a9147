#include "graftlab/numerics.hpp"

#include "graftlab/common.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <limits>

namespace graftlab::numerics {

double simpson(const RealFn& f, double lo, double hi, std::size_t panels) {
  if (panels < 2) panels = 2;
  if (panels % 2 != 0) ++panels;
  const double h = (hi - lo) / static_cast<double>(panels);
  double sum = f(lo) + f(hi);
  for (std::size_t i = 1; i < panels; ++i) {
    sum += (i % 2 == 1 ? 4.0 : 2.0) * f(lo + h * static_cast<double>(i));
  }
  return sum * h / 3.0;
}

double gauss_legendre(const RealFn& f, double lo, double hi, std::size_t panels) {
  using Rule = boost::math::quadrature::gauss<double, 20>;
  if (panels == 0) panels = 1;
  const double width = (hi - lo) / static_cast<double>(panels);
  double total = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double a = lo + width * static_cast<double>(p);
    total += Rule::integrate(f, a, a + width);
  }
  return total;
}

double periodic_trapezoid(const RealFn& f, double period, std::size_t points) {
  double sum = 0.0;
  for (std::size_t j = 0; j < points; ++j) {
    sum += f(period * static_cast<double>(j) / static_cast<double>(points));
  }
  return sum * period / static_cast<double>(points);
}

std::vector<double> periodic_nodes(double period, std::size_t points) {
  std::vector<double> y(points);
  for (std::size_t j = 0; j < points; ++j) {
    y[j] = period * static_cast<double>(j) / static_cast<double>(points);
  }
  return y;
}

// Standard formulas for the periodic sinc interpolant on an even number of nodes.
Eigen::MatrixXd fourier_first_derivative(std::size_t points, double period) {
  if (points % 2 != 0) throw DomainError("fourier differentiation needs an even node count");
  const auto m = static_cast<Eigen::Index>(points);
  const double h = 2.0 * kPi / static_cast<double>(points);
  const double scale = 2.0 * kPi / period;
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      if (i == j) continue;
      const auto k = static_cast<double>(i - j);
      const double sign = ((i - j) % 2 == 0) ? 1.0 : -1.0;
      d(i, j) = scale * 0.5 * sign / std::tan(0.5 * k * h);
    }
  }
  return d;
}

Eigen::MatrixXd fourier_second_derivative(std::size_t points, double period) {
  if (points % 2 != 0) throw DomainError("fourier differentiation needs an even node count");
  const auto m = static_cast<Eigen::Index>(points);
  const double h = 2.0 * kPi / static_cast<double>(points);
  const double scale = 2.0 * kPi / period;
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      if (i == j) {
        d(i, j) = -kPi * kPi / (3.0 * h * h) - 1.0 / 6.0;
      } else {
        const auto k = static_cast<double>(i - j);
        const double sign = ((i - j) % 2 == 0) ? 1.0 : -1.0;
        const double sn = std::sin(0.5 * k * h);
        d(i, j) = -0.5 * sign / (sn * sn);
      }
    }
  }
  return d * scale * scale;
}

std::complex<double> fourier_coefficient(std::span<const double> samples, int n) {
  const auto m = samples.size();
  std::complex<double> acc = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double phase = -2.0 * kPi * n * static_cast<double>(j) / static_cast<double>(m);
    acc += samples[j] * std::polar(1.0, phase);
  }
  return acc / static_cast<double>(m);
}

std::vector<double> chebyshev_nodes(std::size_t degree, double lo, double hi) {
  std::vector<double> x(degree + 1);
  for (std::size_t j = 0; j <= degree; ++j) {
    const double t = -std::cos(kPi * static_cast<double>(j) / static_cast<double>(degree));
    x[j] = lo + 0.5 * (t + 1.0) * (hi - lo);
  }
  x.front() = lo;
  x.back() = hi;
  return x;
}

// Trefethen's cheb() with the negative-sum trick for the diagonal, for nodes ordered from
// -1 to 1 and mapped linearly to [lo, hi].
Eigen::MatrixXd chebyshev_derivative(std::size_t degree, double lo, double hi) {
  const auto n = static_cast<Eigen::Index>(degree);
  std::vector<double> t(degree + 1);
  for (Eigen::Index j = 0; j <= n; ++j) {
    t[j] = -std::cos(kPi * static_cast<double>(j) / static_cast<double>(n));
  }
  auto c = [n](Eigen::Index j) {
    const double base = (j == 0 || j == n) ? 2.0 : 1.0;
    return (j % 2 == 0) ? base : -base;
  };
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n + 1, n + 1);
  for (Eigen::Index i = 0; i <= n; ++i) {
    for (Eigen::Index j = 0; j <= n; ++j) {
      if (i != j) d(i, j) = (c(i) / c(j)) / (t[i] - t[j]);
    }
  }
  for (Eigen::Index i = 0; i <= n; ++i) {
    d(i, i) = -d.row(i).sum();
  }
  return d * (2.0 / (hi - lo));
}

double chebyshev_interpolate(std::span<const double> nodes, std::span<const double> values,
                             double x) {
  const std::size_t n = nodes.size() - 1;
  double num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j <= n; ++j) {
    const double diff = x - nodes[j];
    if (diff == 0.0) return values[j];
    double w = (j % 2 == 0) ? 1.0 : -1.0;
    if (j == 0 || j == n) w *= 0.5;
    num += w * values[j] / diff;
    den += w / diff;
  }
  return num / den;
}

double weighted_sinh_cosh(double w, double x) {
  if (w == 0.0 || x == 0.0) return 0.0;
  const double ax = std::abs(x);
  if (ax < 300.0) return w * std::sinh(x) * std::cosh(x);
  // sinh(x) cosh(x) = sinh(2x)/2 = exp(2|x|)(1 - exp(-4|x|))/4
  const double log_value = std::log(std::abs(w)) + 2.0 * ax - std::log(4.0);
  const double magnitude = std::exp(log_value);
  const double sign = (w < 0.0 ? -1.0 : 1.0) * (x < 0.0 ? -1.0 : 1.0);
  return sign * magnitude;
}

}  // namespace graftlab::numerics
