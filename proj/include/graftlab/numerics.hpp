#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace graftlab::numerics {

using RealFn = std::function<double(double)>;

/// Composite Simpson rule on [lo, hi]; `panels` is rounded up to an even count.
double simpson(const RealFn& f, double lo, double hi, std::size_t panels);

/// Composite 20-point Gauss-Legendre rule over `panels` equal sub-intervals.
double gauss_legendre(const RealFn& f, double lo, double hi, std::size_t panels = 1);

/// Trapezoid rule for a `period`-periodic integrand sampled at `points` equispaced nodes.
double periodic_trapezoid(const RealFn& f, double period, std::size_t points);

/// Equispaced periodic nodes y_j = j * period / points.
std::vector<double> periodic_nodes(double period, std::size_t points);

/// Dense Fourier-collocation differentiation matrices on `points` equispaced nodes of
/// [0, period). `points` must be even.
Eigen::MatrixXd fourier_first_derivative(std::size_t points, double period);
Eigen::MatrixXd fourier_second_derivative(std::size_t points, double period);

/// Discrete Fourier coefficient of index n for samples on periodic_nodes:
/// (1/M) sum_j f_j exp(-2 pi i n y_j / period).
std::complex<double> fourier_coefficient(std::span<const double> samples, int n);

/// Chebyshev-Gauss-Lobatto nodes mapped to [lo, hi], ordered increasingly.
std::vector<double> chebyshev_nodes(std::size_t degree, double lo, double hi);

/// Differentiation matrix for chebyshev_nodes(degree, lo, hi).
Eigen::MatrixXd chebyshev_derivative(std::size_t degree, double lo, double hi);

/// Barycentric interpolation on Chebyshev-Gauss-Lobatto nodes.
double chebyshev_interpolate(std::span<const double> nodes, std::span<const double> values,
                             double x);

/// w * sinh(x) * cosh(x) evaluated without overflow for large x and small w >= 0.
double weighted_sinh_cosh(double w, double x);

}  // namespace graftlab::numerics
