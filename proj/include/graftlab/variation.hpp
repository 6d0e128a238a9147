#pragma once

#include "graftlab/spectral.hpp"

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

namespace graftlab::variation {

using spectral::Complex;
using spectral::TraceModes;

/// Normal variation of a seam geodesic, measured positive in +x on both seams:
/// V(y) = mean + sum_{n != 0} modes[|n|-1] e^{i k_n y} (negative modes conjugate).
/// `mean` is lambda_0 on the left seam and rho_0 on the right one.
struct VariationField {
  Side side = Side::left;
  double ell = 1.0;
  double mean = 0.0;
  std::vector<Complex> modes;
  bool amended = false;
};

double value(const VariationField& v, double y);

/// Spectral second derivative V_yy at y.
double second_derivative(const VariationField& v, double y);

/// Fourier data of the harmonic function Im phi on the flat cylinder,
///
///   Im phi = u0 x + v0 + sum_{n != 0} (u_n cosh(k_n x) + v_n sinh(k_n x)) e^{i k_n y},
///
/// together with the additive constant of its harmonic conjugate Re phi (not fixed by
/// Im phi). phi is holomorphic in z = x + i y.
struct QuadMode {
  Complex u{};
  Complex v{};
};

struct QuadDiffModes {
  double ell = 1.0;
  double s = 0.0;
  double u0 = 0.0;
  double v0 = 0.0;
  double re_mean = 0.0;
  std::vector<QuadMode> modes;

  /// Im phi as a harmonic series (u -> c, v -> d), reusing the spectral machinery.
  spectral::FourierSolution im_part() const;
  /// Coefficient 2-norm, used as the size estimate of the infinitesimal Hopf differential.
  double norm() const;
  QuadDiffModes scaled(double factor) const;
};

/// Seeded random Im phi data with O(1) seam values (as spectral::random_solution) and
/// normal u0, v0, re_mean.
QuadDiffModes random_quad(double ell, double s, std::size_t truncation, std::uint64_t seed,
                          double amplitude = 1.0);

double im_phi(const QuadDiffModes& q, double x, double y);
/// Harmonic conjugate of Im phi: re_mean - u0 y + sum i(u_n sinh + v_n cosh) e^{i k_n y}.
/// With u0 != 0 this is not periodic and is evaluated on y in [0, ell).
double re_phi(const QuadDiffModes& q, double x, double y);

/// Solves V_yy = -1/2 (d_x H)_0 on a seam from the flat Neumann trace. The constant
/// mode is free and set to `mean_value`. Throws DomainError("no periodic solution") when
/// the trace mean c0 is nonzero.
VariationField solve_flat_variation(const TraceModes& flat_neumann, double mean_value);

/// (d_x H)_{-1} = -2 (V_yy - V): mean 2 lambda_0, mode n 2 (1 + k_n^2) lambda_n.
TraceModes hyperbolic_neumann(const VariationField& v);

/// Closed-form variation coefficient lambda_n / rho_n of mode n >= 1 written in c_n, d_n:
/// (ell / 4 pi n) (-/+ c_n sinh(pi n s/ell) + d_n cosh(pi n s/ell)).
Complex flat_variation_coefficient(const spectral::FourierSolution& sol, Side side, int n);

/// Closed-form hyperbolic-side Neumann trace written in c_n, d_n and the seam mean.
TraceModes hyperbolic_neumann_closed(const spectral::FourierSolution& sol, Side side,
                                     double mean_value);

/// Amended variation W_yy = -1/2 (d_x H)_0 + d_y Im phi on a seam:
/// lambda*_n = lambda_n + (ell / 2 pi i n)(Im phi seam coefficient).
VariationField solve_amended_variation(const TraceModes& flat_neumann, const QuadDiffModes& q,
                                       double mean_value);

/// Hyperbolic-side Neumann data for an amended field: -2 (W_yy - W) applied to the
/// amended coefficients.
TraceModes extended_hyperbolic_neumann(const VariationField& w);

/// The same trace assembled term by term from c_n, d_n, u_n, v_n:
/// mean 2 lambda_0, mode (4 pi^2 n^2 + ell^2)[(1/2 pi n ell)(-/+ c S + d C) + (1/pi i n ell)(u C -/+ v S)].
TraceModes extended_hyperbolic_neumann_closed(const spectral::FourierSolution& sol,
                                              const QuadDiffModes& q, Side side,
                                              double mean_value);

/// Second route: solves V_yy = forcing(y) by dense Fourier collocation on `nodes`
/// equispaced points with the mean pinned to `mean_value`, then reads off modes 1..truncation.
/// Throws DomainError when the forcing has nonzero mean (relative to its size).
VariationField solve_periodic_collocation(const std::function<double(double)>& forcing, Side side,
                                          double ell, double mean_value, std::size_t truncation,
                                          std::size_t nodes = 128);

/// -2 (V_yy - V) sampled by Fourier collocation on `nodes` points and transformed back to a
/// trace, independent of the closed-form mode map.
TraceModes hyperbolic_neumann_collocation(const VariationField& v, std::size_t nodes = 128);

}  // namespace graftlab::variation
