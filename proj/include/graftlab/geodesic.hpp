#pragma once

#include "graftlab/family.hpp"
#include "graftlab/variation.hpp"

#include <vector>

namespace graftlab::variation {

struct GeodesicOptions {
  std::size_t nodes = 256;  ///< collocation points M on the circle
  double fd_step = 0.0;     ///< Jacobian difference step; 0 selects 1e-4 * t
  int max_iterations = 40;
  double tolerance = 1e-13;
};

/// Closed geodesic of the family metric near a seam, written as x = X(y).
struct GeodesicResult {
  Side side = Side::left;
  double t = 0.0;
  std::vector<double> y;
  std::vector<double> displacement;  ///< (X(y) - x_seam) / t, zero when t = 0
  int iterations = 0;
  double residual = 0.0;
  int crease_nodes = 0;  ///< nodes left on the other side of the seam than their stratum
};

/// Newton iteration on the Fourier-collocated Euler-Lagrange equation of the length of
/// x = X(y) in the metric A dx^2 + 2B dx dy + C dy^2:
///
///   d/dy[(A X' + B) / sqrt(Q)] - (A_x X'^2 + 2 B_x X' + C_x) / (2 sqrt(Q)) = 0,
///
/// Q = A X'^2 + 2B X' + C, with metric partials taken on the side of the seam X lies on.
/// Newton runs with the stratum of each node frozen and reassigns strata until the
/// assignment repeats. Continuation in t from a circle just inside the strip. Throws
/// SolveError on non-convergence.
GeodesicResult geodesic_oracle(const geometry::ConformalFamily& fam, Side side, double t,
                               const GeodesicOptions& options = {});

/// (X(t) - X(-t)) / 2t sampled on the collocation nodes.
std::vector<double> centered_displacement(const geometry::ConformalFamily& fam, Side side,
                                          double t, const GeodesicOptions& options = {});

struct GeodesicComparison {
  double rel_err = 0.0;             ///< centered difference at t
  double rel_err_half = 0.0;        ///< centered difference at t / 2
  double rel_err_richardson = 0.0;  ///< 2 C(t/2) - C(t)
  double rel_err_raw = 0.0;         ///< one-sided X(t) / t
  double max_abs_variation = 0.0;
  bool decreasing = false;
};

/// Errors max_y |D - V| / max_y |V| of the oracle displacement D against the closed-form
/// variation V. When V vanishes identically the absolute error is reported.
GeodesicComparison compare_with_variation(const geometry::ConformalFamily& fam, Side side,
                                          const VariationField& v, double t,
                                          const GeodesicOptions& options = {});

/// Family whose hyperbolic-side continuation is matched to the variation fields with
/// means lambda0 and rho0 (see GlobalField::matched).
geometry::ConformalFamily make_matched_family(const geometry::GraftedCollar& chart,
                                              const spectral::FourierSolution& flat,
                                              double lambda0, double rho0);

}  // namespace graftlab::variation
