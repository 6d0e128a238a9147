#pragma once

#include "graftlab/geometry.hpp"
#include "graftlab/spectral.hpp"
#include "graftlab/variation.hpp"

#include <optional>
#include <vector>

namespace graftlab::geometry {

enum class Stratum { flat, hyperbolic };

/// Stratum containing x; seam points count as flat.
Stratum stratum_of(const GraftedCollar& chart, double x);

/// The infinitesimal conformal factor on the whole collar. On the flat stratum it is the
/// harmonic series; on each strip it is continued to first order from the seam,
///
///   H(x, y) = D(y) + (x - x_seam) N(y),
///
/// with D the Dirichlet trace and N the hyperbolic-side x-derivative of that seam.
class GlobalField {
 public:
  GlobalField(GraftedCollar chart, spectral::FourierSolution flat,
              spectral::TraceModes left_neumann, spectral::TraceModes right_neumann);

  /// Continuation whose hyperbolic-side derivative is the one generated by the seam
  /// variation fields with the given means, so both one-sided variation equations hold.
  static GlobalField matched(const GraftedCollar& chart, const spectral::FourierSolution& flat,
                             double lambda0, double rho0);

  const GraftedCollar& chart() const { return chart_; }
  const spectral::FourierSolution& flat() const { return flat_; }
  const spectral::TraceModes& dirichlet(Side side) const;
  const spectral::TraceModes& hyperbolic_neumann(Side side) const;

  double value(double x, double y) const;
  double value(double x, double y, Stratum stratum) const;
  /// x-derivative computed in the given stratum (one-sided at a seam).
  double dx(double x, double y, Stratum stratum) const;

 private:
  Side nearest_seam(double x) const { return x < 0.0 ? Side::left : Side::right; }

  GraftedCollar chart_;
  spectral::FourierSolution flat_;
  spectral::TraceModes left_dirichlet_;
  spectral::TraceModes right_dirichlet_;
  spectral::TraceModes left_neumann_;
  spectral::TraceModes right_neumann_;
};

/// First-order family gr(sigma_0) / H_t, H_t = 1 + t H, optionally deformed by the
/// quadratic differential with Im phi data `quad` (non-conformal directions).
struct ConformalFamily {
  GraftedCollar base;
  GlobalField hdot;
  std::optional<variation::QuadDiffModes> quad;
  double s_rate = 0.0;
  std::vector<double> t_eval;
};

/// Components in (x, y) order.
struct MetricTensor {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;
};

/// Metric with its x-derivative at a point of a chosen stratum.
struct MetricJet {
  MetricTensor g;
  MetricTensor dg_dx;
};

/// g_xx = 1/H_t - 2t Re phi, g_xy = 2t Im phi, g_yy = G^2/H_t + 2t Re phi, with the phi
/// terms present only when the family carries quadratic-differential data. Throws
/// DomainError when H_t <= 0, or when phi data are requested off the flat stratum.
MetricTensor family_metric(const ConformalFamily& fam, double t, double x, double y);

MetricJet family_metric_jet(const ConformalFamily& fam, double t, double x, double y,
                            Stratum stratum);

/// Length of the circle x = x0 under the family metric at parameter t, by Gauss-Legendre
/// quadrature in y.
double circle_length(const ConformalFamily& fam, double t, double x0,
                     std::size_t panels = 64);

/// Central difference of circle_length at t = 0 with step h, Richardson-extrapolated
/// against step h/2.
double circle_length_rate(const ConformalFamily& fam, double x0, double h);

}  // namespace graftlab::geometry
