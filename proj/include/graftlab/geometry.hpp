#pragma once

#include "graftlab/common.hpp"

#include "json.hpp"

#include <functional>

namespace graftlab::geometry {

/// Model grafted surface: a flat cylinder of height s and circumference ell, glued along
/// its two boundary circles to hyperbolic Fermi strips of half-width a.
///
/// Coordinates are (x, y) with x longitudinal and y in [0, ell) circumferential. The metric
/// is dx^2 + G(x)^2 dy^2 with G = 1 on |x| <= s/2 and G = cosh(|x| - s/2) on the strips.
/// The seams x = -s/2 (left) and x = +s/2 (right) are closed geodesics.
class GraftedCollar {
 public:
  GraftedCollar(double ell, double s, double a,
                OuterBoundary outer_bc = OuterBoundary::dirichlet_zero);

  double ell() const { return ell_; }
  double s() const { return s_; }
  double a() const { return a_; }
  OuterBoundary outer_bc() const { return outer_bc_; }

  /// x-coordinate of the given seam.
  double seam(Side side) const { return side_sign(side) * 0.5 * s_; }
  /// Largest admissible |x|.
  double half_extent() const { return 0.5 * s_ + a_; }

  friend bool operator==(const GraftedCollar&, const GraftedCollar&) = default;

 private:
  double ell_;
  double s_;
  double a_;
  OuterBoundary outer_bc_;
};

/// G, G' and the two one-sided limits of G'' at a point. Away from a seam the two
/// second-derivative limits coincide.
struct MetricSample {
  double g = 0.0;
  double dg = 0.0;
  double d2g_minus = 0.0;  ///< limit from x-
  double d2g_plus = 0.0;   ///< limit from x+
};

MetricSample metric_coefficient(const GraftedCollar& chart, double x);

/// True when x lies on one of the seams of a chart with s > 0.
bool on_seam(const GraftedCollar& chart, double x);

/// Gaussian curvature -G''/G. Throws DomainError on a seam, where it jumps.
double gauss_curvature(const GraftedCollar& chart, double x);

/// Closed form 2 ell sinh(a) + ell s.
double total_area(const GraftedCollar& chart);
/// ell * integral of G dx by composite Simpson per stratum.
double total_area_quadrature(const GraftedCollar& chart, std::size_t panels = 10000);

/// Gudermannian gd(a) = integral_0^a sech.
double gudermannian(double a);

/// Conformal modulus (2 gd(a) + s) / ell of the collar.
double conformal_modulus(const GraftedCollar& chart);
/// (1/ell) * integral of dx / G by composite Simpson per stratum.
double conformal_modulus_quadrature(const GraftedCollar& chart, std::size_t panels = 10000);

/// Length ell * s of the weighted curve.
double grafted_length(double ell, double s);

/// Gaussian curvature of E dx^2 + F dy^2 at (x, y) by nested central differences of the
/// Brioschi formula for orthogonal metrics. Independent of any closed form.
double curvature_orthogonal_fd(const std::function<double(double, double)>& e,
                               const std::function<double(double, double)>& f, double x,
                               double y, double h);

nlohmann::json to_json(const GraftedCollar& chart);
GraftedCollar chart_from_json(const nlohmann::json& doc);

}  // namespace graftlab::geometry
