#include "graftlab/family.hpp"

#include "graftlab/numerics.hpp"

#include <cmath>
#include <string>

namespace graftlab::geometry {

Stratum stratum_of(const GraftedCollar& chart, double x) {
  return std::abs(x) <= 0.5 * chart.s() || on_seam(chart, x) ? Stratum::flat
                                                             : Stratum::hyperbolic;
}

GlobalField::GlobalField(GraftedCollar chart, spectral::FourierSolution flat,
                         spectral::TraceModes left_neumann, spectral::TraceModes right_neumann)
    : chart_(chart),
      flat_(std::move(flat)),
      left_dirichlet_(spectral::dirichlet_trace(flat_, Side::left)),
      right_dirichlet_(spectral::dirichlet_trace(flat_, Side::right)),
      left_neumann_(std::move(left_neumann)),
      right_neumann_(std::move(right_neumann)) {
  if (flat_.ell != chart_.ell() || flat_.s != chart_.s()) {
    throw DomainError("field and chart dimensions differ");
  }
  if (left_neumann_.side != Side::left || right_neumann_.side != Side::right) {
    throw DomainError("hyperbolic traces attached to the wrong seams");
  }
}

GlobalField GlobalField::matched(const GraftedCollar& chart,
                                 const spectral::FourierSolution& flat, double lambda0,
                                 double rho0) {
  const auto v_left =
      variation::solve_flat_variation(spectral::neumann_trace_flat(flat, Side::left), lambda0);
  const auto v_right =
      variation::solve_flat_variation(spectral::neumann_trace_flat(flat, Side::right), rho0);
  return GlobalField(chart, flat, variation::hyperbolic_neumann(v_left),
                     variation::hyperbolic_neumann(v_right));
}

const spectral::TraceModes& GlobalField::dirichlet(Side side) const {
  return side == Side::left ? left_dirichlet_ : right_dirichlet_;
}

const spectral::TraceModes& GlobalField::hyperbolic_neumann(Side side) const {
  return side == Side::left ? left_neumann_ : right_neumann_;
}

double GlobalField::value(double x, double y) const {
  return value(x, y, stratum_of(chart_, x));
}

double GlobalField::value(double x, double y, Stratum stratum) const {
  if (stratum == Stratum::flat) return spectral::evaluate_continued(flat_, x, y);
  const Side side = nearest_seam(x);
  const double offset = x - chart_.seam(side);
  return spectral::trace_value(dirichlet(side), y) +
         offset * spectral::trace_value(hyperbolic_neumann(side), y);
}

double GlobalField::dx(double x, double y, Stratum stratum) const {
  if (stratum == Stratum::flat) return spectral::evaluate_dx_continued(flat_, x, y);
  return spectral::trace_value(hyperbolic_neumann(nearest_seam(x)), y);
}

namespace {

struct CoefficientJet {
  double g = 1.0;
  double dg = 0.0;
};

CoefficientJet circumferential(const GraftedCollar& chart, double x, Stratum stratum) {
  if (std::abs(x) > chart.half_extent() * (1.0 + 1e-14)) {
    throw DomainError("x = " + std::to_string(x) + " outside the collar");
  }
  if (stratum == Stratum::flat) return {};
  const double u = std::abs(x) - 0.5 * chart.s();
  const double sign = x < 0.0 ? -1.0 : 1.0;
  return {std::cosh(u), sign * std::sinh(u)};
}

bool has_quad(const ConformalFamily& fam) { return fam.quad.has_value(); }

}  // namespace

MetricJet family_metric_jet(const ConformalFamily& fam, double t, double x, double y,
                            Stratum stratum) {
  const CoefficientJet gj = circumferential(fam.base, x, stratum);
  const double h = 1.0 + t * fam.hdot.value(x, y, stratum);
  if (!(h > 0.0)) throw DomainError("H_t is not positive at x = " + std::to_string(x));
  const double hx = t * fam.hdot.dx(x, y, stratum);

  MetricJet jet;
  jet.g.xx = 1.0 / h;
  jet.g.yy = gj.g * gj.g / h;
  jet.dg_dx.xx = -hx / (h * h);
  jet.dg_dx.yy = 2.0 * gj.g * gj.dg / h - gj.g * gj.g * hx / (h * h);

  if (has_quad(fam) && t != 0.0) {
    if (stratum != Stratum::flat) {
      throw DomainError("quadratic differential data live on the flat stratum only");
    }
    const auto& q = *fam.quad;
    const auto im = q.im_part();
    const double re = variation::re_phi(q, x, y);
    const double im_value = spectral::evaluate(im, x, y);
    const double im_x = spectral::evaluate_dx(im, x, y);
    // Cauchy-Riemann in z = x + iy: (Re phi)_x = (Im phi)_y.
    const double im_y = spectral::evaluate_dy(im, x, y);
    jet.g.xx -= 2.0 * t * re;
    jet.g.yy += 2.0 * t * re;
    jet.g.xy = 2.0 * t * im_value;
    jet.dg_dx.xx -= 2.0 * t * im_y;
    jet.dg_dx.yy += 2.0 * t * im_y;
    jet.dg_dx.xy = 2.0 * t * im_x;
  }
  return jet;
}

MetricTensor family_metric(const ConformalFamily& fam, double t, double x, double y) {
  return family_metric_jet(fam, t, x, y, stratum_of(fam.base, x)).g;
}

double circle_length(const ConformalFamily& fam, double t, double x0, std::size_t panels) {
  auto speed = [&](double y) { return std::sqrt(family_metric(fam, t, x0, y).yy); };
  return numerics::gauss_legendre(speed, 0.0, fam.base.ell(), panels);
}

double circle_length_rate(const ConformalFamily& fam, double x0, double h) {
  auto central = [&](double step) {
    return (circle_length(fam, step, x0) - circle_length(fam, -step, x0)) / (2.0 * step);
  };
  const double coarse = central(h);
  const double fine = central(0.5 * h);
  return (4.0 * fine - coarse) / 3.0;
}

}  // namespace graftlab::geometry
