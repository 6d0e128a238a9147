#include "graftlab/geometry.hpp"

#include "graftlab/numerics.hpp"

#include <cmath>
#include <string>

namespace graftlab::geometry {

namespace {

constexpr double kSeamTolerance = 1e-14;

void require_finite(double value, const char* name) {
  if (!std::isfinite(value)) throw DomainError(std::string(name) + " must be finite");
}

}  // namespace

GraftedCollar::GraftedCollar(double ell, double s, double a, OuterBoundary outer_bc)
    : ell_(ell), s_(s), a_(a), outer_bc_(outer_bc) {
  require_finite(ell, "ell");
  require_finite(s, "s");
  require_finite(a, "a");
  if (ell <= 0.0) throw DomainError("ell must be positive");
  if (s < 0.0) throw DomainError("s must be non-negative");
  if (a <= 0.0) throw DomainError("a must be positive");
}

bool on_seam(const GraftedCollar& chart, double x) {
  if (chart.s() == 0.0) return false;
  return std::abs(std::abs(x) - 0.5 * chart.s()) <= kSeamTolerance * std::max(1.0, chart.s());
}

MetricSample metric_coefficient(const GraftedCollar& chart, double x) {
  const double limit = chart.half_extent();
  if (!(std::abs(x) <= limit * (1.0 + kSeamTolerance))) {
    throw DomainError("x = " + std::to_string(x) + " outside the collar");
  }
  const double half = 0.5 * chart.s();
  if (on_seam(chart, x)) {
    // Flat side has G'' = 0, hyperbolic side cosh(0) = 1.
    return x > 0.0 ? MetricSample{1.0, 0.0, 0.0, 1.0} : MetricSample{1.0, 0.0, 1.0, 0.0};
  }
  if (std::abs(x) < half) return {1.0, 0.0, 0.0, 0.0};
  const double u = std::abs(x) - half;
  const double sign = x < 0.0 ? -1.0 : 1.0;
  const double ch = std::cosh(u);
  return {ch, sign * std::sinh(u), ch, ch};
}

double gauss_curvature(const GraftedCollar& chart, double x) {
  if (on_seam(chart, x)) throw DomainError("seam: curvature discontinuous");
  const MetricSample m = metric_coefficient(chart, x);
  return -m.d2g_plus / m.g;
}

double total_area(const GraftedCollar& chart) {
  return 2.0 * chart.ell() * std::sinh(chart.a()) + chart.ell() * chart.s();
}

namespace {

// Integrates f(G(x)) over the three strata separately so each piece is smooth.
double integrate_strata(const GraftedCollar& chart, const std::function<double(double)>& f,
                        std::size_t panels) {
  const double half = 0.5 * chart.s();
  const double extent = chart.half_extent();
  const double total = 2.0 * chart.a() + chart.s();
  auto share = [&](double width) {
    return std::max<std::size_t>(2, static_cast<std::size_t>(
                                        std::ceil(static_cast<double>(panels) * width / total)));
  };
  auto integrand = [&](double x) { return f(metric_coefficient(chart, x).g); };
  double sum = 0.0;
  sum += numerics::simpson(integrand, -extent, -half, share(chart.a()));
  if (chart.s() > 0.0) sum += numerics::simpson(integrand, -half, half, share(chart.s()));
  sum += numerics::simpson(integrand, half, extent, share(chart.a()));
  return sum;
}

}  // namespace

double total_area_quadrature(const GraftedCollar& chart, std::size_t panels) {
  return chart.ell() * integrate_strata(chart, [](double g) { return g; }, panels);
}

double gudermannian(double a) { return std::atan(std::sinh(a)); }

double conformal_modulus(const GraftedCollar& chart) {
  return (2.0 * gudermannian(chart.a()) + chart.s()) / chart.ell();
}

double conformal_modulus_quadrature(const GraftedCollar& chart, std::size_t panels) {
  return integrate_strata(chart, [](double g) { return 1.0 / g; }, panels) / chart.ell();
}

double grafted_length(double ell, double s) {
  if (ell <= 0.0) throw DomainError("ell must be positive");
  if (s < 0.0) throw DomainError("s must be non-negative");
  return ell * s;
}

double curvature_orthogonal_fd(const std::function<double(double, double)>& e,
                               const std::function<double(double, double)>& f, double x,
                               double y, double h) {
  // K = -1/(2 sqrt(EF)) [ d/dx (F_x / sqrt(EF)) + d/dy (E_y / sqrt(EF)) ]
  auto root = [&](double px, double py) { return std::sqrt(e(px, py) * f(px, py)); };
  auto fx_over_root = [&](double px, double py) {
    return (f(px + h, py) - f(px - h, py)) / (2.0 * h) / root(px, py);
  };
  auto ey_over_root = [&](double px, double py) {
    return (e(px, py + h) - e(px, py - h)) / (2.0 * h) / root(px, py);
  };
  const double ddx = (fx_over_root(x + h, y) - fx_over_root(x - h, y)) / (2.0 * h);
  const double ddy = (ey_over_root(x, y + h) - ey_over_root(x, y - h)) / (2.0 * h);
  return -(ddx + ddy) / (2.0 * root(x, y));
}

nlohmann::json to_json(const GraftedCollar& chart) {
  return nlohmann::json{{"ell", chart.ell()},
                        {"s", chart.s()},
                        {"a", chart.a()},
                        {"outer_bc", std::string(to_string(chart.outer_bc()))}};
}

GraftedCollar chart_from_json(const nlohmann::json& doc) {
  try {
    const auto bc = doc.contains("outer_bc")
                        ? outer_boundary_from_string(doc.at("outer_bc").get<std::string>())
                        : OuterBoundary::dirichlet_zero;
    return GraftedCollar(doc.at("ell").get<double>(), doc.at("s").get<double>(),
                         doc.at("a").get<double>(), bc);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed chart document: ") + e.what());
  }
}

}  // namespace graftlab::geometry
