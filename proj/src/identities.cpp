#include "graftlab/identities.hpp"

#include "graftlab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace graftlab::identities {

namespace {

using spectral::Complex;

double mode_weight(double n, double ell) { return 4.0 * kPi * kPi * n * n + ell * ell; }

// (|c|^2 + |d|^2) sinh(x) cosh(x), evaluated through c cosh and d sinh; stable for large x.
double pair_energy(Complex c, Complex d, double x) {
  if (x == 0.0) return 0.0;
  if (x > 700.0) return numerics::weighted_sinh_cosh(std::norm(c) + std::norm(d), x);
  const double th = std::tanh(x);
  return std::norm(c * std::cosh(x)) * th + std::norm(d * std::sinh(x)) / th;
}

// Im[v conj(c) + u conj(d)] sinh(x) cosh(x), regrouped the same way.
double cross_pair(Complex c, Complex d, Complex u, Complex v, double x) {
  if (x == 0.0) return 0.0;
  const double sh = std::sinh(x);
  const double ch = std::cosh(x);
  return ((v * sh) * std::conj(c * ch) + (u * ch) * std::conj(d * sh)).imag();
}

double sum_with_argument(const spectral::FourierSolution& sol, double s_over_ell) {
  double sum = 0.0;
  for (std::size_t i = 0; i < sol.modes.size(); ++i) {
    const double n = static_cast<double>(i + 1);
    const double x = kPi * n * s_over_ell;
    sum += kPrimedSumWeight / n * mode_weight(n, sol.ell) *
           pair_energy(sol.modes[i].c, sol.modes[i].d, x);
  }
  return -sum / kPi;
}

double cross_with_argument(const spectral::FourierSolution& sol,
                           const variation::QuadDiffModes& q, double s_over_ell) {
  double sum = 0.0;
  const std::size_t count = std::min(sol.modes.size(), q.modes.size());
  for (std::size_t i = 0; i < count; ++i) {
    const double n = static_cast<double>(i + 1);
    const double x = kPi * n * s_over_ell;
    sum += mode_weight(n, sol.ell) * kCrossTermWeight / (kPi * n) *
           cross_pair(sol.modes[i].c, sol.modes[i].d, q.modes[i].u, q.modes[i].v, x);
  }
  return -sum;
}

double total(const std::vector<Term>& terms) {
  double out = 0.0;
  for (const auto& t : terms) out += t.value;
  return out;
}

}  // namespace

double IdentityReport::term(const std::string& label) const {
  for (const auto& t : terms) {
    if (t.label == label) return t.value;
  }
  throw DomainError("report " + identity + " has no term " + label);
}

IdentityReport make_report(std::string identity, std::vector<Term> terms, double lhs, double rhs,
                           double tol, std::vector<std::string> notes) {
  IdentityReport r;
  r.identity = std::move(identity);
  r.terms = std::move(terms);
  r.lhs = lhs;
  r.rhs = rhs;
  r.tol = tol;
  r.notes = std::move(notes);
  r.abs_err = std::abs(lhs - rhs);
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  r.rel_err = scale > 0.0 ? r.abs_err / scale : 0.0;
  r.pass = std::isfinite(r.abs_err) && (r.abs_err <= tol || r.rel_err <= tol);
  return r;
}

IdentityReport make_bound_report(std::string identity, std::vector<Term> terms, double value,
                                 double bound, bool pass, std::vector<std::string> notes) {
  IdentityReport r;
  r.identity = std::move(identity);
  r.terms = std::move(terms);
  r.lhs = value;
  r.rhs = bound;
  r.tol = bound;
  r.abs_err = std::abs(value);
  r.rel_err = std::numeric_limits<double>::quiet_NaN();
  r.pass = pass;
  r.notes = std::move(notes);
  return r;
}

nlohmann::json to_json(const IdentityReport& report) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : report.terms) terms.push_back({{"label", t.label}, {"value", t.value}});
  auto number = [](double v) -> nlohmann::json {
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
  };
  nlohmann::json doc = {{"identity", report.identity},
                        {"terms", terms},
                        {"lhs", number(report.lhs)},
                        {"rhs", number(report.rhs)},
                        {"abs_err", number(report.abs_err)},
                        {"rel_err", number(report.rel_err)},
                        {"tol", number(report.tol)},
                        {"pass", report.pass}};
  if (!report.notes.empty()) doc["notes"] = report.notes;
  return doc;
}

double re_phi_integral(const variation::QuadDiffModes& q) {
  return q.ell * q.re_mean - 0.5 * q.u0 * q.ell * q.ell;
}

double slice_difference(const Configuration& config) {
  const double s = config.chart.s();
  double out = -0.5 * s * config.sol.d0 - config.s_rate;
  if (config.quad) out -= s / config.chart.ell() * re_phi_integral(*config.quad);
  return out;
}

void apply_slice_condition(Configuration& config) {
  const double diff = slice_difference(config);
  config.left.mean = 0.5 * diff;
  config.right.mean = -0.5 * diff;
}

Configuration make_configuration(const geometry::GraftedCollar& chart,
                                 const spectral::FourierSolution& sol, double s_rate,
                                 std::optional<variation::QuadDiffModes> quad) {
  if (sol.ell != chart.ell() || sol.s != chart.s()) {
    throw DomainError("solution and chart dimensions differ");
  }
  const auto left_trace = spectral::neumann_trace_flat(sol, Side::left);
  const auto right_trace = spectral::neumann_trace_flat(sol, Side::right);
  Configuration config{chart, sol, {}, {}, s_rate, std::move(quad)};
  if (config.quad) {
    config.left = variation::solve_amended_variation(left_trace, *config.quad, 0.0);
    config.right = variation::solve_amended_variation(right_trace, *config.quad, 0.0);
  } else {
    config.left = variation::solve_flat_variation(left_trace, 0.0);
    config.right = variation::solve_flat_variation(right_trace, 0.0);
  }
  apply_slice_condition(config);
  return config;
}

double spectral_sum(const spectral::FourierSolution& sol) {
  return sum_with_argument(sol, sol.s / sol.ell);
}

double spectral_sum_length_form(const spectral::FourierSolution& sol, double length) {
  return sum_with_argument(sol, length / sol.ell / sol.ell);
}

double boundary_term_closed(const spectral::FourierSolution& sol,
                            const variation::VariationField& v_left,
                            const variation::VariationField& v_right) {
  return 2.0 * sol.ell * sol.d0 * (v_left.mean - v_right.mean) + spectral_sum(sol);
}

double boundary_term_quadrature(const spectral::TraceModes& dirichlet_left,
                                const spectral::TraceModes& dirichlet_right,
                                const spectral::TraceModes& neumann_left,
                                const spectral::TraceModes& neumann_right,
                                std::size_t points) {
  if (dirichlet_left.truncation() != neumann_left.truncation() ||
      dirichlet_right.truncation() != neumann_right.truncation() ||
      dirichlet_left.truncation() != dirichlet_right.truncation()) {
    throw DomainError("boundary term: mismatched truncations");
  }
  const double ell = dirichlet_left.ell;
  auto integrand = [&](double y) {
    return spectral::trace_value(dirichlet_left, y) * spectral::trace_value(neumann_left, y) -
           spectral::trace_value(dirichlet_right, y) * spectral::trace_value(neumann_right, y);
  };
  return numerics::periodic_trapezoid(integrand, ell, points);
}

double cross_term(const spectral::FourierSolution& sol, const variation::QuadDiffModes& q) {
  return cross_with_argument(sol, q, sol.s / sol.ell);
}

double extended_boundary_term_closed(const spectral::FourierSolution& sol,
                                     const variation::QuadDiffModes& q,
                                     const variation::VariationField& w_left,
                                     const variation::VariationField& w_right) {
  return 2.0 * sol.ell * sol.d0 * (w_left.mean - w_right.mean) + spectral_sum(sol) +
         cross_term(sol, q);
}

double extended_boundary_term_quadrature(const spectral::FourierSolution& sol,
                                         const variation::VariationField& w_left,
                                         const variation::VariationField& w_right,
                                         std::size_t points) {
  auto dl = spectral::dirichlet_trace(sol, Side::left);
  auto dr = spectral::dirichlet_trace(sol, Side::right);
  auto nl = variation::extended_hyperbolic_neumann(w_left);
  auto nr = variation::extended_hyperbolic_neumann(w_right);
  const std::size_t count = std::max(dl.modes.size(), nl.modes.size());
  for (auto* t : {&dl, &dr, &nl, &nr}) t->modes.resize(count);
  return boundary_term_quadrature(dl, dr, nl, nr, points);
}

namespace {

std::vector<Term> slice_terms(const Configuration& config, double length) {
  const double s = config.chart.s();
  const double d0 = config.sol.d0;
  std::vector<Term> terms;
  terms.push_back({"-l s d0^2", -length * d0 * d0});
  if (config.s_rate != 0.0) {
    if (s == 0.0) throw DomainError("s_rate / s undefined at s = 0");
    terms.push_back({"-2 l s d0 (s'/s)", -2.0 * length * d0 * (config.s_rate / s)});
  }
  return terms;
}

}  // namespace

MasterResult master_identity(const Configuration& config,
                             const hypersolve::HyperbolicField& hyper, double tol) {
  if (hyper.profiles.size() < config.sol.truncation() + 1) {
    throw DomainError("master identity: unsolved hyperbolic modes");
  }
  const auto greens = hypersolve::greens_residual(hyper);
  const double energy = hypersolve::interior_integral(hyper).energy;

  std::vector<Term> terms{{"-int(|grad H|^2+2H^2)", -energy},
                          {"-(1/pi)sum'", spectral_sum(config.sol)}};
  const double length = config.chart.ell() * config.chart.s();
  for (auto& t : slice_terms(config, length)) terms.push_back(std::move(t));

  const double lhs = total(terms);
  std::vector<Term> reported = terms;
  reported.push_back({"outer_green", greens.outer_term});

  MasterResult out;
  out.report = make_report(
      "master_identity", reported, lhs, -greens.outer_term, tol,
      {"lhs: sum of the interior, spectral and slice terms; rhs: minus the outer Green term",
       "holds only for the zero field; a nonzero field gives a strictly negative total"});
  out.all_terms_nonpositive =
      std::all_of(terms.begin(), terms.end(), [](const Term& t) { return t.value <= 0.0; });
  out.contradiction = out.all_terms_nonpositive && !out.report.pass && lhs < -greens.outer_term;
  return out;
}

IdentityReport slice_condition(const spectral::FourierSolution& sol,
                               const variation::VariationField& v_left,
                               const variation::VariationField& v_right, double s_rate,
                               double tol) {
  const double diff = v_left.mean - v_right.mean;
  const double required = -0.5 * sol.s * sol.d0 - s_rate;
  return make_report("slice_condition",
                     {{"lambda0", v_left.mean},
                      {"rho0", v_right.mean},
                      {"s d0/2", 0.5 * sol.s * sol.d0},
                      {"s_rate", s_rate}},
                     diff, required, tol);
}

double area_derivative_geometric(const spectral::FourierSolution& sol, double s_rate) {
  if (sol.c0 != 0.0) throw DomainError("area derivative requires c0 = 0");
  return -0.5 * sol.d0 * sol.ell * sol.s + sol.ell * s_rate;
}

double area_derivative_analytic(const spectral::FourierSolution& sol,
                                const variation::VariationField& v_left,
                                const variation::VariationField& v_right) {
  return -sol.ell * (v_left.mean - v_right.mean) - sol.d0 * sol.ell * sol.s;
}

IdentityReport area_two_methods(const Configuration& config, double tol) {
  double geometric = area_derivative_geometric(config.sol, config.s_rate);
  if (config.quad) geometric += config.chart.s() * re_phi_integral(*config.quad);
  const double analytic = area_derivative_analytic(config.sol, config.left, config.right);
  return make_report("area_two_methods",
                     {{"geometric", geometric}, {"analytic", analytic}}, geometric, analytic,
                     tol);
}

IdentityReport hyperbolic_mass_check(const hypersolve::HyperbolicField& hyper, double tol) {
  const auto flux = hypersolve::mass_flux(hyper);
  return make_report("hyperbolic_mass_flux",
                     {{"int H", flux.interior},
                      {"seam_flux", flux.seam_flux},
                      {"outer_flux", flux.outer_flux}},
                     flux.interior, flux.seam_flux + flux.outer_flux, tol,
                     {"seam_flux equals l(lambda0 - rho0) for DtN-matched seam means"});
}

double arc_length_derivative(const spectral::FourierSolution& sol,
                             const std::optional<variation::QuadDiffModes>& q, Side side) {
  const double x = side_sign(side) * 0.5 * sol.s;
  auto integrand = [&](double y) {
    double value = spectral::evaluate(sol, x, y);
    if (q) value -= 2.0 * variation::re_phi(*q, x, y);
    return value;
  };
  return -0.5 * numerics::gauss_legendre(integrand, 0.0, sol.ell, 64);
}

ExtendedResult extended_master_identity(const Configuration& config,
                                        const hypersolve::HyperbolicField& hyper, double tol) {
  if (!config.quad) throw DomainError("extended identity needs quadratic-differential data");
  const auto& q = *config.quad;
  const double ell = config.chart.ell();
  const double s = config.chart.s();
  const double length = ell * s;
  const auto greens = hypersolve::greens_residual(hyper);
  const double energy = hypersolve::interior_integral(hyper).energy;

  ExtendedResult out;
  out.remainder = 2.0 * config.sol.d0 * (-s * re_phi_integral(q));
  const double cross = cross_term(config.sol, q);
  out.non_conformal = cross + out.remainder;

  auto assemble = [&](double spectral, double cross_value, double len) {
    std::vector<Term> terms{{"-int(|grad H|^2+2H^2)", -energy}, {"-(1/pi)sum'", spectral}};
    for (auto& t : slice_terms(config, len)) terms.push_back(std::move(t));
    terms.push_back({"cross", cross_value});
    terms.push_back({"remainder", out.remainder});
    return terms;
  };

  std::vector<Term> terms = assemble(spectral_sum(config.sol), cross, length);
  const double lhs = total(terms);
  terms.push_back({"outer_green", greens.outer_term});
  out.report = make_report("extended_master_identity", terms, lhs, -greens.outer_term, tol,
                           {"holds only for the zero field"});

  std::vector<Term> length_terms =
      assemble(spectral_sum_length_form(config.sol, length),
               cross_with_argument(config.sol, q, length / ell / ell), length);
  const double length_total = total(length_terms);
  out.length_form = make_report("extended_master_length_form", length_terms, length_total, lhs,
                                kAlgebraicTolerance, {"arguments pi n L / l^2 with L = l s"});

  const double norm = q.norm();
  out.remainder_ratio = norm > 0.0 && length > 0.0 ? std::abs(out.remainder) / (length * norm)
                                                   : 0.0;
  return out;
}

double mode_system_determinant(int n, double ell, double s, double dtn) {
  if (n < 1) throw DomainError("mode system is defined for n >= 1");
  const double k = mode_weight(n, ell) / (2.0 * kPi * n * ell);
  const double x = kPi * n * s / ell;
  // Rows divided by cosh(x); the row-normalised determinant is scale-free.
  const double th = std::tanh(x);
  const double p = k * th - dtn;
  const double q = k - dtn * th;
  const double big = std::max(std::abs(p), std::abs(q));
  return -2.0 * p * q / (big * big);
}

double zero_mode_balance(double s, double dtn0) { return 0.5 * s - dtn0; }

}  // namespace graftlab::identities
