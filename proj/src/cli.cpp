#include "graftlab/cli.hpp"

#include "graftlab/family.hpp"
#include "graftlab/geodesic.hpp"
#include "graftlab/geometry.hpp"
#include "graftlab/hypersolve.hpp"
#include "graftlab/numerics.hpp"
#include "graftlab/parallel.hpp"
#include "graftlab/spectral.hpp"
#include "graftlab/variation.hpp"

#include "json.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

namespace graftlab::cli {

namespace {

using identities::IdentityReport;
using identities::Term;
using nlohmann::json;
using spectral::Complex;
using spectral::FourierSolution;

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(first, last - first + 1));
}

double parse_double(std::string_view key, std::string_view text) {
  const std::string t = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size() || !std::isfinite(value)) {
    throw ConfigError("invalid number for '" + std::string(key) + "': '" + t + "'");
  }
  return value;
}

std::uint64_t parse_unsigned(std::string_view key, std::string_view text) {
  const std::string t = trim(text);
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
    throw ConfigError("invalid integer for '" + std::string(key) + "': '" + t + "'");
  }
  return value;
}

std::string one_of(std::string_view key, std::string_view text,
                   std::initializer_list<std::string_view> allowed) {
  const std::string t = trim(text);
  for (auto a : allowed) {
    if (t == a) return t;
  }
  throw ConfigError("invalid value for '" + std::string(key) + "': '" + t + "'");
}

std::string fmt(double v) {
  if (!std::isfinite(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> linspace(double from, double to, std::size_t steps) {
  std::vector<double> out(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    out[i] = steps == 1 ? from
                        : from + (to - from) * static_cast<double>(i) /
                                     static_cast<double>(steps - 1);
  }
  return out;
}

geometry::GraftedCollar chart_of(const RunConfig& c) {
  return geometry::GraftedCollar(c.ell, c.s, c.a, c.outer_bc);
}

FourierSolution zero_solution(double ell, double s, std::size_t n) {
  FourierSolution sol{ell, s, 0.0, 0.0, {}};
  sol.modes.resize(n);
  return sol;
}

FourierSolution config_field(const RunConfig& c, std::size_t n) {
  if (c.field == "zero") return zero_solution(c.ell, c.s, n);
  if (c.field == "c1") {
    auto sol = zero_solution(c.ell, c.s, n);
    sol.modes[0].c = 1.0;
    return sol;
  }
  return spectral::random_solution(c.ell, c.s, n, c.seed, c.amplitude);
}

// Independent stream per check.
std::mt19937_64 check_rng(const RunConfig& c, std::uint64_t salt) {
  std::seed_seq seq{c.seed, salt};
  return std::mt19937_64(seq);
}

std::uint64_t draw_seed(std::mt19937_64& rng) { return rng(); }

struct RandomCase {
  double ell;
  double s;
  std::uint64_t seed;
};

std::vector<RandomCase> random_cases(const RunConfig& c, std::uint64_t salt, std::size_t count) {
  auto rng = check_rng(c, salt);
  std::uniform_real_distribution<double> ell(1.0, 8.0);
  std::uniform_real_distribution<double> s(0.1, 4.0);
  std::vector<RandomCase> out(count);
  for (auto& rc : out) {
    rc.ell = ell(rng);
    rc.s = s(rng);
    rc.seed = draw_seed(rng);
  }
  return out;
}

double max_mode_diff(const std::vector<Complex>& a, const std::vector<Complex>& b,
                     std::size_t count) {
  double out = 0.0;
  for (std::size_t i = 0; i < count; ++i) out = std::max(out, std::abs(a[i] - b[i]));
  return out;
}

double max_abs(const std::vector<Complex>& a) {
  double out = 0.0;
  for (auto z : a) out = std::max(out, std::abs(z));
  return out;
}

// Worst case of a family of (lhs, rhs) comparisons, reported through make_report.
struct Worst {
  double lhs = 0.0;
  double rhs = 0.0;
  double rel = -1.0;
  std::size_t index = 0;

  void offer(double l, double r, std::size_t i) {
    const double scale = std::max(std::abs(l), std::abs(r));
    const double e = scale > 0.0 ? std::abs(l - r) / scale : 0.0;
    if (!(e <= rel)) {
      lhs = l;
      rhs = r;
      rel = e;
      index = i;
    }
  }
};

IdentityReport check_boundary_oracle(const RunConfig& c) {
  const auto cases = random_cases(c, 1, c.configs);
  std::vector<std::pair<double, double>> values(cases.size());
  parallel_for(cases.size(), [&](std::size_t i) {
    const auto& rc = cases[i];
    const auto sol = spectral::random_solution(rc.ell, rc.s, c.modes, rc.seed, c.amplitude);
    std::mt19937_64 rng(rc.seed);
    std::normal_distribution<double> normal;
    const auto vl =
        variation::solve_flat_variation(spectral::neumann_trace_flat(sol, Side::left), normal(rng));
    const auto vr = variation::solve_flat_variation(spectral::neumann_trace_flat(sol, Side::right),
                                                    normal(rng));
    const double closed = identities::boundary_term_closed(sol, vl, vr);
    const double quad = identities::boundary_term_quadrature(
        spectral::dirichlet_trace(sol, Side::left), spectral::dirichlet_trace(sol, Side::right),
        variation::hyperbolic_neumann(vl), variation::hyperbolic_neumann(vr));
    values[i] = {closed, quad};
  });
  Worst w;
  for (std::size_t i = 0; i < values.size(); ++i) w.offer(values[i].first, values[i].second, i);
  return identities::make_report(
      "boundary_term_oracle",
      {{"closed", w.lhs}, {"quadrature", w.rhs}, {"configs", static_cast<double>(cases.size())}},
      w.lhs, w.rhs, c.tol,
      {"worst of the random configurations (ell in [1, 8], s in [0.1, 4])",
       "seam quadrature with hyperbolic Neumann data -2(V_yy - V)"});
}

constexpr std::size_t kCollocationModes = 8;
constexpr std::size_t kCollocationCases = 50;
constexpr double kCollocationTolerance = 1e-8;

IdentityReport check_variation_collocation(const RunConfig& c) {
  const std::size_t n = std::min(c.modes, kCollocationModes);
  const auto cases = random_cases(c, 2, kCollocationCases);
  std::vector<double> err(cases.size()), err_neumann(cases.size());
  parallel_for(cases.size(), [&](std::size_t i) {
    const auto& rc = cases[i];
    const auto sol = spectral::random_solution(rc.ell, rc.s, n, rc.seed, c.amplitude);
    double e = 0.0, en = 0.0;
    for (Side side : {Side::left, Side::right}) {
      const auto trace = spectral::neumann_trace_flat(sol, side);
      const auto v = variation::solve_periodic_collocation(
          [&](double y) { return -0.5 * spectral::trace_value(trace, y); }, side, rc.ell, 0.0, n);
      for (std::size_t m = 1; m <= n; ++m) {
        const Complex closed =
            variation::flat_variation_coefficient(sol, side, static_cast<int>(m));
        e = std::max(e, std::abs(closed - v.modes[m - 1]));
      }
      const auto direct = variation::solve_flat_variation(trace, 0.0);
      const auto a = variation::hyperbolic_neumann(direct);
      const auto b = variation::hyperbolic_neumann_collocation(direct);
      en = std::max(en, max_mode_diff(a.modes, b.modes, n) / std::max(1.0, max_abs(a.modes)));
    }
    err[i] = e;
    err_neumann[i] = en;
  });
  const double worst = *std::max_element(err.begin(), err.end());
  const double worst_n = *std::max_element(err_neumann.begin(), err_neumann.end());
  return identities::make_bound_report(
      "variation_collocation",
      {{"max_mode_error", worst}, {"max_neumann_error", worst_n},
       {"modes", static_cast<double>(n)}, {"configs", static_cast<double>(cases.size())}},
      std::max(worst, worst_n), kCollocationTolerance,
      worst < kCollocationTolerance && worst_n < kCollocationTolerance,
      {"closed-form lambda_n, rho_n against Fourier collocation of V_yy = -1/2 d_x H",
       "hyperbolic Neumann map against collocated -2(V_yy - V), relative to max(1, |N|)"});
}

IdentityReport check_amended_collocation(const RunConfig& c) {
  const std::size_t n = std::min(c.modes, kCollocationModes);
  const auto cases = random_cases(c, 3, kCollocationCases);
  std::vector<double> err(cases.size()), err_lib(cases.size());
  parallel_for(cases.size(), [&](std::size_t i) {
    const auto& rc = cases[i];
    const auto sol = spectral::random_solution(rc.ell, rc.s, n, rc.seed, c.amplitude);
    const auto q = variation::random_quad(rc.ell, rc.s, n, rc.seed + 1, c.amplitude);
    const auto im = q.im_part();
    double e = 0.0, el = 0.0;
    for (Side side : {Side::left, Side::right}) {
      const double sg = side_sign(side);
      const double seam = sg * 0.5 * rc.s;
      const auto trace = spectral::neumann_trace_flat(sol, side);
      const auto w = variation::solve_periodic_collocation(
          [&](double y) {
            return -0.5 * spectral::trace_value(trace, y) + spectral::evaluate_dy(im, seam, y);
          },
          side, rc.ell, 0.0, n);
      const auto lib = variation::solve_amended_variation(trace, q, 0.0);
      for (std::size_t m = 1; m <= n; ++m) {
        const double nn = static_cast<double>(m);
        const double x = kPi * nn * rc.s / rc.ell;
        const Complex t = q.modes[m - 1].u * std::cosh(x) + sg * q.modes[m - 1].v * std::sinh(x);
        const Complex closed =
            variation::flat_variation_coefficient(sol, side, static_cast<int>(m)) +
            rc.ell * t / (2.0 * kPi * Complex(0.0, nn));
        e = std::max(e, std::abs(closed - w.modes[m - 1]));
        el = std::max(el, std::abs(closed - lib.modes[m - 1]));
      }
    }
    err[i] = e;
    err_lib[i] = el;
  });
  const double worst = *std::max_element(err.begin(), err.end());
  const double worst_lib = *std::max_element(err_lib.begin(), err_lib.end());
  return identities::make_bound_report(
      "amended_collocation",
      {{"max_mode_error", worst}, {"max_library_error", worst_lib},
       {"modes", static_cast<double>(n)}, {"configs", static_cast<double>(cases.size())}},
      std::max(worst, worst_lib), kCollocationTolerance,
      worst < kCollocationTolerance && worst_lib < kCollocationTolerance,
      {"lambda*_n = lambda_n + l (u C -/+ v S) / (2 pi i n) against collocation of "
       "W_yy = -1/2 d_x H + d_y Im phi"});
}

IdentityReport check_hyperbolic_neumann(const RunConfig& c) {
  const auto cases = random_cases(c, 4, c.configs);
  std::vector<double> err(cases.size());
  parallel_for(cases.size(), [&](std::size_t i) {
    const auto& rc = cases[i];
    const auto sol = spectral::random_solution(rc.ell, rc.s, c.modes, rc.seed, c.amplitude);
    std::mt19937_64 rng(rc.seed);
    std::normal_distribution<double> normal;
    double e = 0.0;
    for (Side side : {Side::left, Side::right}) {
      const double mean = normal(rng);
      const auto v = variation::solve_flat_variation(spectral::neumann_trace_flat(sol, side), mean);
      const auto a = variation::hyperbolic_neumann(v);
      const auto b = variation::hyperbolic_neumann_closed(sol, side, mean);
      const double scale = std::max({max_abs(b.modes), std::abs(b.mean), 1e-300});
      e = std::max(e, max_mode_diff(a.modes, b.modes, c.modes) / scale);
      e = std::max(e, std::abs(a.mean - b.mean) / scale);
    }
    err[i] = e;
  });
  const double worst = *std::max_element(err.begin(), err.end());
  return identities::make_bound_report(
      "hyperbolic_neumann", {{"max_rel_error", worst}}, worst, c.tol, worst <= c.tol,
      {"mode map 2(1 + k^2) lambda_n against the form written in c_n, d_n"});
}

IdentityReport check_extended_neumann(const RunConfig& c) {
  const auto cases = random_cases(c, 5, c.configs);
  std::vector<double> err(cases.size());
  parallel_for(cases.size(), [&](std::size_t i) {
    const auto& rc = cases[i];
    const auto sol = spectral::random_solution(rc.ell, rc.s, c.modes, rc.seed, c.amplitude);
    const auto q = variation::random_quad(rc.ell, rc.s, c.modes, rc.seed + 1, c.amplitude);
    double e = 0.0;
    for (Side side : {Side::left, Side::right}) {
      const auto w =
          variation::solve_amended_variation(spectral::neumann_trace_flat(sol, side), q, 0.5);
      const auto a = variation::extended_hyperbolic_neumann(w);
      const auto b = variation::extended_hyperbolic_neumann_closed(sol, q, side, 0.5);
      const double scale = std::max({max_abs(b.modes), std::abs(b.mean), 1e-300});
      e = std::max(e, max_mode_diff(a.modes, b.modes, c.modes) / scale);
      e = std::max(e, std::abs(a.mean - b.mean) / scale);
    }
    err[i] = e;
  });
  const double worst = *std::max_element(err.begin(), err.end());
  return identities::make_bound_report(
      "extended_neumann", {{"max_rel_error", worst}}, worst, c.tol, worst <= c.tol,
      {"-2(W_yy - W) on amended coefficients against the form in c_n, d_n, u_n, v_n"});
}

IdentityReport check_solvability(const RunConfig& c) {
  auto rng = check_rng(c, 6);
  std::uniform_real_distribution<double> ell(1.0, 8.0);
  std::uniform_real_distribution<double> s(0.1, 4.0);
  std::bernoulli_distribution coin(0.5);
  std::normal_distribution<double> normal;
  std::size_t mismatches = 0, rejected = 0;
  for (std::size_t i = 0; i < c.configs; ++i) {
    auto sol = spectral::random_solution(ell(rng), s(rng), std::min<std::size_t>(c.modes, 8),
                                         draw_seed(rng), c.amplitude);
    const bool nonzero = coin(rng);
    if (nonzero) {
      double c0 = 0.0;
      while (c0 == 0.0) c0 = normal(rng);
      sol.c0 = c0;
    }
    bool threw = false;
    try {
      (void)variation::solve_flat_variation(spectral::neumann_trace_flat(sol, Side::left), 0.0);
    } catch (const DomainError&) {
      threw = true;
    }
    if (threw) ++rejected;
    if (threw != nonzero) ++mismatches;
  }
  return identities::make_bound_report(
      "solvability",
      {{"mismatches", static_cast<double>(mismatches)},
       {"rejected", static_cast<double>(rejected)},
       {"configs", static_cast<double>(c.configs)}},
      static_cast<double>(mismatches), 0.0, mismatches == 0,
      {"solve_flat_variation must reject exactly the inputs with c0 != 0"});
}

IdentityReport rename(IdentityReport r, std::string name) {
  r.identity = std::move(name);
  return r;
}

constexpr double kSliceRate = 0.1;

struct Context {
  geometry::GraftedCollar chart;
  FourierSolution sol;
  hypersolve::HyperbolicField hyper;
  variation::QuadDiffModes quad;
};

std::vector<IdentityReport> slice_checks(const Context& ctx) {
  std::vector<IdentityReport> out;
  const auto still = identities::make_configuration(ctx.chart, ctx.sol, 0.0);
  out.push_back(identities::slice_condition(still.sol, still.left, still.right, 0.0));
  const auto moving = identities::make_configuration(ctx.chart, ctx.sol, kSliceRate);
  out.push_back(rename(
      identities::slice_condition(moving.sol, moving.left, moving.right, kSliceRate),
      "slice_condition_rate"));
  out.push_back(identities::area_two_methods(moving));
  const auto with_q = identities::make_configuration(ctx.chart, ctx.sol, kSliceRate, ctx.quad);
  out.push_back(rename(identities::area_two_methods(with_q), "area_two_methods_extended"));
  return out;
}

IdentityReport check_greens(const RunConfig& c, const Context& ctx) {
  const auto g = hypersolve::greens_residual(ctx.hyper);
  return identities::make_report(
      "greens_identity",
      {{"int H(Delta-2)H", g.lhs}, {"energy", g.energy}, {"seam", g.seam_term},
       {"outer", g.outer_term}},
      g.energy, g.seam_term + g.outer_term - g.lhs, c.solver_tol,
      {"energy = seam + outer - int H(Delta - 2)H on both strips"});
}

IdentityReport check_arc_length(const Context& ctx) {
  const auto config = identities::make_configuration(ctx.chart, ctx.sol, 0.0);
  const auto fam = variation::make_matched_family(ctx.chart, ctx.sol, config.left.mean,
                                                  config.right.mean);
  constexpr double kStep = 1e-5;
  const double closed = -0.5 * ctx.sol.d0 * ctx.chart.ell();
  std::vector<Term> terms{{"closed", closed}};
  Worst w;
  for (Side side : {Side::left, Side::right}) {
    const double rate = geometry::circle_length_rate(fam, ctx.chart.seam(side), kStep);
    terms.push_back({std::string("fd_") + std::string(to_string(side)), rate});
    terms.push_back({std::string("quadrature_") + std::string(to_string(side)),
                     identities::arc_length_derivative(ctx.sol, std::nullopt, side)});
    w.offer(rate, closed, side == Side::left ? 0 : 1);
  }
  return identities::make_report(
      "arc_length_derivative", terms, w.lhs, closed, 1e-4,
      {"Richardson-extrapolated central difference at t = 1e-5 against -1/2 d0 l"});
}

IdentityReport check_master_zero(const RunConfig& c, const Context& ctx) {
  const auto sol = zero_solution(ctx.chart.ell(), ctx.chart.s(), c.modes);
  const auto config = identities::make_configuration(ctx.chart, sol, 0.0);
  return rename(identities::master_identity(config, hypersolve::rebind(ctx.hyper, sol),
                                            c.solver_tol)
                    .report,
                "master_identity_zero_field");
}

IdentityReport check_master_nonpositive(const RunConfig& c, const Context& ctx) {
  auto rng = check_rng(c, 7);
  std::uniform_real_distribution<double> s(0.1, 4.0);
  std::vector<std::pair<double, std::uint64_t>> cases(c.configs);
  for (auto& cs : cases) cs = {s(rng), draw_seed(rng)};
  struct Outcome {
    double max_term;
    bool nonpositive;
    bool contradiction;
  };
  std::vector<Outcome> outcomes(cases.size());
  parallel_for(cases.size(), [&](std::size_t i) {
    const geometry::GraftedCollar chart(ctx.chart.ell(), cases[i].first, ctx.chart.a(),
                                       ctx.chart.outer_bc());
    const auto sol = spectral::random_solution(chart.ell(), chart.s(), c.modes, cases[i].second,
                                               c.amplitude);
    const auto config = identities::make_configuration(chart, sol, 0.0);
    const auto r = identities::master_identity(config, hypersolve::rebind(ctx.hyper, sol),
                                               c.solver_tol);
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& t : r.report.terms) {
      if (t.label != "outer_green") m = std::max(m, t.value);
    }
    outcomes[i] = {m, r.all_terms_nonpositive, r.contradiction};
  });
  double max_term = -std::numeric_limits<double>::infinity();
  std::size_t failures = 0, contradictions = 0;
  for (const auto& o : outcomes) {
    max_term = std::max(max_term, o.max_term);
    if (!o.nonpositive) ++failures;
    if (o.contradiction) ++contradictions;
  }
  return identities::make_bound_report(
      "master_identity_nonpositive",
      {{"max_term", max_term},
       {"violations", static_cast<double>(failures)},
       {"contradictions", static_cast<double>(contradictions)},
       {"configs", static_cast<double>(cases.size())}},
      max_term, 0.0, failures == 0,
      {"every interior, spectral and slice term <= 0 under the slice condition (s_rate = 0)",
       "contradictions counts fields whose strictly negative total cannot meet the outer term"});
}

constexpr double kDeterminantFloor = 1e-6;

IdentityReport check_vanishing(const RunConfig& c, const Context& ctx) {
  const auto ells = linspace(1.0, 8.0, 5);
  const auto ss = linspace(0.1, 4.0, 5);
  const std::vector<double> as{0.5, 1.0, 2.0};
  const std::size_t modes = c.modes + 1;
  const std::size_t count = ells.size() * as.size() * modes;
  std::vector<double> dtns(count);
  parallel_for(count, [&](std::size_t idx) {
    const std::size_t n = idx % modes;
    const std::size_t ia = (idx / modes) % as.size();
    const std::size_t il = idx / (modes * as.size());
    dtns[idx] = hypersolve::dtn(static_cast<int>(n), ells[il], as[ia],
                                OuterBoundary::dirichlet_zero);
  });
  double min_det = std::numeric_limits<double>::infinity();
  double min_balance = std::numeric_limits<double>::infinity();
  for (std::size_t il = 0; il < ells.size(); ++il) {
    for (std::size_t ia = 0; ia < as.size(); ++ia) {
      const double* d = &dtns[(il * as.size() + ia) * modes];
      for (double s : ss) {
        min_balance = std::min(min_balance, std::abs(identities::zero_mode_balance(s, d[0])));
        for (std::size_t n = 1; n < modes; ++n) {
          min_det = std::min(min_det, std::abs(identities::mode_system_determinant(
                                          static_cast<int>(n), ells[il], s, d[n])));
        }
      }
    }
  }
  const auto config = identities::make_configuration(ctx.chart, ctx.sol, 0.0);
  const auto r = identities::master_identity(config, ctx.hyper, c.solver_tol);
  const bool nonzero_field =
      ctx.sol.d0 != 0.0 || std::any_of(ctx.sol.modes.begin(), ctx.sol.modes.end(),
                                       [](const auto& m) {
                                         return m.c != Complex{} || m.d != Complex{};
                                       });
  const bool total_ok = nonzero_field ? (!r.report.pass && r.contradiction) : r.report.pass;
  const bool pass = min_det > kDeterminantFloor && min_balance > 0.0 && total_ok;
  return identities::make_bound_report(
      "vanishing_mechanism",
      {{"min_abs_det", min_det},
       {"min_abs_zero_mode_balance", min_balance},
       {"field_total", r.report.lhs},
       {"field_rhs", r.report.rhs},
       {"field_contradiction", r.contradiction ? 1.0 : 0.0}},
      min_det, kDeterminantFloor, pass,
      {"5x5x3 grid over (l, s, a), Dirichlet-zero outer, modes 1..N",
       "n = 0 balance coefficient s/2 - D0 nonzero forces d0 = 0",
       "the identity closes only at the zero field; the configured field must be flagged"});
}

IdentityReport check_extended_reduction(const RunConfig& c, const Context& ctx) {
  variation::QuadDiffModes zero{ctx.chart.ell(), ctx.chart.s(), 0.0, 0.0, 0.0, {}};
  zero.modes.resize(c.modes);
  const auto plain = identities::make_configuration(ctx.chart, ctx.sol, kSliceRate);
  const auto ext = identities::make_configuration(ctx.chart, ctx.sol, kSliceRate, zero);
  double diff = 0.0;
  auto track = [&](double a, double b) {
    diff = std::max(diff, a == b ? 0.0 : std::max(std::abs(a - b), 1e-300));
  };
  for (Side side : {Side::left, Side::right}) {
    const auto& v = side == Side::left ? plain.left : plain.right;
    const auto& w = side == Side::left ? ext.left : ext.right;
    track(v.mean, w.mean);
    for (std::size_t i = 0; i < v.modes.size(); ++i) {
      track(v.modes[i].real(), w.modes[i].real());
      track(v.modes[i].imag(), w.modes[i].imag());
    }
    const auto nv = variation::hyperbolic_neumann(v);
    const auto nw = variation::extended_hyperbolic_neumann(w);
    track(nv.mean, nw.mean);
    for (std::size_t i = 0; i < nv.modes.size(); ++i) {
      track(nv.modes[i].real(), nw.modes[i].real());
      track(nv.modes[i].imag(), nw.modes[i].imag());
    }
    const auto cv = variation::hyperbolic_neumann_closed(ctx.sol, side, v.mean);
    const auto cw = variation::extended_hyperbolic_neumann_closed(ctx.sol, zero, side, w.mean);
    track(cv.mean, cw.mean);
    for (std::size_t i = 0; i < cv.modes.size(); ++i) {
      track(cv.modes[i].real(), cw.modes[i].real());
      track(cv.modes[i].imag(), cw.modes[i].imag());
    }
    track(identities::arc_length_derivative(ctx.sol, std::nullopt, side),
          identities::arc_length_derivative(ctx.sol, zero, side));
  }
  track(identities::slice_difference(plain), identities::slice_difference(ext));
  track(identities::boundary_term_closed(ctx.sol, plain.left, plain.right),
        identities::extended_boundary_term_closed(ctx.sol, zero, ext.left, ext.right));
  track(identities::area_two_methods(plain).lhs, identities::area_two_methods(ext).lhs);
  const auto m = identities::master_identity(plain, ctx.hyper, c.solver_tol);
  const auto e = identities::extended_master_identity(ext, ctx.hyper, c.solver_tol);
  track(m.report.lhs, e.report.lhs);
  track(m.report.rhs, e.report.rhs);
  return identities::make_bound_report(
      "extended_reduction", {{"max_difference", diff}}, diff, 0.0, diff == 0.0,
      {"every extended operation at q = 0 equals its conformal counterpart bit for bit"});
}

IdentityReport check_extended_oracle(const RunConfig& c, const Context& ctx) {
  const auto cases = random_cases(c, 8, c.configs);
  std::vector<std::pair<double, double>> values(cases.size());
  parallel_for(cases.size(), [&](std::size_t i) {
    const auto& rc = cases[i];
    const auto sol = spectral::random_solution(rc.ell, rc.s, c.modes, rc.seed, c.amplitude);
    const auto q = variation::random_quad(rc.ell, rc.s, c.modes, rc.seed + 1, c.amplitude);
    const geometry::GraftedCollar chart(rc.ell, rc.s, ctx.chart.a(), ctx.chart.outer_bc());
    const auto config = identities::make_configuration(chart, sol, 0.0, q);
    values[i] = {identities::extended_boundary_term_closed(sol, q, config.left, config.right),
                 identities::extended_boundary_term_quadrature(sol, config.left, config.right)};
  });
  Worst w;
  for (std::size_t i = 0; i < values.size(); ++i) w.offer(values[i].first, values[i].second, i);
  return identities::make_report(
      "extended_boundary_oracle", {{"closed", w.lhs}, {"quadrature", w.rhs}}, w.lhs, w.rhs,
      c.tol, {"closed form with the cross term against seam quadrature of amended data"});
}

IdentityReport check_extended_scaling(const RunConfig& c, const Context& ctx) {
  const std::vector<double> eps{1e-2, 1e-3, 1e-4};
  std::vector<Term> terms;
  std::vector<double> lx, ly;
  double max_ratio = 0.0;
  for (double e : eps) {
    const auto config =
        identities::make_configuration(ctx.chart, ctx.sol, 0.0, ctx.quad.scaled(e));
    const auto r = identities::extended_master_identity(config, ctx.hyper, c.solver_tol);
    terms.push_back({"non_conformal(" + fmt(e) + ")", r.non_conformal});
    max_ratio = std::max(max_ratio, r.remainder_ratio);
    lx.push_back(std::log(e));
    ly.push_back(std::log(std::abs(r.non_conformal)));
  }
  const double mx = (lx[0] + lx[1] + lx[2]) / 3.0;
  const double my = (ly[0] + ly[1] + ly[2]) / 3.0;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  const double slope = sxy / sxx;
  terms.push_back({"slope", slope});
  terms.push_back({"max_remainder_ratio", max_ratio});
  return identities::make_bound_report(
      "extended_scaling", terms, std::abs(slope - 1.0), 0.05,
      std::isfinite(slope) && std::abs(slope - 1.0) <= 0.05,
      {"least-squares exponent of |cross + remainder| in eps for q -> eps q"});
}

IdentityReport check_length_form(const RunConfig& c, const Context& ctx) {
  const auto config = identities::make_configuration(ctx.chart, ctx.sol, 0.0, ctx.quad);
  auto r = identities::extended_master_identity(config, ctx.hyper, c.solver_tol).length_form;
  r.tol = c.tol;
  r.pass = std::isfinite(r.abs_err) && (r.abs_err <= c.tol || r.rel_err <= c.tol);
  const double length = ctx.chart.ell() * ctx.chart.s();
  const bool bitwise = identities::spectral_sum_length_form(ctx.sol, length) ==
                       identities::spectral_sum(ctx.sol);
  r.terms.push_back({"bitwise_equal", bitwise ? 1.0 : 0.0});
  return r;
}

struct GeodesicTable {
  json sides = json::array();
  double worst = 0.0;       // sup-norm relative error at t
  double worst_mode = 0.0;  // mode-wise, relative to the RMS of V
  bool decreasing = true;
  bool pass = true;
};

GeodesicTable geodesic_table(const RunConfig& c, const geometry::GraftedCollar& chart,
                             const FourierSolution& sol) {
  variation::GeodesicOptions options;
  options.nodes = c.nodes;
  options.fd_step = c.fd_step;
  const auto cfg = identities::make_configuration(chart, sol, 0.0);
  const auto fam = variation::make_matched_family(chart, sol, cfg.left.mean, cfg.right.mean);
  GeodesicTable table;
  for (Side side : {Side::left, Side::right}) {
    const auto& v = side == Side::left ? cfg.left : cfg.right;
    const auto cmp = variation::compare_with_variation(fam, side, v, c.t, options);
    const auto disp = variation::centered_displacement(fam, side, c.t, options);
    double rms2 = v.mean * v.mean;
    for (auto z : v.modes) rms2 += 2.0 * std::norm(z);
    const double rms = std::sqrt(rms2);
    auto rel = [&](Complex err) { return rms > 0.0 ? std::abs(err) / rms : std::abs(err); };
    json modes = json::array();
    double side_mode = 0.0;
    for (std::size_t m = 0; m <= v.modes.size(); ++m) {
      const Complex o = numerics::fourier_coefficient(disp, static_cast<int>(m));
      const Complex cl = m == 0 ? Complex(v.mean, 0.0) : v.modes[m - 1];
      const double e = rel(o - cl);
      side_mode = std::max(side_mode, e);
      modes.push_back({{"n", m},
                       {"closed_re", cl.real()},
                       {"closed_im", cl.imag()},
                       {"oracle_re", o.real()},
                       {"oracle_im", o.imag()},
                       {"rel_err", e}});
    }
    const bool side_pass = cmp.rel_err < 1e-2 && side_mode < 1e-2 && cmp.decreasing;
    table.pass = table.pass && side_pass;
    table.decreasing = table.decreasing && cmp.decreasing;
    table.worst = std::max(table.worst, cmp.rel_err);
    table.worst_mode = std::max(table.worst_mode, side_mode);
    table.sides.push_back({{"side", to_string(side)},
                           {"rel_err", cmp.rel_err},
                           {"rel_err_half", cmp.rel_err_half},
                           {"rel_err_richardson", cmp.rel_err_richardson},
                           {"rel_err_raw", cmp.rel_err_raw},
                           {"max_mode_rel_err", side_mode},
                           {"rms_variation", rms},
                           {"max_abs_variation", cmp.max_abs_variation},
                           {"decreasing", cmp.decreasing},
                           {"pass", side_pass},
                           {"modes", modes}});
  }
  return table;
}

constexpr std::size_t kGeodesicModes = 8;

IdentityReport check_geodesic(const RunConfig& c, const Context& ctx) {
  const auto table = geodesic_table(c, ctx.chart, config_field(c, std::min(c.modes, kGeodesicModes)));
  std::vector<Term> terms;
  for (const auto& side : table.sides) {
    const std::string tag = side["side"].get<std::string>();
    terms.push_back({"rel_err_" + tag, side["rel_err"].get<double>()});
    terms.push_back({"rel_err_half_" + tag, side["rel_err_half"].get<double>()});
    terms.push_back({"max_mode_rel_err_" + tag, side["max_mode_rel_err"].get<double>()});
  }
  return identities::make_bound_report(
      "geodesic_oracle", terms, std::max(table.worst, table.worst_mode), 1e-2, table.pass,
      {"Newton-collocated perturbed geodesic, centred difference in t, against closed-form V",
       "sup-norm and mode-wise errors (modes relative to the RMS of V) below 1e-2",
       "error must shrink when t is halved"});
}

std::vector<IdentityReport> modulus_checks(const RunConfig& c) {
  const auto ells = linspace(1.0, 8.0, 50);
  std::vector<double> closed(ells.size()), quad(ells.size());
  parallel_for(ells.size(), [&](std::size_t i) {
    const geometry::GraftedCollar chart(ells[i], c.s, c.a, c.outer_bc);
    closed[i] = geometry::conformal_modulus(chart);
    quad[i] = geometry::conformal_modulus_quadrature(chart);
  });
  Worst w;
  double min_drop = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ells.size(); ++i) {
    w.offer(closed[i], quad[i], i);
    if (i > 0) min_drop = std::min(min_drop, closed[i - 1] - closed[i]);
  }
  std::vector<IdentityReport> out;
  out.push_back(identities::make_report(
      "conformal_modulus", {{"closed", w.lhs}, {"quadrature", w.rhs}, {"ell", ells[w.index]}},
      w.lhs, w.rhs, c.tol, {"(2 gd(a) + s) / l against Simpson quadrature of dx / G"}));
  out.push_back(identities::make_bound_report(
      "conformal_modulus_monotone", {{"min_decrement", min_drop}}, min_drop, 0.0, min_drop > 0.0,
      {"strictly decreasing in l over l in [1, 8], 50 steps"}));
  const auto chart = chart_of(c);
  out.push_back(identities::make_report(
      "total_area",
      {{"closed", geometry::total_area(chart)},
       {"quadrature", geometry::total_area_quadrature(chart)}},
      geometry::total_area(chart), geometry::total_area_quadrature(chart), c.tol,
      {"2 l sinh(a) + l s against Simpson quadrature of l G"}));
  return out;
}

void emit(const RunConfig& c, std::ostream& log, const std::string& content) {
  if (c.out.empty()) {
    log << content;
    return;
  }
  std::ofstream file(c.out, std::ios::binary);
  if (!file) throw ConfigError("cannot write output file '" + c.out + "'");
  file << content;
  if (!file) throw ConfigError("failed writing output file '" + c.out + "'");
}

template <class Fn>
int guarded(Fn&& fn, std::ostream& log) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const SolveError& e) {
    log << "solver failure: " << e.what() << '\n';
    return kExitFailure;
  } catch (const DomainError& e) {
    log << "domain error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace

void set_key(RunConfig& config, std::string_view raw_key, std::string_view value) {
  std::string key = trim(raw_key);
  std::replace(key.begin(), key.end(), '-', '_');
  auto positive = [&](double v) {
    if (!(v > 0.0)) throw ConfigError("'" + key + "' must be positive");
    return v;
  };
  auto count = [&](std::uint64_t v) {
    if (v == 0) throw ConfigError("'" + key + "' must be at least 1");
    return static_cast<std::size_t>(v);
  };
  if (key == "ell") {
    config.ell = positive(parse_double(key, value));
  } else if (key == "s") {
    config.s = parse_double(key, value);
    if (config.s < 0.0) throw ConfigError("'s' must be nonnegative");
  } else if (key == "a") {
    config.a = positive(parse_double(key, value));
  } else if (key == "outer_bc") {
    try {
      config.outer_bc = outer_boundary_from_string(trim(value));
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  } else if (key == "modes") {
    config.modes = count(parse_unsigned(key, value));
  } else if (key == "tol") {
    config.tol = positive(parse_double(key, value));
  } else if (key == "solver_tol") {
    config.solver_tol = positive(parse_double(key, value));
  } else if (key == "seed") {
    config.seed = parse_unsigned(key, value);
  } else if (key == "configs") {
    config.configs = count(parse_unsigned(key, value));
  } else if (key == "amplitude") {
    config.amplitude = positive(parse_double(key, value));
  } else if (key == "field") {
    config.field = one_of(key, value, {"random", "zero", "c1"});
  } else if (key == "out") {
    config.out = trim(value);
  } else if (key == "param") {
    config.param = one_of(key, value, {"ell", "s", "a"});
  } else if (key == "from") {
    config.from = parse_double(key, value);
  } else if (key == "to") {
    config.to = parse_double(key, value);
  } else if (key == "steps") {
    config.steps = count(parse_unsigned(key, value));
  } else if (key == "t") {
    config.t = positive(parse_double(key, value));
  } else if (key == "fd_step") {
    config.fd_step = parse_double(key, value);
    if (config.fd_step < 0.0) throw ConfigError("'fd_step' must be nonnegative");
  } else if (key == "nodes") {
    config.nodes = count(parse_unsigned(key, value));
  } else if (key == "kind") {
    config.kind = one_of(key, value, {"hyperbolic", "spectral"});
  } else {
    throw ConfigError("unknown key '" + key + "'");
  }
}

RunConfig parse_config(std::istream& in, RunConfig base) {
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(number) + ": expected key = value");
    }
    try {
      set_key(base, std::string_view(line).substr(0, eq), std::string_view(line).substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(number) + ": " + e.what());
    }
  }
  return base;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  return parse_config(in, std::move(base));
}

void validate(const RunConfig& c) {
  if (c.modes > 256) throw ConfigError("'modes' must be at most 256");
  if (c.nodes < 16 || c.nodes % 2 != 0) throw ConfigError("'nodes' must be even and >= 16");
  if (c.from > c.to) throw ConfigError("'from' must not exceed 'to'");
  if (c.param == "s" ? c.from < 0.0 : c.from <= 0.0) {
    throw ConfigError("sweep range leaves the valid domain of '" + c.param + "'");
  }
}

std::vector<IdentityReport> verify_suite(const RunConfig& c) {
  validate(c);
  const auto chart = chart_of(c);
  auto sol = config_field(c, c.modes);
  Context ctx{chart, sol, hypersolve::solve_hyperbolic_field(chart, sol),
              variation::random_quad(c.ell, c.s, c.modes, c.seed + 1, c.amplitude)};

  std::vector<IdentityReport> out;
  out.push_back(check_boundary_oracle(c));
  out.push_back(check_variation_collocation(c));
  out.push_back(check_amended_collocation(c));
  out.push_back(check_hyperbolic_neumann(c));
  out.push_back(check_extended_neumann(c));
  out.push_back(check_solvability(c));
  for (auto& r : slice_checks(ctx)) out.push_back(std::move(r));
  out.push_back(identities::hyperbolic_mass_check(ctx.hyper, c.solver_tol));
  out.push_back(check_greens(c, ctx));
  out.push_back(check_arc_length(ctx));
  out.push_back(check_master_zero(c, ctx));
  out.push_back(check_master_nonpositive(c, ctx));
  out.push_back(check_vanishing(c, ctx));
  out.push_back(check_extended_reduction(c, ctx));
  out.push_back(check_extended_oracle(c, ctx));
  out.push_back(check_extended_scaling(c, ctx));
  out.push_back(check_length_form(c, ctx));
  out.push_back(check_geodesic(c, ctx));
  for (auto& r : modulus_checks(c)) out.push_back(std::move(r));
  return out;
}

int cmd_verify(const RunConfig& config, std::ostream& log) {
  return guarded(
      [&] {
        const auto reports = verify_suite(config);
        json doc = json::array();
        bool all = true;
        std::ostringstream summary;
        for (const auto& r : reports) {
          doc.push_back(identities::to_json(r));
          all = all && r.pass;
          summary << (r.pass ? "PASS " : "FAIL ") << r.identity << " abs_err=" << fmt(r.abs_err)
                  << " rel_err=" << fmt(r.rel_err) << " tol=" << fmt(r.tol) << '\n';
        }
        emit(config, log, doc.dump(2) + "\n");
        log << summary.str();
        log << (all ? "verify: all " : "verify: failures among ") << reports.size()
            << " checks\n";
        return all ? kExitPass : kExitFailure;
      },
      log);
}

std::string sweep_header(std::size_t modes) {
  std::string h =
      "param,value,ell,s,a,modulus,modulus_quadrature,area,dtn_0,zero_mode_balance,min_abs_det";
  for (std::size_t n = 1; n <= modes; ++n) h += ",det_" + std::to_string(n);
  h += ",boundary_rel_err,slice_residual";
  return h;
}

int cmd_sweep(const RunConfig& config, std::ostream& log) {
  return guarded(
      [&] {
        validate(config);
        const auto values = linspace(config.from, config.to, config.steps);
        std::vector<std::string> rows(values.size());
        parallel_for(values.size(), [&](std::size_t i) {
          RunConfig c = config;
          (config.param == "ell" ? c.ell : config.param == "s" ? c.s : c.a) = values[i];
          const auto chart = chart_of(c);
          std::vector<double> dtns(c.modes + 1);
          for (std::size_t n = 0; n <= c.modes; ++n) {
            dtns[n] = hypersolve::dtn(static_cast<int>(n), c.ell, c.a, c.outer_bc);
          }
          std::vector<double> dets(c.modes);
          double min_det = std::numeric_limits<double>::infinity();
          for (std::size_t n = 1; n <= c.modes; ++n) {
            dets[n - 1] = identities::mode_system_determinant(static_cast<int>(n), c.ell, c.s,
                                                              dtns[n]);
            min_det = std::min(min_det, std::abs(dets[n - 1]));
          }
          const auto sol = spectral::random_solution(c.ell, c.s, c.modes, c.seed, c.amplitude);
          const auto cfg = identities::make_configuration(chart, sol, 0.0);
          const double closed = identities::boundary_term_closed(sol, cfg.left, cfg.right);
          const double quad = identities::boundary_term_quadrature(
              spectral::dirichlet_trace(sol, Side::left),
              spectral::dirichlet_trace(sol, Side::right),
              variation::hyperbolic_neumann(cfg.left), variation::hyperbolic_neumann(cfg.right));
          const double scale = std::max(std::abs(closed), std::abs(quad));
          const double slice =
              identities::slice_condition(cfg.sol, cfg.left, cfg.right, 0.0).abs_err;

          std::string row = config.param + "," + fmt(values[i]) + "," + fmt(c.ell) + "," +
                            fmt(c.s) + "," + fmt(c.a) + "," +
                            fmt(geometry::conformal_modulus(chart)) + "," +
                            fmt(geometry::conformal_modulus_quadrature(chart)) + "," +
                            fmt(geometry::total_area(chart)) + "," + fmt(dtns[0]) + "," +
                            fmt(identities::zero_mode_balance(c.s, dtns[0])) + "," + fmt(min_det);
          for (double d : dets) row += "," + fmt(d);
          row += "," + fmt(scale > 0.0 ? std::abs(closed - quad) / scale : 0.0) + "," +
                 fmt(slice) + "\n";
          rows[i] = std::move(row);
        });
        std::string csv = sweep_header(config.modes) + "\n";
        for (const auto& r : rows) csv += r;
        emit(config, log, csv);
        log << "sweep: " << rows.size() << " rows over " << config.param << '\n';
        return kExitPass;
      },
      log);
}

int cmd_geodesic(const RunConfig& config, std::ostream& log) {
  return guarded(
      [&] {
        validate(config);
        const auto chart = chart_of(config);
        const std::size_t n = std::min(config.modes, kGeodesicModes);
        const auto table = geodesic_table(config, chart, config_field(config, n));
        json doc = {{"t", config.t},
                    {"fd_step", config.fd_step > 0.0 ? config.fd_step : 1e-4 * config.t},
                    {"nodes", config.nodes},
                    {"field", config.field},
                    {"modes", n},
                    {"chart", geometry::to_json(chart)},
                    {"sides", table.sides},
                    {"max_rel_err", table.worst},
                    {"max_mode_rel_err", table.worst_mode},
                    {"decreasing", table.decreasing},
                    {"pass", table.pass}};
        emit(config, log, doc.dump(2) + "\n");
        log << (table.pass ? "PASS" : "FAIL") << " geodesic max_rel_err=" << fmt(table.worst)
            << " max_mode_rel_err=" << fmt(table.worst_mode) << '\n';
        return table.pass ? kExitPass : kExitFailure;
      },
      log);
}

int cmd_chart(const RunConfig& config, std::ostream& log) {
  return guarded(
      [&] {
        validate(config);
        const auto chart = chart_of(config);
        json doc = {{"chart", geometry::to_json(chart)},
                    {"area", geometry::total_area(chart)},
                    {"area_quadrature", geometry::total_area_quadrature(chart)},
                    {"gudermannian", geometry::gudermannian(chart.a())},
                    {"modulus", geometry::conformal_modulus(chart)},
                    {"modulus_quadrature", geometry::conformal_modulus_quadrature(chart)},
                    {"length", geometry::grafted_length(chart.ell(), chart.s())}};
        emit(config, log, doc.dump(2) + "\n");
        return kExitPass;
      },
      log);
}

int cmd_modes(const RunConfig& config, std::ostream& log) {
  return guarded(
      [&] {
        validate(config);
        std::string csv;
        if (config.kind == "hyperbolic") {
          std::vector<std::string> blocks(config.modes + 1);
          parallel_for(blocks.size(), [&](std::size_t n) {
            const auto m = hypersolve::mode_solve(static_cast<int>(n), config.ell, config.a,
                                                  config.outer_bc, 1.0);
            std::string block;
            for (const auto& smp : m.samples) {
              block += std::to_string(n) + "," + fmt(smp.xi) + "," + fmt(smp.b) + "," +
                       fmt(smp.db) + "\n";
            }
            blocks[n] = std::move(block);
          });
          csv = "n,xi,b,db\n";
          for (const auto& b : blocks) csv += b;
        } else {
          const auto chart = chart_of(config);
          const auto sol = config_field(config, config.modes);
          const auto cfg = identities::make_configuration(chart, sol, 0.0);
          csv = "n,c_re,c_im,d_re,d_im,lambda_re,lambda_im,rho_re,rho_im\n";
          csv += "0," + fmt(sol.c0) + ",0," + fmt(sol.d0) + ",0," + fmt(cfg.left.mean) + ",0," +
                 fmt(cfg.right.mean) + ",0\n";
          for (std::size_t n = 1; n <= sol.modes.size(); ++n) {
            const auto& m = sol.modes[n - 1];
            const auto l = cfg.left.modes[n - 1];
            const auto r = cfg.right.modes[n - 1];
            csv += std::to_string(n) + "," + fmt(m.c.real()) + "," + fmt(m.c.imag()) + "," +
                   fmt(m.d.real()) + "," + fmt(m.d.imag()) + "," + fmt(l.real()) + "," +
                   fmt(l.imag()) + "," + fmt(r.real()) + "," + fmt(r.imag()) + "\n";
          }
        }
        emit(config, log, csv);
        return kExitPass;
      },
      log);
}

}  // namespace graftlab::cli
