#include "graftlab/hypersolve.hpp"

#include "graftlab/numerics.hpp"
#include "graftlab/parallel.hpp"

#include <Eigen/Sparse>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

namespace graftlab::hypersolve {

namespace {

constexpr double kRescaleThreshold = 1e100;

double sech2(double xi) {
  const double c = std::cosh(xi);
  return 1.0 / (c * c);
}

double potential(double k, double xi) { return k * k * sech2(xi) + 2.0; }

std::vector<double> element_breaks(double k, double a, double growth) {
  const double first = std::min(a, 0.5 / (1.0 + k));
  std::vector<double> breaks{0.0};
  double width = first;
  while (breaks.back() < a) {
    const double next = breaks.back() + width;
    if (next >= a || a - next < 0.25 * width) {
      breaks.push_back(a);
      break;
    }
    breaks.push_back(next);
    width = std::min(width * growth, 1.0);
  }
  return breaks;
}

const Element& element_at(const std::vector<Element>& elements, double xi) {
  if (elements.empty()) throw DomainError("mode solution has no collocation data");
  auto it = std::lower_bound(elements.begin(), elements.end(), xi,
                             [](const Element& e, double x) { return e.hi < x; });
  if (it == elements.end()) --it;
  return *it;
}

double interpolate(const Element& e, const std::vector<double>& values, double xi) {
  return numerics::chebyshev_interpolate(e.nodes, values, std::clamp(xi, e.lo, e.hi));
}

// Integral over [0, a] of g(xi, b, b', b'') with 20-point Gauss-Legendre per element.
double integrate_profile(const std::vector<Element>& elements,
                         const std::function<double(double, double, double, double)>& g) {
  double total = 0.0;
  for (const Element& e : elements) {
    total += numerics::gauss_legendre(
        [&](double xi) {
          return g(xi, interpolate(e, e.b, xi), interpolate(e, e.db, xi),
                   interpolate(e, e.d2b, xi));
        },
        e.lo, e.hi);
  }
  return total;
}

void scale_solution(HyperbolicModeSolution& sol, double factor) {
  for (auto& s : sol.samples) {
    s.b *= factor;
    s.db *= factor;
  }
  for (auto& e : sol.elements) {
    for (auto* vec : {&e.b, &e.db, &e.d2b}) {
      for (double& v : *vec) v *= factor;
    }
  }
}

}  // namespace

double mode_wavenumber(int n, double ell) { return 2.0 * kPi * n / ell; }

double HyperbolicModeSolution::value(double xi) const {
  const Element& e = element_at(elements, xi);
  return interpolate(e, e.b, xi);
}

double HyperbolicModeSolution::derivative(double xi) const {
  const Element& e = element_at(elements, xi);
  return interpolate(e, e.db, xi);
}

double HyperbolicModeSolution::second_derivative(double xi) const {
  const Element& e = element_at(elements, xi);
  return interpolate(e, e.d2b, xi);
}

std::vector<double> graded_grid(double a, std::size_t points) {
  if (points < 2) throw DomainError("graded grid needs at least two points");
  std::vector<double> xi(points);
  for (std::size_t j = 0; j < points; ++j) {
    xi[j] = a * (1.0 - std::cos(kPi * static_cast<double>(j) /
                                (2.0 * static_cast<double>(points - 1))));
  }
  xi.front() = 0.0;
  xi.back() = a;
  return xi;
}

std::vector<ModeSample> shoot(int n, double ell, double a, OuterBoundary outer_bc,
                              const std::vector<double>& grid, double tolerance) {
  using State = std::array<double, 2>;
  namespace odeint = boost::numeric::odeint;
  const double k = mode_wavenumber(n, ell);
  auto system = [k](const State& state, State& dstate, double xi) {
    dstate[0] = state[1];
    dstate[1] = -std::tanh(xi) * state[1] + potential(k, xi) * state[0];
  };

  // Backward from the outer circle, where the wanted solution is the growing one.
  State state = outer_bc == OuterBoundary::dirichlet_zero ? State{0.0, -1.0} : State{1.0, 0.0};
  if (grid.size() < 2 || grid.front() != 0.0 || grid.back() != a) {
    throw DomainError("shooting grid must run from 0 to a");
  }
  std::vector<ModeSample> samples(grid.size());
  samples.back() = {grid.back(), state[0], state[1]};
  auto stepper = odeint::make_controlled(tolerance, tolerance, odeint::runge_kutta_dopri5<State>());
  for (std::size_t j = grid.size() - 1; j-- > 0;) {
    const double from = grid[j + 1];
    const double to = grid[j];
    odeint::integrate_adaptive(stepper, system, state, from, to,
                               -std::min(1e-3, 0.5 * (from - to)));
    samples[j] = {to, state[0], state[1]};
    if (std::abs(state[0]) > kRescaleThreshold || std::abs(state[1]) > kRescaleThreshold) {
      const double factor = 1.0 / kRescaleThreshold;
      state[0] *= factor;
      state[1] *= factor;
      for (std::size_t i = j; i < samples.size(); ++i) {
        samples[i].b *= factor;
        samples[i].db *= factor;
      }
    }
  }
  const double seam = samples.front().b;
  if (seam == 0.0) throw SolveError("shooting: degenerate seam value");
  for (auto& s : samples) {
    s.b /= seam;
    s.db /= seam;
  }
  return samples;
}

std::vector<Element> collocate(double k, double a, OuterBoundary outer_bc, double seam_value,
                               const std::function<double(double)>& forcing,
                               const SolveOptions& options) {
  const std::vector<double> breaks = element_breaks(k, a, options.growth);
  const std::size_t count = breaks.size() - 1;
  const std::size_t p = options.degree;
  const std::size_t width = p + 1;
  const auto unknowns = static_cast<Eigen::Index>(count * width);

  std::vector<Element> elements(count);
  std::vector<Eigen::MatrixXd> d1(count);
  std::vector<Eigen::MatrixXd> d2(count);
  std::vector<Eigen::Triplet<double>> entries;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(unknowns);
  Eigen::Index row = 0;

  for (std::size_t e = 0; e < count; ++e) {
    elements[e].lo = breaks[e];
    elements[e].hi = breaks[e + 1];
    elements[e].nodes = numerics::chebyshev_nodes(p, breaks[e], breaks[e + 1]);
    d1[e] = numerics::chebyshev_derivative(p, breaks[e], breaks[e + 1]);
    d2[e] = d1[e] * d1[e];
    const auto offset = static_cast<Eigen::Index>(e * width);
    for (std::size_t i = 1; i < p; ++i) {
      const double xi = elements[e].nodes[i];
      const double drift = std::tanh(xi);
      const auto ii = static_cast<Eigen::Index>(i);
      for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(width); ++j) {
        double value = d2[e](ii, j) + drift * d1[e](ii, j);
        if (j == ii) value -= potential(k, xi);
        entries.emplace_back(row, offset + j, value);
      }
      rhs[row] = forcing ? forcing(xi) : 0.0;
      ++row;
    }
  }

  entries.emplace_back(row, 0, 1.0);
  rhs[row++] = seam_value;
  for (std::size_t e = 0; e + 1 < count; ++e) {
    const auto left = static_cast<Eigen::Index>(e * width);
    const auto right = static_cast<Eigen::Index>((e + 1) * width);
    const auto last = static_cast<Eigen::Index>(p);
    entries.emplace_back(row, left + last, 1.0);
    entries.emplace_back(row, right, -1.0);
    ++row;
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(width); ++j) {
      entries.emplace_back(row, left + j, d1[e](last, j));
      entries.emplace_back(row, right + j, -d1[e + 1](0, j));
    }
    ++row;
  }
  {
    const auto offset = static_cast<Eigen::Index>((count - 1) * width);
    const auto last = static_cast<Eigen::Index>(p);
    if (outer_bc == OuterBoundary::dirichlet_zero) {
      entries.emplace_back(row, offset + last, 1.0);
    } else {
      for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(width); ++j) {
        entries.emplace_back(row, offset + j, d1[count - 1](last, j));
      }
    }
    ++row;
  }

  Eigen::SparseMatrix<double> matrix(unknowns, unknowns);
  matrix.setFromTriplets(entries.begin(), entries.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(matrix);
  if (lu.info() != Eigen::Success) throw SolveError("collocation: singular system");
  const Eigen::VectorXd solution = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !solution.allFinite()) {
    throw SolveError("collocation: solve failed");
  }

  for (std::size_t e = 0; e < count; ++e) {
    const Eigen::VectorXd local =
        solution.segment(static_cast<Eigen::Index>(e * width), static_cast<Eigen::Index>(width));
    const Eigen::VectorXd first = d1[e] * local;
    const Eigen::VectorXd second = d2[e] * local;
    elements[e].b.assign(local.data(), local.data() + local.size());
    elements[e].db.assign(first.data(), first.data() + first.size());
    elements[e].d2b.assign(second.data(), second.data() + second.size());
  }
  return elements;
}

HyperbolicModeSolution mode_solve(int n, double ell, double a, OuterBoundary outer_bc,
                                  double seam_dirichlet, const SolveOptions& options) {
  if (n < 0) throw DomainError("mode index must be non-negative");
  if (!(ell > 0.0)) throw DomainError("ell must be positive");
  if (!(a > 0.0)) throw DomainError("strip half-width must be positive");

  HyperbolicModeSolution sol;
  sol.n = n;
  sol.ell = ell;
  sol.a = a;
  sol.outer_bc = outer_bc;
  sol.seam_value = seam_dirichlet;

  const double k = mode_wavenumber(n, ell);
  const std::vector<double> grid = graded_grid(a, options.samples);
  const std::vector<ModeSample> shot = shoot(n, ell, a, outer_bc, grid, options.shooting_tolerance);
  sol.elements = collocate(k, a, outer_bc, 1.0, {}, options);
  sol.dtn = sol.elements.front().db.front();

  double worst = std::abs(shot.front().db - sol.dtn) / (1.0 + std::abs(sol.dtn));
  sol.samples.reserve(grid.size());
  for (const ModeSample& s : shot) {
    const double b = sol.value(s.xi);
    const double db = sol.derivative(s.xi);
    worst = std::max(worst, std::abs(s.b - b));
    worst = std::max(worst, std::abs(s.db - db) / (1.0 + std::abs(sol.dtn)));
    sol.samples.push_back({s.xi, b, db});
  }
  sol.cross_method_error = worst;
  if (!(worst <= options.cross_tolerance)) {
    throw SolveError("mode " + std::to_string(n) + ": shooting and collocation differ by " +
                     std::to_string(worst));
  }
  scale_solution(sol, seam_dirichlet);
  return sol;
}

double dtn(int n, double ell, double a, OuterBoundary outer_bc, const SolveOptions& options) {
  return mode_solve(n, ell, a, outer_bc, 1.0, options).dtn;
}

double HyperbolicField::value(Side side, double xi, double y) const {
  const spectral::TraceModes& trace = seam_trace(side);
  double out = trace.mean * profiles.at(0).value(xi);
  for (std::size_t i = 0; i < trace.modes.size(); ++i) {
    const int n = static_cast<int>(i) + 1;
    const auto phase = std::polar(1.0, mode_wavenumber(n, ell) * y);
    out += 2.0 * (trace.modes[i] * phase).real() * profiles.at(i + 1).value(xi);
  }
  return out;
}

HyperbolicField solve_hyperbolic_field(const geometry::GraftedCollar& chart,
                                       const spectral::FourierSolution& sol,
                                       const SolveOptions& options) {
  HyperbolicField field;
  field.ell = chart.ell();
  field.a = chart.a();
  field.outer_bc = chart.outer_bc();
  field.left = spectral::dirichlet_trace(sol, Side::left);
  field.right = spectral::dirichlet_trace(sol, Side::right);
  field.profiles.resize(sol.truncation() + 1);
  parallel_for(field.profiles.size(), [&](std::size_t n) {
    field.profiles[n] =
        mode_solve(static_cast<int>(n), field.ell, field.a, field.outer_bc, 1.0, options);
  });
  return field;
}

HyperbolicField rebind(const HyperbolicField& field, const spectral::FourierSolution& sol) {
  if (sol.ell != field.ell) throw DomainError("rebind: circumference differs");
  if (sol.truncation() + 1 > field.profiles.size()) throw DomainError("rebind: unsolved modes");
  HyperbolicField out = field;
  out.left = spectral::dirichlet_trace(sol, Side::left);
  out.right = spectral::dirichlet_trace(sol, Side::right);
  out.profiles.resize(sol.truncation() + 1);
  return out;
}

namespace {

// Mode weights ell * |A|^2 summed over both seams (the pair n, -n counted twice).
std::vector<double> mode_weights(const HyperbolicField& field) {
  std::vector<double> w(field.profiles.size(), 0.0);
  for (const auto* trace : {&field.left, &field.right}) {
    w[0] += field.ell * trace->mean * trace->mean;
    for (std::size_t i = 0; i < trace->modes.size(); ++i) {
      w[i + 1] += 2.0 * field.ell * std::norm(trace->modes[i]);
    }
  }
  return w;
}

double mode_energy(const HyperbolicModeSolution& profile) {
  const double k = profile.wavenumber();
  return integrate_profile(profile.elements, [k](double xi, double b, double db, double) {
    return (db * db + potential(k, xi) * b * b) * std::cosh(xi);
  });
}

}  // namespace

InteriorIntegrals interior_integral(const HyperbolicField& field) {
  InteriorIntegrals out;
  if (field.profiles.empty()) return out;
  const double mass0 = integrate_profile(
      field.profiles[0].elements,
      [](double xi, double b, double, double) { return b * std::cosh(xi); });
  out.mass = field.ell * (field.left.mean + field.right.mean) * mass0;
  const std::vector<double> w = mode_weights(field);
  for (std::size_t n = 0; n < field.profiles.size(); ++n) {
    if (w[n] != 0.0) out.energy += w[n] * mode_energy(field.profiles[n]);
  }
  return out;
}

GreensBreakdown greens_residual(const HyperbolicField& field) {
  GreensBreakdown out;
  const std::vector<double> w = mode_weights(field);
  for (std::size_t n = 0; n < field.profiles.size(); ++n) {
    if (w[n] == 0.0) continue;
    const auto& profile = field.profiles[n];
    const double k = profile.wavenumber();
    const double lhs = integrate_profile(
        profile.elements, [k](double xi, double b, double db, double d2b) {
          return b * (d2b + std::tanh(xi) * db - potential(k, xi) * b) * std::cosh(xi);
        });
    const double b0 = profile.value(0.0);
    const double outer = std::cosh(profile.a) * profile.value(profile.a) *
                         profile.derivative(profile.a);
    out.lhs += w[n] * lhs;
    out.energy += w[n] * mode_energy(profile);
    out.seam_term += w[n] * (-b0 * profile.derivative(0.0));
    out.outer_term += w[n] * outer;
  }
  out.residual = out.lhs + out.energy - out.seam_term - out.outer_term;
  return out;
}

GreensBreakdown greens_residual(double k, double a, double weight,
                                const std::function<double(double)>& b,
                                const std::function<double(double)>& db,
                                const std::function<double(double)>& d2b) {
  constexpr std::size_t kPanels = 64;
  GreensBreakdown out;
  out.lhs = weight * numerics::gauss_legendre(
                         [&](double xi) {
                           return b(xi) * (d2b(xi) + std::tanh(xi) * db(xi) -
                                           potential(k, xi) * b(xi)) *
                                  std::cosh(xi);
                         },
                         0.0, a, kPanels);
  out.energy = weight * numerics::gauss_legendre(
                            [&](double xi) {
                              const double d = db(xi);
                              const double v = b(xi);
                              return (d * d + potential(k, xi) * v * v) * std::cosh(xi);
                            },
                            0.0, a, kPanels);
  out.seam_term = weight * (-b(0.0) * db(0.0));
  out.outer_term = weight * std::cosh(a) * b(a) * db(a);
  out.residual = out.lhs + out.energy - out.seam_term - out.outer_term;
  return out;
}

MassFlux mass_flux(const HyperbolicField& field) {
  MassFlux out;
  out.interior = interior_integral(field).mass;
  const auto& profile = field.profiles.at(0);
  const double sum = field.left.mean + field.right.mean;
  out.seam_flux = 0.5 * field.ell * sum * (-profile.derivative(0.0));
  out.outer_flux =
      0.5 * field.ell * sum * std::cosh(profile.a) * profile.derivative(profile.a);
  return out;
}

void write_csv(std::ostream& out, const HyperbolicModeSolution& solution) {
  out << "xi,b,db\n";
  char line[96];
  for (const auto& s : solution.samples) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", s.xi, s.b, s.db);
    out << line;
  }
}

}  // namespace graftlab::hypersolve
