#include "graftlab/variation.hpp"

#include "graftlab/numerics.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <string>

namespace graftlab::variation {

namespace {

constexpr Complex kI{0.0, 1.0};

double wavenumber(double ell, int n) { return 2.0 * kPi * n / ell; }

Complex mode_phase(double ell, int n, double y) { return std::polar(1.0, wavenumber(ell, n) * y); }

}  // namespace

double value(const VariationField& v, double y) {
  double out = v.mean;
  for (std::size_t i = 0; i < v.modes.size(); ++i) {
    const int n = static_cast<int>(i) + 1;
    out += 2.0 * (v.modes[i] * mode_phase(v.ell, n, y)).real();
  }
  return out;
}

double second_derivative(const VariationField& v, double y) {
  double out = 0.0;
  for (std::size_t i = 0; i < v.modes.size(); ++i) {
    const int n = static_cast<int>(i) + 1;
    const double k = wavenumber(v.ell, n);
    out -= 2.0 * k * k * (v.modes[i] * mode_phase(v.ell, n, y)).real();
  }
  return out;
}

spectral::FourierSolution QuadDiffModes::im_part() const {
  spectral::FourierSolution sol{ell, s, u0, v0, {}};
  sol.modes.reserve(modes.size());
  for (const auto& m : modes) sol.modes.push_back({m.u, m.v});
  return sol;
}

double QuadDiffModes::norm() const {
  double sum = u0 * u0 + v0 * v0 + re_mean * re_mean;
  for (const auto& m : modes) sum += 2.0 * (std::norm(m.u) + std::norm(m.v));
  return std::sqrt(sum);
}

QuadDiffModes QuadDiffModes::scaled(double factor) const {
  QuadDiffModes out = *this;
  out.u0 *= factor;
  out.v0 *= factor;
  out.re_mean *= factor;
  for (auto& m : out.modes) {
    m.u *= factor;
    m.v *= factor;
  }
  return out;
}

QuadDiffModes random_quad(double ell, double s, std::size_t truncation, std::uint64_t seed,
                          double amplitude) {
  const auto im = spectral::random_solution(ell, s, truncation, seed, amplitude);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> normal(0.0, amplitude);
  QuadDiffModes q{ell, s, normal(rng), normal(rng), normal(rng), {}};
  q.modes.reserve(im.modes.size());
  for (const auto& m : im.modes) q.modes.push_back({m.c, m.d});
  return q;
}

double im_phi(const QuadDiffModes& q, double x, double y) {
  return spectral::evaluate(q.im_part(), x, y);
}

double re_phi(const QuadDiffModes& q, double x, double y) {
  if (std::abs(x) > 0.5 * q.s * (1.0 + 1e-12) + 1e-12) {
    throw DomainError("Re phi is only available on the flat stratum");
  }
  double out = q.re_mean - q.u0 * y;
  for (std::size_t i = 0; i < q.modes.size(); ++i) {
    const int n = static_cast<int>(i) + 1;
    const double k = wavenumber(q.ell, n);
    const Complex a = kI * (q.modes[i].u * std::sinh(k * x) + q.modes[i].v * std::cosh(k * x));
    out += 2.0 * (a * mode_phase(q.ell, n, y)).real();
  }
  return out;
}

VariationField solve_flat_variation(const TraceModes& flat_neumann, double mean_value) {
  if (flat_neumann.kind != spectral::TraceKind::neumann_flat) {
    throw DomainError("solve_flat_variation needs a flat-side Neumann trace");
  }
  // Mode 0 of V_yy = -1/2 (d_x H)_0 reads 0 = -c0 / 2.
  if (flat_neumann.mean != 0.0) {
    throw DomainError("no periodic solution: flat Neumann mean c0 must vanish");
  }
  VariationField v{flat_neumann.side, flat_neumann.ell, mean_value, {}, false};
  v.modes.reserve(flat_neumann.modes.size());
  for (std::size_t i = 0; i < flat_neumann.modes.size(); ++i) {
    const double k = wavenumber(flat_neumann.ell, static_cast<int>(i) + 1);
    // -k^2 lambda_n = -1/2 N_n
    v.modes.push_back(flat_neumann.modes[i] / (2.0 * k * k));
  }
  return v;
}

namespace {

TraceModes neumann_from_variation(const VariationField& v) {
  TraceModes out{v.side, spectral::TraceKind::neumann_hyperbolic, v.ell, 2.0 * v.mean, {}};
  out.modes.reserve(v.modes.size());
  for (std::size_t i = 0; i < v.modes.size(); ++i) {
    const double k = wavenumber(v.ell, static_cast<int>(i) + 1);
    out.modes.push_back(2.0 * (1.0 + k * k) * v.modes[i]);
  }
  return out;
}

}  // namespace

TraceModes hyperbolic_neumann(const VariationField& v) {
  if (v.amended) throw DomainError("hyperbolic_neumann expects an unamended variation field");
  return neumann_from_variation(v);
}

Complex flat_variation_coefficient(const spectral::FourierSolution& sol, Side side, int n) {
  const double sign = side_sign(side);
  const double arg = kPi * n * sol.s / sol.ell;
  const auto& m = sol.modes.at(static_cast<std::size_t>(n) - 1);
  return sol.ell / (4.0 * kPi * n) * (sign * m.c * std::sinh(arg) + m.d * std::cosh(arg));
}

TraceModes hyperbolic_neumann_closed(const spectral::FourierSolution& sol, Side side,
                                     double mean_value) {
  const double sign = side_sign(side);
  const double ell = sol.ell;
  TraceModes out{side, spectral::TraceKind::neumann_hyperbolic, ell, 2.0 * mean_value, {}};
  for (std::size_t i = 0; i < sol.modes.size(); ++i) {
    const double n = static_cast<double>(i + 1);
    const double arg = kPi * n * sol.s / ell;
    const double factor = (4.0 * kPi * kPi * n * n + ell * ell) / (2.0 * kPi * n * ell);
    out.modes.push_back(factor * (sign * sol.modes[i].c * std::sinh(arg) +
                                  sol.modes[i].d * std::cosh(arg)));
  }
  return out;
}

VariationField solve_amended_variation(const TraceModes& flat_neumann, const QuadDiffModes& q,
                                       double mean_value) {
  VariationField w = solve_flat_variation(flat_neumann, mean_value);
  if (q.ell != flat_neumann.ell) throw DomainError("quadratic differential circumference mismatch");
  const TraceModes im_trace = spectral::dirichlet_trace(q.im_part(), flat_neumann.side);
  const std::size_t count = std::max(w.modes.size(), im_trace.modes.size());
  w.modes.resize(count);
  for (std::size_t i = 0; i < im_trace.modes.size(); ++i) {
    const double n = static_cast<double>(i + 1);
    w.modes[i] += q.ell / (2.0 * kPi * kI * n) * im_trace.modes[i];
  }
  w.amended = true;
  return w;
}

TraceModes extended_hyperbolic_neumann(const VariationField& w) {
  if (!w.amended) throw DomainError("extended_hyperbolic_neumann expects an amended field");
  return neumann_from_variation(w);
}

TraceModes extended_hyperbolic_neumann_closed(const spectral::FourierSolution& sol,
                                              const QuadDiffModes& q, Side side,
                                              double mean_value) {
  const double sign = side_sign(side);
  const double ell = sol.ell;
  TraceModes out{side, spectral::TraceKind::neumann_hyperbolic, ell, 2.0 * mean_value, {}};
  const std::size_t count = std::max(sol.modes.size(), q.modes.size());
  for (std::size_t i = 0; i < count; ++i) {
    const double n = static_cast<double>(i + 1);
    const double arg = kPi * n * sol.s / ell;
    const double sh = std::sinh(arg);
    const double ch = std::cosh(arg);
    const Complex c = i < sol.modes.size() ? sol.modes[i].c : Complex{};
    const Complex d = i < sol.modes.size() ? sol.modes[i].d : Complex{};
    const Complex u = i < q.modes.size() ? q.modes[i].u : Complex{};
    const Complex v = i < q.modes.size() ? q.modes[i].v : Complex{};
    const double weight = 4.0 * kPi * kPi * n * n + ell * ell;
    const double factor = weight / (2.0 * kPi * n * ell);
    const Complex conformal = factor * (sign * c * sh + d * ch);
    out.modes.push_back(conformal + weight * (u * ch + sign * v * sh) / (kPi * kI * n * ell));
  }
  return out;
}

VariationField solve_periodic_collocation(const std::function<double(double)>& forcing, Side side,
                                          double ell, double mean_value, std::size_t truncation,
                                          std::size_t nodes) {
  if (nodes % 2 != 0 || nodes <= 2 * truncation) {
    throw DomainError("collocation needs an even node count above twice the truncation");
  }
  const std::vector<double> y = numerics::periodic_nodes(ell, nodes);
  const auto m = static_cast<Eigen::Index>(nodes);
  Eigen::VectorXd f(m);
  for (Eigen::Index j = 0; j < m; ++j) f[j] = forcing(y[static_cast<std::size_t>(j)]);
  const double f_mean = f.mean();
  if (std::abs(f_mean) > 1e-12 * std::max(1.0, f.lpNorm<Eigen::Infinity>())) {
    throw DomainError("no periodic solution: forcing mean " + std::to_string(f_mean));
  }
  // D2 annihilates constants; the rank-one term pins the mean.
  Eigen::MatrixXd a = numerics::fourier_second_derivative(nodes, ell);
  a.array() += 1.0 / static_cast<double>(nodes);
  const Eigen::VectorXd rhs = (f.array() - f_mean + mean_value).matrix();
  const Eigen::VectorXd values = a.partialPivLu().solve(rhs);

  VariationField v{side, ell, values.mean(), {}, false};
  v.modes.reserve(truncation);
  for (std::size_t n = 1; n <= truncation; ++n) {
    v.modes.push_back(numerics::fourier_coefficient(
        std::span<const double>(values.data(), nodes), static_cast<int>(n)));
  }
  return v;
}

TraceModes hyperbolic_neumann_collocation(const VariationField& v, std::size_t nodes) {
  const std::vector<double> y = numerics::periodic_nodes(v.ell, nodes);
  const auto m = static_cast<Eigen::Index>(nodes);
  Eigen::VectorXd values(m);
  for (Eigen::Index j = 0; j < m; ++j) values[j] = value(v, y[static_cast<std::size_t>(j)]);
  const Eigen::VectorXd out =
      -2.0 * (numerics::fourier_second_derivative(nodes, v.ell) * values - values);
  TraceModes trace{v.side, spectral::TraceKind::neumann_hyperbolic, v.ell, out.mean(), {}};
  for (std::size_t n = 1; n <= v.modes.size(); ++n) {
    trace.modes.push_back(numerics::fourier_coefficient(
        std::span<const double>(out.data(), nodes), static_cast<int>(n)));
  }
  return trace;
}

}  // namespace graftlab::variation
