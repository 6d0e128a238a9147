#include "graftlab/spectral.hpp"

#include <cmath>
#include <random>
#include <string>

namespace graftlab::spectral {

namespace {

constexpr double kDomainSlack = 1e-12;

Complex mode_phase(double ell, int n, double y) { return std::polar(1.0, 2.0 * kPi * n * y / ell); }

void require_flat_domain(const FourierSolution& sol, double x) {
  if (std::abs(x) > 0.5 * sol.s + kDomainSlack * std::max(1.0, sol.s)) {
    throw DomainError("x = " + std::to_string(x) + " outside the flat cylinder");
  }
}

}  // namespace

double trace_value(const TraceModes& trace, double y) {
  double value = trace.mean;
  for (std::size_t i = 0; i < trace.modes.size(); ++i) {
    const int n = static_cast<int>(i) + 1;
    value += 2.0 * (trace.modes[i] * mode_phase(trace.ell, n, y)).real();
  }
  return value;
}

TraceModes rotate(const TraceModes& trace, double y0) {
  TraceModes out = trace;
  for (std::size_t i = 0; i < out.modes.size(); ++i) {
    const int n = static_cast<int>(i) + 1;
    out.modes[i] *= mode_phase(trace.ell, n, -y0);
  }
  return out;
}

double evaluate(const FourierSolution& sol, double x, double y) {
  require_flat_domain(sol, x);
  return evaluate_continued(sol, x, y);
}

double evaluate_continued(const FourierSolution& sol, double x, double y) {
  double value = sol.c0 * x + sol.d0;
  for (std::size_t i = 0; i < sol.modes.size(); ++i) {
    const int n = static_cast<int>(i) + 1;
    const double k = sol.wavenumber(n);
    const Complex a = sol.modes[i].c * std::cosh(k * x) + sol.modes[i].d * std::sinh(k * x);
    value += 2.0 * (a * mode_phase(sol.ell, n, y)).real();
  }
  return value;
}

Complex evaluate_symmetric(const FourierSolution& sol, double x, double y) {
  require_flat_domain(sol, x);
  Complex value = sol.c0 * x + sol.d0;
  const int big_n = static_cast<int>(sol.modes.size());
  for (int n = -big_n; n <= big_n; ++n) {
    if (n == 0) continue;
    const auto& m = sol.modes[static_cast<std::size_t>(std::abs(n)) - 1];
    const Complex c = n > 0 ? m.c : std::conj(m.c);
    const Complex d = n > 0 ? m.d : -std::conj(m.d);
    const double k = sol.wavenumber(n);
    value += (c * std::cosh(k * x) + d * std::sinh(k * x)) * mode_phase(sol.ell, n, y);
  }
  return value;
}

double evaluate_dx(const FourierSolution& sol, double x, double y) {
  require_flat_domain(sol, x);
  return evaluate_dx_continued(sol, x, y);
}

double evaluate_dx_continued(const FourierSolution& sol, double x, double y) {
  double value = sol.c0;
  for (std::size_t i = 0; i < sol.modes.size(); ++i) {
    const int n = static_cast<int>(i) + 1;
    const double k = sol.wavenumber(n);
    const Complex a = k * (sol.modes[i].c * std::sinh(k * x) + sol.modes[i].d * std::cosh(k * x));
    value += 2.0 * (a * mode_phase(sol.ell, n, y)).real();
  }
  return value;
}

double evaluate_dy(const FourierSolution& sol, double x, double y) {
  require_flat_domain(sol, x);
  double value = 0.0;
  for (std::size_t i = 0; i < sol.modes.size(); ++i) {
    const int n = static_cast<int>(i) + 1;
    const double k = sol.wavenumber(n);
    const Complex a = Complex{0.0, k} *
                      (sol.modes[i].c * std::cosh(k * x) + sol.modes[i].d * std::sinh(k * x));
    value += 2.0 * (a * mode_phase(sol.ell, n, y)).real();
  }
  return value;
}

TraceModes dirichlet_trace(const FourierSolution& sol, Side side) {
  const double sign = side_sign(side);
  TraceModes out{side, TraceKind::dirichlet, sol.ell, sign * sol.c0 * sol.s / 2.0 + sol.d0, {}};
  out.modes.reserve(sol.modes.size());
  for (std::size_t i = 0; i < sol.modes.size(); ++i) {
    const double arg = kPi * static_cast<double>(i + 1) * sol.s / sol.ell;
    out.modes.push_back(sol.modes[i].c * std::cosh(arg) + sign * sol.modes[i].d * std::sinh(arg));
  }
  return out;
}

TraceModes neumann_trace_flat(const FourierSolution& sol, Side side) {
  const double sign = side_sign(side);
  TraceModes out{side, TraceKind::neumann_flat, sol.ell, sol.c0, {}};
  out.modes.reserve(sol.modes.size());
  for (std::size_t i = 0; i < sol.modes.size(); ++i) {
    const int n = static_cast<int>(i) + 1;
    const double arg = kPi * n * sol.s / sol.ell;
    out.modes.push_back(sol.wavenumber(n) *
                        (sign * sol.modes[i].c * std::sinh(arg) + sol.modes[i].d * std::cosh(arg)));
  }
  return out;
}

FourierSolution from_boundary_data(const TraceModes& left, const TraceModes& right, double ell,
                                   double s) {
  if (left.kind != TraceKind::dirichlet || right.kind != TraceKind::dirichlet) {
    throw DomainError("from_boundary_data needs Dirichlet traces");
  }
  if (left.truncation() != right.truncation()) throw DomainError("trace truncations differ");
  if (left.ell != ell || right.ell != ell) throw DomainError("trace circumference mismatch");
  if (ell <= 0.0 || s < 0.0) throw DomainError("invalid cylinder dimensions");

  FourierSolution sol{ell, s, 0.0, 0.5 * (left.mean + right.mean), {}};
  if (s > 0.0) {
    sol.c0 = (right.mean - left.mean) / s;
  } else if (right.mean != left.mean) {
    throw DomainError("singular boundary system: s = 0 with differing mean data");
  }
  sol.modes.resize(left.truncation());
  for (std::size_t i = 0; i < sol.modes.size(); ++i) {
    const double arg = kPi * static_cast<double>(i + 1) * s / ell;
    const Complex sum = left.modes[i] + right.modes[i];
    const Complex diff = right.modes[i] - left.modes[i];
    sol.modes[i].c = sum / (2.0 * std::cosh(arg));
    if (s > 0.0) {
      sol.modes[i].d = diff / (2.0 * std::sinh(arg));
    } else if (diff != Complex{}) {
      // determinant 2 cosh(0) sinh(0) = 0
      throw DomainError("singular boundary system: s = 0 with differing mode " +
                        std::to_string(i + 1) + " data");
    }
  }
  return sol;
}

double harmonicity_residual(const std::function<double(double, double)>& field,
                            const StencilGrid& grid) {
  if (grid.h <= 0.0) throw DomainError("stencil spacing must be positive");
  const double h = grid.h;
  double worst = 0.0;
  for (double x = grid.x_min + h; x <= grid.x_max - h + 1e-12 * h; x += h) {
    for (double y = 0.0; y < grid.ell; y += h) {
      const double lap = (field(x + h, y) + field(x - h, y) + field(x, y + h) + field(x, y - h) -
                          4.0 * field(x, y)) /
                         (h * h);
      worst = std::max(worst, std::abs(lap));
    }
  }
  return worst;
}

double harmonicity_residual(const FourierSolution& sol, const StencilGrid& grid) {
  return harmonicity_residual([&sol](double x, double y) { return evaluate(sol, x, y); }, grid);
}

FourierSolution random_solution(double ell, double s, std::size_t truncation, std::uint64_t seed,
                                double amplitude) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto random_trace = [&](Side side) {
    TraceModes t{side, TraceKind::dirichlet, ell, 0.0, {}};
    t.modes.reserve(truncation);
    for (std::size_t i = 0; i < truncation; ++i) {
      const double scale = amplitude / static_cast<double>(i + 1);
      t.modes.emplace_back(scale * normal(rng), scale * normal(rng));
    }
    return t;
  };
  const double d0 = amplitude * normal(rng);
  TraceModes left = random_trace(Side::left);
  TraceModes right = random_trace(Side::right);
  left.mean = d0;
  right.mean = d0;
  if (s == 0.0) right.modes = left.modes;
  return from_boundary_data(left, right, ell, s);
}

nlohmann::json to_json(const FourierSolution& sol) {
  nlohmann::json modes = nlohmann::json::array();
  for (std::size_t i = 0; i < sol.modes.size(); ++i) {
    const auto& m = sol.modes[i];
    modes.push_back({{"n", i + 1},
                     {"c_re", m.c.real()},
                     {"c_im", m.c.imag()},
                     {"d_re", m.d.real()},
                     {"d_im", m.d.imag()}});
  }
  return {{"ell", sol.ell}, {"s", sol.s}, {"c0", sol.c0}, {"d0", sol.d0}, {"modes", modes}};
}

FourierSolution solution_from_json(const nlohmann::json& doc) {
  try {
    FourierSolution sol{doc.at("ell").get<double>(), doc.at("s").get<double>(),
                        doc.at("c0").get<double>(), doc.at("d0").get<double>(), {}};
    std::size_t max_n = 0;
    for (const auto& m : doc.at("modes")) max_n = std::max(max_n, m.at("n").get<std::size_t>());
    sol.modes.resize(max_n);
    for (const auto& m : doc.at("modes")) {
      const auto n = m.at("n").get<std::size_t>();
      if (n == 0) throw DomainError("mode index must be >= 1");
      sol.modes[n - 1] = {{m.at("c_re").get<double>(), m.at("c_im").get<double>()},
                          {m.at("d_re").get<double>(), m.at("d_im").get<double>()}};
    }
    return sol;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed solution document: ") + e.what());
  }
}

}  // namespace graftlab::spectral
