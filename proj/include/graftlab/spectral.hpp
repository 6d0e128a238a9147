#pragma once

#include "graftlab/common.hpp"

#include "json.hpp"

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

namespace graftlab::spectral {

using Complex = std::complex<double>;

/// Coefficients (c_n, d_n) of the n-th cosh/sinh pair.
struct ModePair {
  Complex c{};
  Complex d{};
};

/// Harmonic function on the flat cylinder |x| <= s/2, y in [0, ell):
///
///   H(x, y) = c0 x + d0 + sum_{n != 0} (c_n cosh(k_n x) + d_n sinh(k_n x)) e^{i k_n y},
///
/// with k_n = 2 pi n / ell. Only n >= 1 is stored; the negative modes are implied by
/// c_{-n} = conj(c_n), d_{-n} = -conj(d_n), which makes H real.
struct FourierSolution {
  double ell = 1.0;
  double s = 0.0;
  double c0 = 0.0;
  double d0 = 0.0;
  std::vector<ModePair> modes;  ///< modes[n - 1] holds mode n

  std::size_t truncation() const { return modes.size(); }
  double wavenumber(int n) const { return 2.0 * kPi * n / ell; }
};

enum class TraceKind { dirichlet, neumann_flat, neumann_hyperbolic };

/// Real function of y on a seam, mean + sum_{n != 0} modes[|n|-1] e^{i k_n y} with the
/// negative modes given by complex conjugation.
struct TraceModes {
  Side side = Side::left;
  TraceKind kind = TraceKind::dirichlet;
  double ell = 1.0;
  double mean = 0.0;
  std::vector<Complex> modes;

  std::size_t truncation() const { return modes.size(); }
};

/// Point value of a trace at y.
double trace_value(const TraceModes& trace, double y);

/// Trace rotated by y0: f(y) -> f(y - y0), i.e. every mode picks up e^{-i k_n y0}.
TraceModes rotate(const TraceModes& trace, double y0);

/// Partial sum of the series at (x, y). Requires |x| <= s/2.
double evaluate(const FourierSolution& sol, double x, double y);

/// Same series summed over n = -N..N with the implied negative modes; the imaginary part
/// of the result measures how far the pairing convention is from producing a real field.
Complex evaluate_symmetric(const FourierSolution& sol, double x, double y);

/// x-derivative of the series (the flat-side normal derivative).
double evaluate_dx(const FourierSolution& sol, double x, double y);

/// evaluate / evaluate_dx without the domain check: the series continued analytically past
/// the seams.
double evaluate_continued(const FourierSolution& sol, double x, double y);
double evaluate_dx_continued(const FourierSolution& sol, double x, double y);

/// y-derivative of the series.
double evaluate_dy(const FourierSolution& sol, double x, double y);

/// Dirichlet trace on a seam: mean -/+ c0 s/2 + d0, modes c_n cosh(pi n s/ell) -/+ d_n sinh.
TraceModes dirichlet_trace(const FourierSolution& sol, Side side);

/// Flat-side x-derivative on a seam: mean c0, modes k_n(-/+ c_n sinh + d_n cosh).
TraceModes neumann_trace_flat(const FourierSolution& sol, Side side);

/// Inverts dirichlet_trace. Throws DomainError when s = 0 and the two sides differ (the
/// sinh column vanishes) or when the traces disagree in ell or truncation.
FourierSolution from_boundary_data(const TraceModes& left, const TraceModes& right, double ell,
                                   double s);

/// Uniform interior grid with spacing h in both directions on [x_min, x_max] x [0, ell).
struct StencilGrid {
  double x_min = 0.0;
  double x_max = 0.0;
  double ell = 1.0;
  double h = 0.0;
};

/// Max |5-point Laplacian| over the grid interior.
double harmonicity_residual(const std::function<double(double, double)>& field,
                            const StencilGrid& grid);
double harmonicity_residual(const FourierSolution& sol, const StencilGrid& grid);

/// Seeded random harmonic field with c0 = 0, built from random O(1) seam traces whose
/// mode amplitudes decay like 1/n. Used to generate test configurations.
FourierSolution random_solution(double ell, double s, std::size_t truncation, std::uint64_t seed,
                                double amplitude = 1.0);

nlohmann::json to_json(const FourierSolution& sol);
FourierSolution solution_from_json(const nlohmann::json& doc);

}  // namespace graftlab::spectral
