#pragma once

#include "graftlab/common.hpp"
#include "graftlab/geometry.hpp"
#include "graftlab/spectral.hpp"

#include <functional>
#include <iosfwd>
#include <vector>

namespace graftlab::hypersolve {

/// Mode equation of (Delta_h - 2) H = 0 on a strip with metric d xi^2 + cosh^2(xi) dy^2,
/// xi in [0, a] measured from the seam:
///
///   b'' + tanh(xi) b' - (k^2 / cosh^2(xi) + 2) b = 0,   k = 2 pi n / ell.
double mode_wavenumber(int n, double ell);

struct ModeSample {
  double xi = 0.0;
  double b = 0.0;
  double db = 0.0;
};

/// One spectral element of the collocation solution.
struct Element {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> nodes;
  std::vector<double> b;
  std::vector<double> db;
  std::vector<double> d2b;
};

struct SolveOptions {
  std::size_t samples = 512;
  std::size_t degree = 24;
  double growth = 1.6;
  double shooting_tolerance = 1e-13;
  double cross_tolerance = 1e-8;
};

struct HyperbolicModeSolution {
  int n = 0;
  double ell = 1.0;
  double a = 1.0;
  OuterBoundary outer_bc = OuterBoundary::dirichlet_zero;
  double seam_value = 0.0;
  std::vector<ModeSample> samples;  ///< graded grid, clustered at the seam
  double dtn = 0.0;                 ///< b'(0) / b(0) of the homogeneous problem
  double cross_method_error = 0.0;  ///< shooting vs collocation
  std::vector<Element> elements;    ///< collocation representation

  double wavenumber() const { return mode_wavenumber(n, ell); }
  /// b, b', b'' at xi from the collocation representation.
  double value(double xi) const;
  double derivative(double xi) const;
  double second_derivative(double xi) const;
};

/// Graded samples xi_j = a (1 - cos(pi j / (2 (M - 1)))), j = 0..M-1.
std::vector<double> graded_grid(double a, std::size_t points);

/// Solves the mode BVP with b(0) = seam_dirichlet and the outer condition at xi = a by
/// backward adaptive shooting and by spectral-element collocation. Throws SolveError when
/// the two routes disagree by more than options.cross_tolerance.
HyperbolicModeSolution mode_solve(int n, double ell, double a, OuterBoundary outer_bc,
                                  double seam_dirichlet, const SolveOptions& options = {});

/// Shooting route only: (b(0), b'(0)) of the solution normalised so that b(0) = 1,
/// sampled on `grid`.
std::vector<ModeSample> shoot(int n, double ell, double a, OuterBoundary outer_bc,
                              const std::vector<double>& grid, double tolerance = 1e-13);

/// Collocation route with a forcing term: b'' + tanh b' - (k^2 sech^2 + 2) b = f.
std::vector<Element> collocate(double k, double a, OuterBoundary outer_bc, double seam_value,
                               const std::function<double(double)>& forcing,
                               const SolveOptions& options = {});

/// Seam Dirichlet-to-Neumann ratio b'(0) / b(0).
double dtn(int n, double ell, double a, OuterBoundary outer_bc, const SolveOptions& options = {});

/// Hyperbolic-side field on both strips, built from the seam Dirichlet traces of a flat
/// solution. profiles[n] is the mode-n solution with unit seam value.
struct HyperbolicField {
  double ell = 1.0;
  double a = 1.0;
  OuterBoundary outer_bc = OuterBoundary::dirichlet_zero;
  std::vector<HyperbolicModeSolution> profiles;
  spectral::TraceModes left;
  spectral::TraceModes right;

  const spectral::TraceModes& seam_trace(Side side) const {
    return side == Side::left ? left : right;
  }
  /// Field value at distance xi from the given seam.
  double value(Side side, double xi, double y) const;
};

HyperbolicField solve_hyperbolic_field(const geometry::GraftedCollar& chart,
                                       const spectral::FourierSolution& sol,
                                       const SolveOptions& options = {});

/// The same profiles with the seam traces of another solution on a chart with equal ell,
/// a and outer condition (profiles do not depend on s).
HyperbolicField rebind(const HyperbolicField& field, const spectral::FourierSolution& sol);

/// Both strips together.
struct InteriorIntegrals {
  double mass = 0.0;    ///< integral of H dA
  double energy = 0.0;  ///< integral of (|grad H|^2 + 2 H^2) dA
};

InteriorIntegrals interior_integral(const HyperbolicField& field);

/// Terms of  int H (Delta - 2) H = -int (|grad H|^2 + 2 H^2) + boundary,  with the seam
/// and outer circles of both strips listed separately (outward normals).
struct GreensBreakdown {
  double lhs = 0.0;
  double energy = 0.0;
  double seam_term = 0.0;
  double outer_term = 0.0;
  double residual = 0.0;  ///< lhs + energy - seam_term - outer_term
};

GreensBreakdown greens_residual(const HyperbolicField& field);

/// The same identity for a single profile b on one strip with weight ell (mode integral
/// over y), given b, b', b'' as functions. Used with manufactured profiles.
GreensBreakdown greens_residual(double k, double a, double weight,
                                const std::function<double(double)>& b,
                                const std::function<double(double)>& db,
                                const std::function<double(double)>& d2b);

/// Mass flux form: int H = 1/2 (seam flux + outer flux), each reported separately.
struct MassFlux {
  double interior = 0.0;
  double seam_flux = 0.0;   ///< 1/2 sum over seams of ell * A0 * (-b0'(0))
  double outer_flux = 0.0;  ///< 1/2 sum over strips of ell * A0 * cosh(a) b0'(a)
};

MassFlux mass_flux(const HyperbolicField& field);

/// CSV rows "xi,b,db" with a header.
void write_csv(std::ostream& out, const HyperbolicModeSolution& solution);

}  // namespace graftlab::hypersolve
