#pragma once

#include "graftlab/geometry.hpp"
#include "graftlab/hypersolve.hpp"
#include "graftlab/spectral.hpp"
#include "graftlab/variation.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace graftlab::identities {

/// Weight of each stored n >= 1 term in the primed sum over n != 0: the n and -n
/// contributions are equal, as confirmed by the seam quadrature oracle.
inline constexpr double kPrimedSumWeight = 2.0;

/// Coefficient c in -sum_{n>0} (4 pi^2 n^2 + ell^2)(c / (pi n)) Im[v conj(c) + u conj(d)] S C,
/// fixed by the same quadrature oracle.
inline constexpr double kCrossTermWeight = 4.0;

inline constexpr double kAlgebraicTolerance = 1e-10;
inline constexpr double kSolverTolerance = 1e-7;

struct Term {
  std::string label;
  double value = 0.0;
};

struct IdentityReport {
  std::string identity;
  std::vector<Term> terms;
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_err = 0.0;
  double rel_err = 0.0;
  double tol = 0.0;
  bool pass = false;
  std::vector<std::string> notes;

  double term(const std::string& label) const;
};

/// Fills abs_err, rel_err and pass (abs_err <= tol or rel_err <= tol).
IdentityReport make_report(std::string identity, std::vector<Term> terms, double lhs, double rhs,
                           double tol, std::vector<std::string> notes = {});

/// A check with a boolean outcome and a measured value; lhs = value, rhs = bound.
IdentityReport make_bound_report(std::string identity, std::vector<Term> terms, double value,
                                 double bound, bool pass, std::vector<std::string> notes = {});

nlohmann::json to_json(const IdentityReport& report);

/// Flat solution, seam variation fields and slice data of one configuration.
struct Configuration {
  geometry::GraftedCollar chart;
  spectral::FourierSolution sol;
  variation::VariationField left;
  variation::VariationField right;
  double s_rate = 0.0;
  std::optional<variation::QuadDiffModes> quad;
};

/// Solves the seam variations (amended when quad is present) and fixes lambda_0, rho_0 by
/// the slice condition, split symmetrically. Requires c0 = 0.
Configuration make_configuration(const geometry::GraftedCollar& chart,
                                 const spectral::FourierSolution& sol, double s_rate = 0.0,
                                 std::optional<variation::QuadDiffModes> quad = std::nullopt);

/// Required value of lambda_0 - rho_0: -s d0/2 - s_rate, minus (s/ell) int Re phi when
/// quadratic-differential data are present.
double slice_difference(const Configuration& config);
void apply_slice_condition(Configuration& config);

/// integral over y in [0, ell) of Re phi (any x in the flat stratum).
double re_phi_integral(const variation::QuadDiffModes& q);

/// -(1/pi) sum' (1/n)(4 pi^2 n^2 + ell^2)(|c_n|^2 + |d_n|^2) sinh(pi n s/ell) cosh(pi n s/ell).
double spectral_sum(const spectral::FourierSolution& sol);
/// The same sum written with L = ell s: arguments pi n L / ell^2.
double spectral_sum_length_form(const spectral::FourierSolution& sol, double length);

/// 2 ell d0 (lambda_0 - rho_0) + spectral_sum(sol).
double boundary_term_closed(const spectral::FourierSolution& sol,
                            const variation::VariationField& v_left,
                            const variation::VariationField& v_right);

/// Seam integral of H d_n H with outward normals +d_x on the left seam and -d_x on the
/// right one, by the trapezoid rule on reconstructed traces.
double boundary_term_quadrature(const spectral::TraceModes& dirichlet_left,
                                const spectral::TraceModes& dirichlet_right,
                                const spectral::TraceModes& neumann_left,
                                const spectral::TraceModes& neumann_right,
                                std::size_t points = 4096);

/// -sum_{n>0} (4 pi^2 n^2 + ell^2)(kCrossTermWeight / (pi n)) Im[v_n conj(c_n) + u_n conj(d_n)] S C.
double cross_term(const spectral::FourierSolution& sol, const variation::QuadDiffModes& q);

double extended_boundary_term_closed(const spectral::FourierSolution& sol,
                                     const variation::QuadDiffModes& q,
                                     const variation::VariationField& w_left,
                                     const variation::VariationField& w_right);

/// Quadrature of the seam integral with the amended hyperbolic Neumann data.
double extended_boundary_term_quadrature(const spectral::FourierSolution& sol,
                                         const variation::VariationField& w_left,
                                         const variation::VariationField& w_right,
                                         std::size_t points = 4096);

struct MasterResult {
  IdentityReport report;
  bool all_terms_nonpositive = false;
  bool contradiction = false;  ///< nonpositive terms with a strictly negative total
};

/// -E - (spectral sum) - ell s d0^2 (with the slice condition substituted) against the
/// outer Green term of the strips. The identity holds only for the zero field.
MasterResult master_identity(const Configuration& config,
                             const hypersolve::HyperbolicField& hyper,
                             double tol = kSolverTolerance);

IdentityReport slice_condition(const spectral::FourierSolution& sol,
                               const variation::VariationField& v_left,
                               const variation::VariationField& v_right, double s_rate,
                               double tol = 1e-12);

/// -1/2 d0 ell s + ell s_rate. Throws DomainError when c0 != 0.
double area_derivative_geometric(const spectral::FourierSolution& sol, double s_rate);

/// -ell (lambda_0 - rho_0) - d0 ell s.
double area_derivative_analytic(const spectral::FourierSolution& sol,
                                const variation::VariationField& v_left,
                                const variation::VariationField& v_right);

IdentityReport area_two_methods(const Configuration& config, double tol = 1e-9);

/// int over the strips of H against its Green form 1/2 (seam flux + outer flux), with the
/// seam flux compared to ell (lambda_0 - rho_0) of the DtN-matched means.
IdentityReport hyperbolic_mass_check(const hypersolve::HyperbolicField& hyper,
                                     double tol = kSolverTolerance);

/// -1/2 int_0^ell (H - 2 Re phi)(x_seam, y) dy by Gauss-Legendre quadrature.
double arc_length_derivative(const spectral::FourierSolution& sol,
                             const std::optional<variation::QuadDiffModes>& q, Side side);

struct ExtendedResult {
  IdentityReport report;         ///< model form of the extended master identity
  IdentityReport length_form;    ///< the same terms with L = ell s
  double remainder = 0.0;        ///< 2 d0 (-s int Re phi)
  double remainder_ratio = 0.0;  ///< |remainder| / (ell s ||Phi'||)
  double non_conformal = 0.0;    ///< sum of the terms that vanish with q
};

ExtendedResult extended_master_identity(const Configuration& config,
                                        const hypersolve::HyperbolicField& hyper,
                                        double tol = kSolverTolerance);

/// Row-normalised determinant of the mode-n system in (c_n, d_n) built from the seam
/// Dirichlet traces, the variation-mediated Neumann data and the hyperbolic DtN ratio on
/// both strips: -2 min(P, Q) / max(P, Q), P = K S - D C, Q = K C - D S.
double mode_system_determinant(int n, double ell, double s, double dtn);

/// Coefficient of d0 in the n = 0 balance under the slice condition: s/2 - D_0.
double zero_mode_balance(double s, double dtn0);

}  // namespace graftlab::identities
