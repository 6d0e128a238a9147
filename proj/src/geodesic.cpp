#include "graftlab/geodesic.hpp"

#include "graftlab/numerics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace graftlab::variation {

namespace {

struct LocalTerms {
  double p = 0.0;  // (A X' + B) / sqrt(Q)
  double f = 0.0;  // (A_x X'^2 + 2 B_x X' + C_x) / (2 sqrt(Q))
};

class GeodesicProblem {
 public:
  GeodesicProblem(const geometry::ConformalFamily& fam, Side side, double t, std::size_t nodes)
      : fam_(fam),
        side_(side),
        t_(t),
        seam_(fam.base.seam(side)),
        y_(numerics::periodic_nodes(fam.base.ell(), nodes)),
        d1_(numerics::fourier_first_derivative(nodes, fam.base.ell())) {}

  const std::vector<double>& nodes() const { return y_; }
  double seam() const { return seam_; }

  geometry::Stratum stratum(double x) const {
    return side_sign(side_) * (x - seam_) > 0.0 ? geometry::Stratum::hyperbolic
                                                : geometry::Stratum::flat;
  }

  std::vector<geometry::Stratum> strata(const Eigen::VectorXd& x) const {
    std::vector<geometry::Stratum> out(static_cast<std::size_t>(x.size()));
    for (Eigen::Index j = 0; j < x.size(); ++j) out[static_cast<std::size_t>(j)] = stratum(x[j]);
    return out;
  }

  LocalTerms local(std::size_t j, double x, double xp, geometry::Stratum where) const {
    const auto jet = geometry::family_metric_jet(fam_, t_, x, y_[j], where);
    const double q = jet.g.xx * xp * xp + 2.0 * jet.g.xy * xp + jet.g.yy;
    if (!(q > 0.0)) throw SolveError("geodesic: metric degenerate along the curve");
    const double root = std::sqrt(q);
    return {(jet.g.xx * xp + jet.g.xy) / root,
            (jet.dg_dx.xx * xp * xp + 2.0 * jet.dg_dx.xy * xp + jet.dg_dx.yy) / (2.0 * root)};
  }

  // Residual with the stratum of every node held fixed; each stratum's metric is smooth
  // and continues a little past the seam.
  Eigen::VectorXd residual(const Eigen::VectorXd& x,
                           const std::vector<geometry::Stratum>& where) const {
    const Eigen::VectorXd xp = d1_ * x;
    Eigen::VectorXd p(x.size());
    Eigen::VectorXd f(x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      const auto jj = static_cast<std::size_t>(j);
      const LocalTerms terms = local(jj, x[j], xp[j], where[jj]);
      p[j] = terms.p;
      f[j] = terms.f;
    }
    return d1_ * p - f;
  }

  // Each residual entry depends on (X_j, X'_j) locally and on P through D1, so central
  // differences in those two local arguments assemble the full Jacobian.
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x, const std::vector<geometry::Stratum>& strata,
                           double step) const {
    const Eigen::VectorXd xp = d1_ * x;
    const auto m = x.size();
    Eigen::VectorXd p_x(m), p_xp(m), f_x(m), f_xp(m);
    for (Eigen::Index j = 0; j < m; ++j) {
      const auto jj = static_cast<std::size_t>(j);
      const auto where = strata[jj];
      const LocalTerms xr = local(jj, x[j] + step, xp[j], where);
      const LocalTerms xl = local(jj, x[j] - step, xp[j], where);
      const LocalTerms pr = local(jj, x[j], xp[j] + step, where);
      const LocalTerms pl = local(jj, x[j], xp[j] - step, where);
      p_x[j] = (xr.p - xl.p) / (2.0 * step);
      f_x[j] = (xr.f - xl.f) / (2.0 * step);
      p_xp[j] = (pr.p - pl.p) / (2.0 * step);
      f_xp[j] = (pr.f - pl.f) / (2.0 * step);
    }
    Eigen::MatrixXd inner = p_xp.asDiagonal() * d1_;
    inner.diagonal() += p_x;
    Eigen::MatrixXd jac = d1_ * inner;
    jac -= f_xp.asDiagonal() * d1_;
    jac.diagonal() -= f_x;
    return jac;
  }

 private:
  const geometry::ConformalFamily& fam_;
  Side side_;
  double t_;
  double seam_;
  std::vector<double> y_;
  Eigen::MatrixXd d1_;
};

double max_abs(const std::vector<double>& values) {
  double out = 0.0;
  for (double v : values) out = std::max(out, std::abs(v));
  return out;
}

}  // namespace

GeodesicResult geodesic_oracle(const geometry::ConformalFamily& fam, Side side, double t,
                               const GeodesicOptions& options) {
  if (fam.base.s() <= 0.0) throw DomainError("geodesic oracle needs a flat insert (s > 0)");
  if (fam.quad) throw DomainError("geodesic oracle handles conformal families only");
  if (options.nodes < 8 || options.nodes % 2 != 0) {
    throw DomainError("geodesic oracle needs an even node count >= 8");
  }

  GeodesicProblem problem(fam, side, t, options.nodes);
  GeodesicResult result;
  result.side = side;
  result.t = t;
  result.y = problem.nodes();
  result.displacement.assign(options.nodes, 0.0);
  if (t == 0.0) return result;

  const double step = options.fd_step > 0.0 ? options.fd_step : 1e-4 * std::abs(t);
  const auto m = static_cast<Eigen::Index>(options.nodes);
  // Start just inside the strip, where the linearised operator V'' - V is invertible.
  Eigen::VectorXd x =
      Eigen::VectorXd::Constant(m, problem.seam() + side_sign(side) * 1e-3 * std::abs(t));
  double norm = 0.0;
  int iteration = 0;
  int crease_nodes = 0;
  // Continuation from t / 2^(stages-1): each stage starts from the previous curve with its
  // displacement scaled up, which keeps Newton on the branch that emanates from the seam.
  constexpr int kStages = 4;
  constexpr int kMaxSweeps = 12;
  for (int stage = kStages - 1; stage >= 0; --stage) {
    const double t_stage = std::ldexp(t, -stage);
    const double h = std::ldexp(step, -stage);
    GeodesicProblem staged(fam, side, t_stage, options.nodes);
    if (stage != kStages - 1) {
      x = problem.seam() + 2.0 * (x.array() - problem.seam());
    }
    // Newton on the system with frozen strata, then reassignment from the new curve. Nodes
    // next to a crossing of the seam may end up a sliver past it; such a node keeps its
    // frozen stratum when the sliver is below the grid-scale crease width.
    // Updates at the rounding level of X also end the iteration.
    const double update_floor =
        std::max(1e-11 * std::abs(t_stage),
                 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(problem.seam())));
    const double crease_width = std::abs(t_stage) * fam.base.ell() / static_cast<double>(m);
    auto where = staged.strata(x);
    for (int sweep = 0;; ++sweep) {
      Eigen::VectorXd r = staged.residual(x, where);
      norm = r.lpNorm<Eigen::Infinity>();
      bool converged = norm <= options.tolerance;
      int count = 0;
      while (!converged && count < options.max_iterations) {
        ++count;
        const Eigen::VectorXd delta =
            staged.jacobian(x, where, h).colPivHouseholderQr().solve(-r);
        double scale = 1.0;
        Eigen::VectorXd trial = x + delta;
        Eigen::VectorXd trial_r = staged.residual(trial, where);
        while (trial_r.lpNorm<Eigen::Infinity>() > norm && scale > 1.0 / 64.0) {
          scale *= 0.5;
          trial = x + scale * delta;
          trial_r = staged.residual(trial, where);
        }
        x = trial;
        r = trial_r;
        norm = r.lpNorm<Eigen::Infinity>();
        const double update = scale * delta.lpNorm<Eigen::Infinity>();
        converged = norm <= options.tolerance || update <= update_floor;
      }
      iteration += count;
      if (!converged) {
        throw SolveError("geodesic oracle: Newton did not converge (residual " +
                         std::to_string(norm) + ")");
      }
      const auto next = staged.strata(x);
      int mismatched = 0;
      double sliver = 0.0;
      for (std::size_t j = 0; j < next.size(); ++j) {
        if (next[j] == where[j]) continue;
        ++mismatched;
        sliver = std::max(sliver, std::abs(x[static_cast<Eigen::Index>(j)] - problem.seam()));
      }
      if (sliver <= crease_width) {
        crease_nodes = mismatched;
        break;
      }
      if (sweep + 1 == kMaxSweeps) {
        throw SolveError("geodesic oracle: strata did not settle along the seam");
      }
      where = next;
    }
  }
  result.crease_nodes = crease_nodes;
  result.iterations = iteration;
  result.residual = norm;
  for (std::size_t j = 0; j < options.nodes; ++j) {
    result.displacement[j] = (x[static_cast<Eigen::Index>(j)] - problem.seam()) / t;
  }
  return result;
}

std::vector<double> centered_displacement(const geometry::ConformalFamily& fam, Side side,
                                          double t, const GeodesicOptions& options) {
  const GeodesicResult plus = geodesic_oracle(fam, side, t, options);
  const GeodesicResult minus = geodesic_oracle(fam, side, -t, options);
  std::vector<double> out(plus.displacement.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = 0.5 * (plus.displacement[j] + minus.displacement[j]);
  }
  return out;
}

GeodesicComparison compare_with_variation(const geometry::ConformalFamily& fam, Side side,
                                          const VariationField& v, double t,
                                          const GeodesicOptions& options) {
  if (v.side != side) throw DomainError("variation field belongs to the other seam");
  const GeodesicResult raw = geodesic_oracle(fam, side, t, options);
  const std::vector<double> full = centered_displacement(fam, side, t, options);
  const std::vector<double> half = centered_displacement(fam, side, 0.5 * t, options);

  std::vector<double> exact(raw.y.size());
  for (std::size_t j = 0; j < exact.size(); ++j) exact[j] = value(v, raw.y[j]);
  const double scale = max_abs(exact) > 0.0 ? max_abs(exact) : 1.0;

  GeodesicComparison out;
  for (std::size_t j = 0; j < exact.size(); ++j) {
    out.rel_err_raw = std::max(out.rel_err_raw, std::abs(raw.displacement[j] - exact[j]));
    out.rel_err = std::max(out.rel_err, std::abs(full[j] - exact[j]));
    out.rel_err_half = std::max(out.rel_err_half, std::abs(half[j] - exact[j]));
    out.rel_err_richardson =
        std::max(out.rel_err_richardson, std::abs(2.0 * half[j] - full[j] - exact[j]));
  }
  out.rel_err_raw /= scale;
  out.rel_err /= scale;
  out.rel_err_half /= scale;
  out.rel_err_richardson /= scale;
  out.decreasing = out.rel_err_half < out.rel_err || out.rel_err == 0.0;
  out.max_abs_variation = max_abs(exact);
  return out;
}

geometry::ConformalFamily make_matched_family(const geometry::GraftedCollar& chart,
                                              const spectral::FourierSolution& flat,
                                              double lambda0, double rho0) {
  return {chart, geometry::GlobalField::matched(chart, flat, lambda0, rho0), std::nullopt, 0.0,
          {}};
}

}  // namespace graftlab::variation
