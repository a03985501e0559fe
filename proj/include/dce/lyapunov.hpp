#pragma once

#include "dce/model.hpp"

#include <Eigen/Core>

#include <functional>
#include <optional>
#include <stop_token>

namespace dce {

/// Drift matrices whose spectral abscissa is within this band of zero are
/// reported as marginal instead of being solved.
inline constexpr double kMarginalThreshold = 1e-12;

struct SteadyState {
  std::optional<Eigen::MatrixXd> v;  ///< present only for stable drifts
  double residual = 0.0;             ///< ||A V + V A^T + D||_2 / ||D||_2
  bool stable = false;
  double max_re_eig = 0.0;
};

/// Largest real part over the eigenvalues of a.
double spectral_abscissa(const Eigen::Ref<const Eigen::MatrixXd>& a);

/// ||A V + V A^T + D||_2, relative to ||D||_2 when D is nonzero.
double lyapunov_residual(const Eigen::Ref<const Eigen::MatrixXd>& a,
                         const Eigen::Ref<const Eigen::MatrixXd>& v,
                         const Eigen::Ref<const Eigen::MatrixXd>& d);

/// Solves A V + V A^T = -D for the steady covariance.
///
/// The system is vectorized as (I (x) A + A (x) I) vec(V) = -vec(D) and
/// solved densely, followed by iterative refinement on the Lyapunov
/// residual. Unstable drifts return stable = false without a covariance;
/// |max_re_eig| < kMarginalThreshold throws MarginalStability.
SteadyState solve_steady(const Eigen::Ref<const Eigen::MatrixXd>& a,
                         const Eigen::Ref<const Eigen::MatrixXd>& d);
SteadyState solve_steady(const DriftMatrix& a, const DiffusionMatrix& d);

/// Bartels-Stewart style solve through the complex Schur form of A. Kept as
/// an independent second route; does not check stability.
Eigen::MatrixXd solve_lyapunov_schur(const Eigen::Ref<const Eigen::MatrixXd>& a,
                                     const Eigen::Ref<const Eigen::MatrixXd>& d);

/// Time-varying drift A(t) for the covariance ODE.
using DriftFunction = std::function<Eigen::MatrixXd(double)>;

struct IntegrationOptions {
  /// Allowed step-doubling error estimate per step, relative to max(1, |V|).
  double step_tolerance = 1e-8;
  std::stop_token stop;
};

/// Propagates dV/dt = A V + V A^T + D from v0 over [0, t_final] with
/// classical RK4 at a fixed step <= dt. Each step is checked against two
/// half steps (Richardson estimate); an estimate above tolerance throws
/// StepRejected. Symmetry is enforced after every step.
Eigen::MatrixXd integrate_covariance(const Eigen::Ref<const Eigen::MatrixXd>& a,
                                     const Eigen::Ref<const Eigen::MatrixXd>& d,
                                     const Eigen::Ref<const Eigen::MatrixXd>& v0, double t_final, double dt,
                                     const IntegrationOptions& opts = {});
CovarianceMatrix integrate_covariance(const DriftMatrix& a, const DiffusionMatrix& d, const CovarianceMatrix& v0,
                                      double t_final, double dt, const IntegrationOptions& opts = {});

/// Same propagation with a time-dependent drift, starting at t0.
Eigen::MatrixXd propagate_covariance(const DriftFunction& a, const Eigen::Ref<const Eigen::MatrixXd>& d,
                                     const Eigen::Ref<const Eigen::MatrixXd>& v0, double t0, double t_final,
                                     double dt, const IntegrationOptions& opts = {});

}  // namespace dce
