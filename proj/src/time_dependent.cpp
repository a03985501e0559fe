#include "dce/time_dependent.hpp"

#include "dce/errors.hpp"

#include <Eigen/LU>

#include <cmath>
#include <numbers>

namespace dce {

void TimeDependentParams::validate() const
{
  if (!(delta0 > 0) || !std::isfinite(delta0)) throw InvalidParameter("delta0", "must be > 0");
  if (!(omega_m > 0) || !std::isfinite(omega_m)) throw InvalidParameter("omega_m", "must be > 0");
  if (!(omega_d > 0) || !std::isfinite(omega_d)) throw InvalidParameter("omega_d", "must be > 0");
}

DriftMatrix build_drift_time_dependent(const TimeDependentParams& tp, double t)
{
  const ModelParams& p = tp.base;
  const double g = p.g_m();
  const double G = p.g_d();
  Matrix6 a = Matrix6::Zero();

  a(0, 0) = a(1, 1) = -p.kappa() / 2;
  a(2, 2) = a(3, 3) = -p.gamma_m() / 2;
  a(4, 4) = a(5, 5) = -p.gamma_d() / 2;

  a(0, 1) = tp.delta0;
  a(1, 0) = -tp.delta0;
  a(2, 3) = tp.omega_m;
  a(3, 2) = -tp.omega_m;
  a(4, 5) = tp.omega_d;
  a(5, 4) = -tp.omega_d;

  a(1, 2) += 2 * g;
  a(1, 4) -= 2 * G;
  a(3, 0) += 2 * g;
  a(5, 0) -= 2 * G;

  const double th_m = 2 * tp.omega_m * t;
  const double th_d = 2 * tp.omega_d * t;
  const double lm = p.lambda_m();
  const double ld = p.lambda_d();
  switch (tp.form) {
    case ModulationForm::rotating:
      a(2, 2) += lm * std::cos(th_m);
      a(2, 3) -= lm * std::sin(th_m);
      a(3, 2) -= lm * std::sin(th_m);
      a(3, 3) -= lm * std::cos(th_m);
      a(4, 4) += ld * std::cos(th_d);
      a(4, 5) -= ld * std::sin(th_d);
      a(5, 4) -= ld * std::sin(th_d);
      a(5, 5) -= ld * std::cos(th_d);
      break;
    case ModulationForm::bare:
      // H = 2 lm sin(th) X_b^2 and H = ld sin(th) (X_d^2 - P_d^2)
      a(3, 2) -= 4 * lm * std::sin(th_m);
      a(4, 5) -= 2 * ld * std::sin(th_d);
      a(5, 4) -= 2 * ld * std::sin(th_d);
      break;
  }
  return DriftMatrix(a);
}

namespace {

struct Flow {
  Matrix6 phi;
  Matrix6 v;
};

class PeriodicSystem {
public:
  PeriodicSystem(const TimeDependentParams& tp, const Matrix6& d) : tp_(tp), d_(d) {}

  Flow rhs(double t, const Flow& y) const
  {
    const Matrix6 a = build_drift_time_dependent(tp_, t).matrix();
    return {a * y.phi, a * y.v + y.v * a.transpose() + d_};
  }

  Flow step(double t, const Flow& y, double h) const
  {
    auto axpy = [](const Flow& y0, double s, const Flow& k) { return Flow{y0.phi + s * k.phi, y0.v + s * k.v}; };
    const Flow k1 = rhs(t, y);
    const Flow k2 = rhs(t + h / 2, axpy(y, h / 2, k1));
    const Flow k3 = rhs(t + h / 2, axpy(y, h / 2, k2));
    const Flow k4 = rhs(t + h, axpy(y, h, k3));
    return {y.phi + (h / 6) * (k1.phi + 2 * k2.phi + 2 * k3.phi + k4.phi),
            y.v + (h / 6) * (k1.v + 2 * k2.v + 2 * k3.v + k4.v)};
  }

  // RK4 with a step-doubling check, mirroring integrate_covariance.
  Flow checked_step(double t, const Flow& y, double h, const RwaOptions& opts) const
  {
    if (opts.stop.stop_requested()) throw Cancelled();
    const Flow full = step(t, y, h);
    Flow half = step(t + h / 2, step(t, y, h / 2), h / 2);
    const double est = std::max((half.phi - full.phi).cwiseAbs().maxCoeff(), (half.v - full.v).cwiseAbs().maxCoeff()) / 15.0;
    const double scale = std::max({1.0, half.phi.cwiseAbs().maxCoeff(), half.v.cwiseAbs().maxCoeff()});
    if (est > opts.step_tolerance * scale) throw StepRejected(t, est);
    half.v = 0.5 * (half.v + half.v.transpose()).eval();
    return half;
  }

private:
  const TimeDependentParams& tp_;
  Matrix6 d_;
};

bool same_frequency(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); }

double gap(double measured, double reference)
{
  const double diff = std::abs(measured - reference);
  return reference > 1e-12 ? diff / reference : diff;
}

}  // namespace

RwaValidation rwa_validate(const TimeDependentParams& tp, long long cycles, int samples_per_cycle,
                           const RwaOptions& opts)
{
  tp.validate();
  if (cycles < 1) throw InvalidParameter("cycles", "must be >= 1");
  if (samples_per_cycle < 4) throw InvalidParameter("samples_per_cycle", "must be >= 4");
  if (!same_frequency(tp.delta0, tp.omega_m) || !same_frequency(tp.omega_d, tp.omega_m))
    throw InvalidParameter("omega_d", "validator needs delta0 == omega_m == omega_d");
  if (!tp.good_cavity()) throw InvalidParameter("omega_m", "good-cavity ratio omega_m/kappa below 10");

  RwaValidation out;
  const DiffusionMatrix diffusion = build_diffusion(tp.base);
  const SteadyState ss = solve_steady(build_drift(tp.base), diffusion);
  if (!ss.stable) throw Unstable(ss.max_re_eig);
  out.rwa = occupations(CovarianceMatrix(Matrix6(*ss.v)));

  const PeriodicSystem sys(tp, diffusion.matrix());
  out.period = std::numbers::pi / tp.omega_m;
  const double h = out.period / samples_per_cycle;

  // one-period monodromy Phi and forced response Q from V(0) = 0
  Flow y{Matrix6::Identity(), Matrix6::Zero()};
  for (int s = 0; s < samples_per_cycle; ++s) y = sys.checked_step(h * s, y, h, opts);

  // periodic fixed point V = Phi V Phi^T + Q by doubling
  Matrix6 acc = y.v;
  Matrix6 power = y.phi;
  long long periods = 1;
  bool converged = false;
  while (periods <= cycles) {
    if (opts.stop.stop_requested()) throw Cancelled();
    const Matrix6 inc = power * acc * power.transpose();
    acc += inc;
    power = (power * power).eval();
    periods *= 2;
    if (!acc.allFinite()) break;
    if (inc.cwiseAbs().maxCoeff() <= 1e-15 * acc.cwiseAbs().maxCoeff()) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw NonConvergence("stroboscopic cycle did not converge within " + std::to_string(cycles) + " periods");
  out.periods_to_converge = periods;

  // The doubling above uses the flow as a congruence, which the RK4 map on V
  // matches only to the step error. Solve the fixed point of the discrete
  // period map itself: vec V = L vec V + vec Q.
  const PeriodicSystem homogeneous(tp, Matrix6::Zero());
  Eigen::Matrix<double, 36, 36> lmap;
  for (int k = 0; k < 36; ++k) {
    Flow e{Matrix6::Identity(), Matrix6::Zero()};
    e.v(k % 6, k / 6) = 1.0;
    for (int s = 0; s < samples_per_cycle; ++s) e = homogeneous.step(h * s, e, h);
    lmap.col(k) = Eigen::Map<const Eigen::Matrix<double, 36, 1>>(e.v.data());
  }
  const Eigen::Matrix<double, 36, 36> lhs = Eigen::Matrix<double, 36, 36>::Identity() - lmap;
  const Eigen::Matrix<double, 36, 1> rhs = Eigen::Map<const Eigen::Matrix<double, 36, 1>>(y.v.data());
  const Eigen::Matrix<double, 36, 1> sol = lhs.partialPivLu().solve(rhs);
  Matrix6 fixed = Eigen::Map<const Matrix6>(sol.data());
  fixed = 0.5 * (fixed + fixed.transpose()).eval();
  if (!fixed.allFinite() || (fixed - acc).cwiseAbs().maxCoeff() > 1e-4 * std::max(1.0, acc.cwiseAbs().maxCoeff()))
    throw NonConvergence("periodic fixed point disagrees with the stroboscopic cycle");

  Flow cyc{Matrix6::Identity(), fixed};
  double sums[3] = {0, 0, 0};
  for (int s = 0; s < samples_per_cycle; ++s) {
    sums[0] += mode_occupation(cyc.v, Mode::cavity);
    sums[1] += mode_occupation(cyc.v, Mode::mirror);
    sums[2] += mode_occupation(cyc.v, Mode::bogoliubov);
    cyc = sys.checked_step(h * s, cyc, h, opts);
  }
  out.time_averaged.photon = sums[0] / samples_per_cycle;
  out.time_averaged.phonon_m = sums[1] / samples_per_cycle;
  out.time_averaged.phonon_d = sums[2] / samples_per_cycle;

  out.relative_gap = std::max({gap(out.time_averaged.photon, out.rwa.photon),
                               gap(out.time_averaged.phonon_m, out.rwa.phonon_m),
                               gap(out.time_averaged.phonon_d, out.rwa.phonon_d)});
  return out;
}

}  // namespace dce
