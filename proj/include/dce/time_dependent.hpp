#pragma once

#include "dce/lyapunov.hpp"
#include "dce/model.hpp"

#include <stop_token>

namespace dce {

/// How the parametric drives enter the time-dependent drift.
enum class ModulationForm {
  /// lambda e^{-2i w t} o^dag, i.e. the linearized equations as written in
  /// the laser frame. Its rotating-frame image is exactly the static drift.
  rotating,
  /// Unapproximated drives: k(t) x^2 spring modulation for the mirror and
  /// omega_sw(t) (d^2 + d^dag^2)/4 for the condensate, phased so that their
  /// resonant parts equal the rotating form with real positive lambda.
  bare,
};

/// Laser-frame parameters for the non-RWA linearized dynamics.
struct TimeDependentParams {
  ModelParams base;
  double delta0 = 0.0;   ///< effective cavity detuning, units of kappa
  double omega_m = 0.0;  ///< mechanical frequency, units of kappa
  double omega_d = 0.0;  ///< Bogoliubov frequency, units of kappa
  ModulationForm form = ModulationForm::rotating;

  /// Throws InvalidParameter unless all frequencies are positive.
  void validate() const;
  bool good_cavity() const noexcept { return omega_m / base.kappa() >= 10.0; }
};

/// A(t): damping, free rotation [[0, w], [-w, 0]] per mode, position
/// couplings 2g X_a X_b and 2G X_a X_d acting through the momenta, and the
/// parametric blocks selected by tp.form.
DriftMatrix build_drift_time_dependent(const TimeDependentParams& tp, double t);

struct RwaValidation {
  Occupations time_averaged;
  Occupations rwa;
  double relative_gap = 0.0;  ///< max over modes; absolute where the RWA value is ~0
  double period = 0.0;
  long long periods_to_converge = 0;
};

struct RwaOptions {
  double step_tolerance = 1e-8;
  std::stop_token stop;
};

/// Integrates the time-dependent covariance dynamics to its stroboscopic
/// steady cycle, averages the occupations over one modulation period and
/// compares them with the static Lyapunov solution.
///
/// Requires delta0 == omega_m == omega_d (a common period) and
/// omega_m / kappa >= 10. Throws NonConvergence when the periodic state is
/// not reached within `cycles` periods.
RwaValidation rwa_validate(const TimeDependentParams& tp, long long cycles, int samples_per_cycle,
                           const RwaOptions& opts = {});

}  // namespace dce
