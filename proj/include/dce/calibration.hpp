#pragma once

#include "dce/model.hpp"

#include <complex>
#include <string>
#include <vector>

namespace dce {

namespace si {
inline constexpr double hbar = 1.054571817e-34;  // J s
inline constexpr double c = 299792458.0;         // m / s
}  // namespace si

/// Laboratory parameters in SI units (rates in rad/s).
struct PhysicalParams {
  double cavity_length = 0.0;
  double mirror_mass = 0.0;
  double mirror_freq = 0.0;
  double cavity_freq = 0.0;
  double laser_freq = 0.0;
  double laser_power = 0.0;
  double cavity_decay = 0.0;
  double mech_damping = 0.0;
  double bogoliubov_damping = 0.0;
  double atom_number = 0.0;
  double atom_mass = 0.0;
  double scattering_length = 0.0;
  double mode_waist = 0.0;
  double atom_detuning = 0.0;  ///< Delta_a, nonzero, either sign
  double rabi_coupling = 0.0;
  double spring_mod_depth = 0.0;     ///< delta k, N/m
  double collision_mod_depth = 0.0;  ///< epsilon in [0, 1]
  double detuning = 0.0;             ///< Delta_c, either sign
  double nbar_m = 0.0;
  double nbar_d = 0.0;
  double nbar_ph = 0.0;

  /// Throws InvalidParameter naming the first offending field.
  void validate() const;
};

/// Intermediate quantities of the mapping, SI units.
struct DerivedQuantities {
  double x_zp = 0.0;
  double g0 = 0.0;
  double u0 = 0.0;
  double g0_atomic = 0.0;  ///< G0 = sqrt(2N) U0 / 4, signed
  double omega_recoil = 0.0;
  double omega_sw = 0.0;
  double omega_d = 0.0;
  double delta0_shift = 0.0;  ///< N U0 / 2
  double delta0 = 0.0;        ///< Delta_c + N U0 / 2
  double drive = 0.0;         ///< E_L
  std::complex<double> alpha;
  double g = 0.0;  ///< rad/s
  double G = 0.0;  ///< rad/s
  double lambda_m = 0.0;
  double lambda_d = 0.0;
};

struct Diagnostic {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  bool ok = true;
  std::string message;
};

struct Calibration {
  ModelParams model{ModelInputs{}};
  DerivedQuantities derived;
  std::vector<Diagnostic> diagnostics;

  bool all_ok() const;
};

/// Maps physical parameters to dimensionless rates. Validity checks are
/// reported as diagnostics; a nonpositive derived rate throws InvalidParameter.
Calibration derive_rates(const PhysicalParams& pp);

double recoil_frequency(const PhysicalParams& pp);
double swave_frequency(const PhysicalParams& pp);

/// Scattering length that puts the Bogoliubov frequency on the mechanical
/// one. Throws Infeasible when omega_m < 4 omega_R.
double resonance_tuning(const PhysicalParams& pp);

}  // namespace dce
