#include "dce/calibration.hpp"

#include "dce/errors.hpp"

#include <cmath>
#include <numbers>
#include <utility>

namespace dce {

namespace {

void require(bool ok, const char* field, const char* what)
{
  if (!ok) throw InvalidParameter(field, what);
}

void require_rate(double v, const char* name)
{
  if (!(v > 0) || !std::isfinite(v)) throw InvalidParameter(name, "derived rate is not positive");
}

}  // namespace

void PhysicalParams::validate() const
{
  const std::pair<const char*, double> positive[] = {
      {"cavity_length", cavity_length}, {"mirror_mass", mirror_mass},
      {"mirror_freq", mirror_freq},     {"cavity_freq", cavity_freq},
      {"laser_freq", laser_freq},       {"laser_power", laser_power},
      {"cavity_decay", cavity_decay},   {"mech_damping", mech_damping},
      {"bogoliubov_damping", bogoliubov_damping},
      {"atom_number", atom_number},     {"atom_mass", atom_mass},
      {"mode_waist", mode_waist},       {"rabi_coupling", rabi_coupling},
  };
  for (const auto& [name, v] : positive) require(std::isfinite(v) && v > 0, name, "must be > 0");

  const std::pair<const char*, double> nonneg[] = {
      {"scattering_length", scattering_length}, {"spring_mod_depth", spring_mod_depth},
      {"nbar_m", nbar_m}, {"nbar_d", nbar_d}, {"nbar_ph", nbar_ph},
  };
  for (const auto& [name, v] : nonneg) require(std::isfinite(v) && v >= 0, name, "must be >= 0");

  require(std::isfinite(collision_mod_depth) && collision_mod_depth >= 0 && collision_mod_depth <= 1,
          "collision_mod_depth", "must lie in [0, 1]");
  require(std::isfinite(atom_detuning) && atom_detuning != 0, "atom_detuning", "must be finite and nonzero");
  require(std::isfinite(detuning), "detuning", "must be finite");
}

bool Calibration::all_ok() const
{
  for (const auto& d : diagnostics)
    if (!d.ok) return false;
  return true;
}

double recoil_frequency(const PhysicalParams& pp)
{
  const double k0 = pp.laser_freq / si::c;
  return si::hbar * k0 * k0 / (2 * pp.atom_mass);
}

double swave_frequency(const PhysicalParams& pp)
{
  return 8 * std::numbers::pi * si::hbar * pp.atom_number * pp.scattering_length /
         (pp.atom_mass * pp.cavity_length * pp.mode_waist * pp.mode_waist);
}

Calibration derive_rates(const PhysicalParams& pp)
{
  pp.validate();
  DerivedQuantities q;
  q.x_zp = std::sqrt(si::hbar / (2 * pp.mirror_mass * pp.mirror_freq));
  q.g0 = q.x_zp * pp.cavity_freq / pp.cavity_length;
  q.u0 = -pp.rabi_coupling * pp.rabi_coupling / pp.atom_detuning;
  q.g0_atomic = std::sqrt(2 * pp.atom_number) * q.u0 / 4;
  q.omega_recoil = recoil_frequency(pp);
  q.omega_sw = swave_frequency(pp);
  q.omega_d = 4 * q.omega_recoil + q.omega_sw;
  q.delta0_shift = pp.atom_number * q.u0 / 2;
  q.delta0 = pp.detuning + q.delta0_shift;
  q.drive = std::sqrt(pp.cavity_decay * pp.laser_power / (si::hbar * pp.laser_freq));
  q.alpha = q.drive / std::complex<double>(pp.cavity_decay / 2, q.delta0);

  const double amp = std::abs(q.alpha);
  q.g = q.g0 * amp;
  q.G = std::abs(q.g0_atomic) * amp;
  q.lambda_m = pp.spring_mod_depth * q.x_zp * q.x_zp / (2 * si::hbar);
  q.lambda_d = pp.collision_mod_depth * q.omega_sw / 4;

  require_rate(q.x_zp, "x_zp");
  require_rate(q.g0, "g0");
  require_rate(q.omega_recoil, "omega_R");
  require_rate(q.omega_d, "omega_d");
  require_rate(q.g, "g");
  require_rate(q.G, "G");

  ModelInputs in;
  in.kappa = pp.cavity_decay;
  in.gamma_m = pp.mech_damping;
  in.gamma_d = pp.bogoliubov_damping;
  in.g_m = q.g;
  in.g_d = q.G;
  in.lambda_m = q.lambda_m;
  in.lambda_d = q.lambda_d;
  in.nbar_m = pp.nbar_m;
  in.nbar_d = pp.nbar_d;
  in.nbar_ph = pp.nbar_ph;

  Calibration out;
  out.model = ModelParams(in);
  out.derived = q;

  const double intensity = std::abs(q.u0) * amp * amp;
  out.diagnostics.push_back({"weak_interaction", intensity, 10 * q.omega_recoil, intensity <= 10 * q.omega_recoil,
                             "|U0| |alpha|^2 against 10 omega_R"});
  const double gap_c = std::abs(q.delta0 - pp.mirror_freq) / pp.mirror_freq;
  out.diagnostics.push_back({"cavity_resonance_gap", gap_c, 0.1, gap_c <= 0.1, "|Delta0 - omega_m| / omega_m"});
  const double gap_d = std::abs(q.omega_d - pp.mirror_freq) / pp.mirror_freq;
  out.diagnostics.push_back({"bogoliubov_resonance_gap", gap_d, 0.1, gap_d <= 0.1, "|omega_d - omega_m| / omega_m"});
  const double ratio = pp.mirror_freq / pp.cavity_decay;
  out.diagnostics.push_back({"good_cavity", ratio, 10.0, ratio >= 10.0, "omega_m / kappa"});
  if (pp.scattering_length > 0) {
    const double density = pp.atom_number / pp.cavity_length;
    const double limit = 1 / (2 * pp.scattering_length);
    out.diagnostics.push_back({"linear_density", density, limit, density < limit, "N / L against 1 / (2 a_s)"});
  }
  return out;
}

double resonance_tuning(const PhysicalParams& pp)
{
  pp.validate();
  const double target = pp.mirror_freq - 4 * recoil_frequency(pp);
  if (target < 0) throw Infeasible("mirror frequency is below 4 omega_R; no scattering length reaches resonance");
  return target * pp.atom_mass * pp.cavity_length * pp.mode_waist * pp.mode_waist /
         (8 * std::numbers::pi * si::hbar * pp.atom_number);
}

}  // namespace dce
