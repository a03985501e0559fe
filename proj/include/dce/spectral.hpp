#pragma once

#include "dce/model.hpp"

#include <complex>
#include <string_view>
#include <vector>

namespace dce {

using cplx = std::complex<double>;

/// Denominators with magnitude below this are treated as poles.
inline constexpr double kPoleGuard = 1e-14;
inline constexpr double kDefaultCoherentThreshold = 0.1;

/// Frequency-domain kernels of the linearized dynamics at one frequency.
struct SpectralPoint {
  double omega = 0.0;
  cplx sigma_a, sigma_b, sigma_d;  ///< self-energies of cavity, mirror, condensate
  cplx sigma_s;                    ///< condensate-mediated shift felt by the cavity in the mirror channel
  cplx sigma_m_aux;                ///< mirror-mediated shift felt by the cavity in the condensate channel
  cplx lam_bar_s;                  ///< condensate-mediated gain kernel
  cplx lam_m_aux;                  ///< mirror-mediated gain kernel
  cplx lam_tilde_a, lam_tilde_b, lam_tilde_d;  ///< induced parametric gain factors
};

/// Evaluates every kernel literally from its rational expression.
/// Throws PoleError naming the kernel whose denominator vanishes.
SpectralPoint spectral_point(const ModelParams& p, double omega);

/// Uniform frequency grid [omega_min, omega_max] with `points` samples.
struct Band {
  double omega_min = -1.0;
  double omega_max = 1.0;
  int points = 201;

  std::vector<double> grid() const;
  void validate() const;
};

/// Band evaluation, OpenMP-parallel over frequency with ordered results.
std::vector<SpectralPoint> evaluate_band(const ModelParams& p, const Band& band, int max_threads = 0);
/// Serial reference for evaluate_band.
std::vector<SpectralPoint> evaluate_band_serial(const ModelParams& p, const Band& band);

enum class Regime { coherent, dissipative, unmodulated, indeterminate };

std::string_view to_string(Regime r);

struct CoherentRatio {
  double ratio = 0.0;
  Regime regime = Regime::unmodulated;
};

/// max |Im lam_tilde_a| / |Re lam_tilde_a| over the band, skipping points
/// where |Re lam_tilde_a| <= 1e-14. Unmodulated systems report
/// Regime::unmodulated with ratio 0. Throws IndeterminateRegime for an empty
/// band or when Re lam_tilde_a vanishes everywhere on it.
CoherentRatio coherent_ratio(const ModelParams& p, const std::vector<double>& omegas,
                             double threshold = kDefaultCoherentThreshold);
CoherentRatio coherent_ratio(const ModelParams& p, const Band& band = {},
                             double threshold = kDefaultCoherentThreshold);

/// C_m (or C_d with the arguments swapped): collective cooperativity of one
/// phononic channel given its own bare cooperativity, the partner's bare
/// cooperativity and the partner's modulation parameter xi.
double collective_cooperativity(double c_self, double c_partner, double xi_partner);

struct RegimeReport {
  double cooperativity_c0 = 0.0;  ///< 4 g^2 / (kappa gamma_m)
  double cooperativity_c1 = 0.0;  ///< 4 G^2 / (kappa gamma_d)
  double collective_cm = 0.0;
  double collective_cd = 0.0;
  double xi_m = 0.0;
  double xi_d = 0.0;
  double xi_m_max = 0.0;
  double xi_d_max = 0.0;
  double gamma_eff_m = 0.0;
  double gamma_eff_d = 0.0;
  double kappa_opt = 0.0;  ///< signed; NaN when some xi == 1
  double kappa_eff = 0.0;
  double cooperativity_ca = 0.0;
  bool kappa_opt_divergent = false;
  double coherent_ratio = 0.0;  ///< NaN when indeterminate
  Regime regime = Regime::unmodulated;
};

RegimeReport regime_report(const ModelParams& p, const Band& band = {},
                           double threshold = kDefaultCoherentThreshold);

enum class Channel { mechanical, atomic };

struct StabilityBoundary {
  double lambda_critical = 0.0;
  double lambda_predicted = 0.0;  ///< (gamma/2)(1 + C_collective)
  double relative_gap = 0.0;      ///< |critical - predicted| / predicted
  double max_re_eig = 0.0;        ///< spectral abscissa at lambda_critical
};

/// Bisects the chosen modulation amplitude (partner channel fixed) until the
/// drift's spectral abscissa reaches zero within 1e-10. Throws
/// BoundaryNotFound when no sign change exists below 10x the prediction.
StabilityBoundary find_stability_boundary(const ModelParams& p, Channel which);

}  // namespace dce
