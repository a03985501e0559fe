#include "dce/spectral.hpp"

#include "dce/errors.hpp"
#include "dce/lyapunov.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace dce {

namespace {

constexpr cplx kI{0.0, 1.0};

cplx guarded(cplx den, const char* kernel, double omega)
{
  if (std::abs(den) < kPoleGuard) throw PoleError(kernel, omega);
  return den;
}

}  // namespace

SpectralPoint spectral_point(const ModelParams& p, double omega)
{
  const double g2 = p.g_m() * p.g_m();
  const double G2 = p.g_d() * p.g_d();
  const double lm = p.lambda_m();
  const double ld = p.lambda_d();
  const cplx s = -kI * omega;

  // mirror and condensate parametric susceptibility denominators
  const cplx hm = p.gamma_m() / 2 + s;
  const cplx hd = p.gamma_d() / 2 + s;
  const cplx den_m = guarded(hm * hm - lm * lm, "mirror susceptibility", omega);
  const cplx den_d = guarded(hd * hd - ld * ld, "condensate susceptibility", omega);

  SpectralPoint out;
  out.omega = omega;

  const cplx i_sigma_s = G2 * hd / den_d;
  const cplx i_sigma_m = g2 * hm / den_m;
  out.sigma_s = -kI * i_sigma_s;
  out.sigma_m_aux = -kI * i_sigma_m;
  out.sigma_a = -kI * (i_sigma_m + i_sigma_s);
  out.lam_bar_s = ld * G2 / den_d;
  out.lam_m_aux = lm * g2 / den_m;

  const cplx qb = p.kappa() / 2 - kI * (omega - out.sigma_s);
  const cplx den_b = guarded(qb * qb - out.lam_bar_s * out.lam_bar_s, "sigma_b", omega);
  const cplx qd = p.kappa() / 2 - kI * (omega - out.sigma_m_aux);
  const cplx den_dd = guarded(qd * qd - out.lam_m_aux * out.lam_m_aux, "sigma_d", omega);

  out.sigma_b = -kI * (g2 * qb / den_b);
  out.sigma_d = -kI * (G2 * qd / den_dd);

  out.lam_tilde_a = g2 * lm / den_m + G2 * ld / den_d;
  out.lam_tilde_b = lm + g2 * out.lam_bar_s / den_b;
  out.lam_tilde_d = ld + G2 * out.lam_m_aux / den_dd;
  return out;
}

void Band::validate() const
{
  if (!std::isfinite(omega_min) || !std::isfinite(omega_max)) throw InvalidParameter("band", "limits must be finite");
  if (omega_min > omega_max) throw InvalidParameter("band", "omega_min must not exceed omega_max");
  if (points < 0) throw InvalidParameter("band", "points must be >= 0");
  if (points == 1 && omega_min != omega_max) throw InvalidParameter("band", "a single point needs omega_min == omega_max");
}

std::vector<double> Band::grid() const
{
  validate();
  std::vector<double> w(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i)
    w[static_cast<std::size_t>(i)] =
        points == 1 ? omega_min
                    : (omega_min * static_cast<double>(points - 1 - i) + omega_max * static_cast<double>(i)) /
                          (points - 1);
  return w;
}

std::vector<SpectralPoint> evaluate_band_serial(const ModelParams& p, const Band& band)
{
  const std::vector<double> w = band.grid();
  std::vector<SpectralPoint> out;
  out.reserve(w.size());
  for (double omega : w) out.push_back(spectral_point(p, omega));
  return out;
}

std::vector<SpectralPoint> evaluate_band(const ModelParams& p, const Band& band, int max_threads)
{
  const std::vector<double> w = band.grid();
  std::vector<SpectralPoint> out(w.size());
  const auto n = static_cast<long>(w.size());
  const int threads = max_threads > 0 ? max_threads : omp_get_max_threads();

  // exceptions cannot cross the parallel region; keep the first by index
  long failed_at = n;
  std::exception_ptr failure;
#pragma omp parallel for num_threads(threads) schedule(static)
  for (long i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = spectral_point(p, w[static_cast<std::size_t>(i)]);
    } catch (...) {
#pragma omp critical(dce_band_failure)
      if (i < failed_at) {
        failed_at = i;
        failure = std::current_exception();
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::string_view to_string(Regime r)
{
  switch (r) {
    case Regime::coherent: return "coherent";
    case Regime::dissipative: return "dissipative";
    case Regime::unmodulated: return "unmodulated";
    case Regime::indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

CoherentRatio coherent_ratio(const ModelParams& p, const std::vector<double>& omegas, double threshold)
{
  if (p.lambda_m() + p.lambda_d() <= 0) return {0.0, Regime::unmodulated};
  if (omegas.empty()) throw IndeterminateRegime("empty frequency band");

  double ratio = 0.0;
  std::size_t used = 0;
  for (double w : omegas) {
    const cplx la = spectral_point(p, w).lam_tilde_a;
    const double re = std::abs(la.real());
    if (re <= 1e-14) continue;
    ratio = std::max(ratio, std::abs(la.imag()) / re);
    ++used;
  }
  if (used == 0) throw IndeterminateRegime("Re of the induced cavity gain vanishes on the whole band");
  return {ratio, ratio < threshold ? Regime::coherent : Regime::dissipative};
}

CoherentRatio coherent_ratio(const ModelParams& p, const Band& band, double threshold)
{
  return coherent_ratio(p, band.grid(), threshold);
}

double collective_cooperativity(double c_self, double c_partner, double xi_partner)
{
  const double x2 = xi_partner * xi_partner;
  const double q = 1.0 + c_partner - x2;
  return c_self * (1.0 - x2) * q / (q * q - x2 * c_partner * c_partner);
}

RegimeReport regime_report(const ModelParams& p, const Band& band, double threshold)
{
  RegimeReport r;
  const double k = p.kappa();
  r.cooperativity_c0 = 4 * p.g_m() * p.g_m() / (k * p.gamma_m());
  r.cooperativity_c1 = 4 * p.g_d() * p.g_d() / (k * p.gamma_d());
  r.xi_m = p.xi_m();
  r.xi_d = p.xi_d();
  r.collective_cm = collective_cooperativity(r.cooperativity_c0, r.cooperativity_c1, r.xi_d);
  r.collective_cd = collective_cooperativity(r.cooperativity_c1, r.cooperativity_c0, r.xi_m);
  r.xi_m_max = 1.0 + r.collective_cm;
  r.xi_d_max = 1.0 + r.collective_cd;
  r.gamma_eff_m = p.gamma_m() * (1.0 + r.collective_cm);
  r.gamma_eff_d = p.gamma_d() * (1.0 + r.collective_cd);

  auto channel = [&](double c, double xi) {
    if (c == 0.0) return 0.0;
    const double den = 1.0 - xi * xi;
    if (std::abs(den) < 1e-12) {
      r.kappa_opt_divergent = true;
      return std::numeric_limits<double>::quiet_NaN();
    }
    return c / den;
  };
  r.cooperativity_ca = channel(r.cooperativity_c0, r.xi_m) + channel(r.cooperativity_c1, r.xi_d);
  r.kappa_opt = k * r.cooperativity_ca;
  r.kappa_eff = k + r.kappa_opt;

  try {
    const CoherentRatio cr = coherent_ratio(p, band, threshold);
    r.coherent_ratio = cr.ratio;
    r.regime = cr.regime;
  } catch (const IndeterminateRegime&) {
    r.coherent_ratio = std::numeric_limits<double>::quiet_NaN();
    r.regime = Regime::indeterminate;
  } catch (const PoleError&) {
    r.coherent_ratio = std::numeric_limits<double>::quiet_NaN();
    r.regime = Regime::indeterminate;
  }
  return r;
}

namespace {

double abscissa_at(const ModelParams& p, Channel which, double lambda)
{
  const ModelParams q = which == Channel::mechanical ? p.with_lambda_m(lambda) : p.with_lambda_d(lambda);
  return spectral_abscissa(build_drift(q).matrix());
}

}  // namespace

StabilityBoundary find_stability_boundary(const ModelParams& p, Channel which)
{
  if (abscissa_at(p, which, 0.0) >= 0) throw BoundaryNotFound("system is not stable at zero modulation");

  const double c0 = 4 * p.g_m() * p.g_m() / (p.kappa() * p.gamma_m());
  const double c1 = 4 * p.g_d() * p.g_d() / (p.kappa() * p.gamma_d());
  StabilityBoundary out;
  out.lambda_predicted = which == Channel::mechanical
                             ? p.gamma_m() / 2 * (1.0 + collective_cooperativity(c0, c1, p.xi_d()))
                             : p.gamma_d() / 2 * (1.0 + collective_cooperativity(c1, c0, p.xi_m()));

  double lo = 0.0;
  double hi = 10.0 * out.lambda_predicted;
  if (!(hi > 0) || abscissa_at(p, which, hi) < 0)
    throw BoundaryNotFound("no instability below 10x the predicted modulation bound");

  for (int it = 0; it < 300 && hi - lo > 4 * std::numeric_limits<double>::epsilon() * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (abscissa_at(p, which, mid) < 0)
      lo = mid;
    else
      hi = mid;
  }
  const double a_lo = abscissa_at(p, which, lo);
  const double a_hi = abscissa_at(p, which, hi);
  out.lambda_critical = std::abs(a_lo) <= std::abs(a_hi) ? lo : hi;
  out.max_re_eig = std::abs(a_lo) <= std::abs(a_hi) ? a_lo : a_hi;
  if (std::abs(out.max_re_eig) > 1e-10)
    throw BoundaryNotFound("spectral abscissa did not resolve to zero at the boundary");
  out.relative_gap = std::abs(out.lambda_critical - out.lambda_predicted) / out.lambda_predicted;
  return out;
}

}  // namespace dce
