#include "doctest.h"

#include "dce/errors.hpp"
#include "dce/lyapunov.hpp"
#include "dce/spectral.hpp"

#include <cmath>
#include <random>

using namespace dce;

namespace {

ModelParams params(double g, double G, double lm = 0, double ld = 0, double gm = 1e-4, double gd = 1e-4)
{
  ModelInputs in;
  in.gamma_m = gm;
  in.gamma_d = gd;
  in.g_m = g;
  in.g_d = G;
  in.lambda_m = lm;
  in.lambda_d = ld;
  return ModelParams(in);
}

const cplx I{0, 1};

bool near(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("no couplings, no kernels")
{
  const ModelParams p = params(0, 0, 2e-5, 1e-5);
  for (double w : {-0.7, 0.0, 0.3}) {
    const SpectralPoint s = spectral_point(p, w);
    for (cplx k : {s.sigma_a, s.sigma_b, s.sigma_d, s.sigma_s, s.sigma_m_aux, s.lam_bar_s, s.lam_m_aux,
                   s.lam_tilde_a})
      CHECK(k == cplx(0, 0));
    CHECK(s.lam_tilde_b == cplx(2e-5, 0));
    CHECK(s.lam_tilde_d == cplx(1e-5, 0));
  }
}

TEST_CASE("without a condensate channel the mirror gain is bare")
{
  for (const ModelParams& p : {params(0.05, 0, 2e-5, 1e-5), params(0.05, 0.1, 2e-5, 0)}) {
    for (double w : {-0.4, 0.0, 0.9}) {
      const SpectralPoint s = spectral_point(p, w);
      CHECK(s.lam_bar_s == cplx(0, 0));
      CHECK(s.lam_tilde_b == cplx(p.lambda_m(), 0));
    }
  }
}

TEST_CASE("unmodulated gains vanish")
{
  const SpectralPoint s = spectral_point(params(0.05, 0.1), 0.2);
  CHECK(s.lam_tilde_a == cplx(0, 0));
  CHECK(s.lam_tilde_b == cplx(0, 0));
  CHECK(s.lam_tilde_d == cplx(0, 0));
}

TEST_CASE("induced cavity damping at zero frequency")
{
  const SpectralPoint s = spectral_point(params(0.05, 0.1), 0.0);
  CHECK(-2 * s.sigma_a.imag() == doctest::Approx(500.0).epsilon(1e-12));
}

TEST_CASE("conjugation symmetry of the rational kernels")
{
  // the coefficient functions i*Sigma, the gain kernels and the induced gains
  // are real rational functions of -i*omega; Sigma itself is -i times one
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const ModelParams p = params(0.07, 0.12, 3e-5, 4e-5, 1e-4, 2e-4);
  for (int k = 0; k < 100; ++k) {
    const double w = u(rng);
    const SpectralPoint a = spectral_point(p, w);
    const SpectralPoint b = spectral_point(p, -w);
    for (auto [x, y] : {std::pair{I * a.sigma_a, I * b.sigma_a}, {I * a.sigma_b, I * b.sigma_b},
                        {I * a.sigma_d, I * b.sigma_d}, {I * a.sigma_s, I * b.sigma_s},
                        {I * a.sigma_m_aux, I * b.sigma_m_aux}, {a.lam_bar_s, b.lam_bar_s},
                        {a.lam_m_aux, b.lam_m_aux}, {a.lam_tilde_a, b.lam_tilde_a},
                        {a.lam_tilde_b, b.lam_tilde_b}, {a.lam_tilde_d, b.lam_tilde_d}})
      CHECK(near(y, std::conj(x), 1e-12));
    CHECK(near(b.sigma_a, -std::conj(a.sigma_a), 1e-12));
  }
}

TEST_CASE("induced gains approach the bare ones as the partner coupling vanishes")
{
  double prev_b = 1e300, prev_d = 1e300;
  for (double c : {1e-4, 1e-5, 1e-6}) {
    double worst_b = 0, worst_d = 0;
    for (double w = -1; w <= 1; w += 0.05) {
      worst_b = std::max(worst_b, std::abs(spectral_point(params(0.05, c, 2e-5, 3e-5), w).lam_tilde_b - 2e-5));
      worst_d = std::max(worst_d, std::abs(spectral_point(params(c, 0.05, 2e-5, 3e-5), w).lam_tilde_d - 3e-5));
    }
    // the induced part is second order in the partner coupling
    if (prev_b < 1e300) {
      CHECK(worst_b / prev_b == doctest::Approx(1e-2).epsilon(0.05));
      CHECK(worst_d / prev_d == doctest::Approx(1e-2).epsilon(0.05));
    }
    prev_b = worst_b;
    prev_d = worst_d;
  }
  CHECK(prev_b < 1e-9);
  CHECK(prev_d < 1e-9);
}

TEST_CASE("poles are reported by kernel")
{
  try {
    spectral_point(params(0.05, 0.1, 0.5e-4), 0.0);
    FAIL("expected PoleError");
  } catch (const PoleError& e) {
    CHECK(e.kernel() == "mirror susceptibility");
  }
  try {
    spectral_point(params(0.05, 0.1, 0, 0.5e-4), 0.0);
    FAIL("expected PoleError");
  } catch (const PoleError& e) {
    CHECK(e.kernel() == "condensate susceptibility");
  }
  CHECK_NOTHROW(spectral_point(params(0.05, 0.1, 0.5e-4), 0.01));
}

TEST_CASE("band grid and parallel evaluation")
{
  const Band band{-1.0, 1.0, 5};
  const std::vector<double> g = band.grid();
  REQUIRE(g.size() == 5);
  CHECK(g[0] == -1.0);
  CHECK(g[2] == 0.0);
  CHECK(g[4] == 1.0);
  const std::vector<double> odd = Band{-0.7, 0.7, 41}.grid();
  for (std::size_t i = 0; i < odd.size(); ++i) CHECK(odd[i] == -odd[odd.size() - 1 - i]);
  CHECK(Band{0.0, 0.0, 1}.grid() == std::vector<double>{0.0});
  CHECK(Band{0.0, 1.0, 0}.grid().empty());
  CHECK_THROWS_AS((Band{1.0, -1.0, 3}.grid()), InvalidParameter);
  CHECK_THROWS_AS((Band{0.0, 1.0, 1}.validate()), InvalidParameter);

  const ModelParams p = params(0.05, 0.1, 2e-5, 3e-5);
  const Band wide{-2.0, 2.0, 301};
  const auto s = evaluate_band_serial(p, wide);
  for (int threads : {1, 2, 3}) {
    const auto q = evaluate_band(p, wide, threads);
    REQUIRE(q.size() == s.size());
    bool same = true;
    for (std::size_t i = 0; i < s.size(); ++i)
      same = same && q[i].omega == s[i].omega && q[i].sigma_a == s[i].sigma_a && q[i].sigma_b == s[i].sigma_b &&
             q[i].sigma_d == s[i].sigma_d && q[i].lam_tilde_a == s[i].lam_tilde_a &&
             q[i].lam_tilde_d == s[i].lam_tilde_d;
    CHECK(same);
  }
  CHECK_THROWS_AS(evaluate_band(params(0.05, 0.1, 0.5e-4), Band{-1, 1, 3}, 2), PoleError);
}

TEST_CASE("coherent ratio")
{
  const ModelParams p = params(0.05, 0.1, 2e-5, 3e-5);
  const CoherentRatio at0 = coherent_ratio(p, std::vector<double>{0.0});
  CHECK(at0.ratio == 0.0);
  CHECK(at0.regime == Regime::coherent);

  const CoherentRatio none = coherent_ratio(params(0.05, 0.1));
  CHECK(none.regime == Regime::unmodulated);
  CHECK(none.ratio == 0.0);

  CHECK_THROWS_AS(coherent_ratio(p, std::vector<double>{}), IndeterminateRegime);
  CHECK_THROWS_AS(coherent_ratio(params(0, 0, 2e-5), std::vector<double>{0.0, 0.5}), IndeterminateRegime);

  const CoherentRatio strict = coherent_ratio(p, Band{}, 1e-9);
  CHECK(strict.regime == Regime::dissipative);
  CHECK(strict.ratio > 0);
}

TEST_CASE("largely different couplings are more coherent than equal ones")
{
  auto at_half = [](double g, double G) {
    const ModelParams p = params(g, G);
    const double xi = 0.5 * regime_report(p).xi_d_max;
    return coherent_ratio(p.with_lambda_d(xi * p.gamma_d() / 2), Band{-1, 1, 201}).ratio;
  };
  const double diff = at_half(0.001, 0.25);
  const double equal = at_half(0.05, 0.05);
  MESSAGE("coherent ratio: largely different " << diff << ", equal " << equal);
  CHECK(diff < equal);
}

TEST_CASE("collective cooperativity limits")
{
  CHECK(collective_cooperativity(100, 400, 0.0) == doctest::Approx(100.0 / 401.0).epsilon(1e-15));
  CHECK(collective_cooperativity(100, 0, 0.7) == doctest::Approx(100.0).epsilon(1e-15));
}

TEST_CASE("regime report closed forms")
{
  const RegimeReport fig3 = regime_report(params(0.05, 0));
  CHECK(fig3.cooperativity_c0 == doctest::Approx(100));
  CHECK(fig3.collective_cm == doctest::Approx(100));
  CHECK(fig3.xi_m_max * 1e-4 / 2 == doctest::Approx(1e-4 / 2 * 101));
  CHECK(fig3.regime == Regime::unmodulated);

  const RegimeReport free = regime_report(params(0, 0));
  CHECK(free.gamma_eff_m == 1e-4);
  CHECK(free.gamma_eff_d == 1e-4);
  CHECK(free.kappa_eff == 1.0);

  const RegimeReport mod = regime_report(params(0.05, 0.1, 2e-5, 3e-5));
  CHECK(mod.xi_m == doctest::Approx(0.4));
  CHECK(mod.xi_d == doctest::Approx(0.6));
  CHECK(mod.kappa_opt == doctest::Approx(100 / (1 - 0.16) + 400 / (1 - 0.36)));
  CHECK(mod.kappa_eff == doctest::Approx(1 + mod.kappa_opt));
  CHECK_FALSE(mod.kappa_opt_divergent);

  // above xi = 1 the channel's contribution turns negative
  const RegimeReport over = regime_report(params(0.05, 0.1, 1e-4, 0), Band{0.5, 1.0, 11});
  CHECK(over.kappa_opt == doctest::Approx(100 / (1 - 4.0) + 400));

  const RegimeReport edge = regime_report(params(0.05, 0.1, 0.5e-4, 0));
  CHECK(edge.kappa_opt_divergent);
  CHECK(std::isnan(edge.kappa_opt));
  CHECK(edge.regime == Regime::indeterminate);
}

TEST_CASE("damping rates match the zero-frequency self-energies")
{
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const double gm = std::pow(10.0, -4 + 2 * u(rng)), gd = std::pow(10.0, -4 + 2 * u(rng));
    const ModelParams p = params(0.3 * u(rng), 0.3 * u(rng), 0.45 * gm * u(rng), 0.45 * gd * u(rng), gm, gd);
    const RegimeReport r = regime_report(p);
    const SpectralPoint s = spectral_point(p, 0.0);
    CHECK(r.kappa_opt == doctest::Approx(-2 * s.sigma_a.imag()).epsilon(1e-9));
    CHECK(r.gamma_eff_m == doctest::Approx(p.gamma_m() - 2 * s.sigma_b.imag()).epsilon(1e-9));
    CHECK(r.gamma_eff_d == doctest::Approx(p.gamma_d() - 2 * s.sigma_d.imag()).epsilon(1e-9));
  }
}

TEST_CASE("stability boundary by bisection")
{
  const StabilityBoundary free = find_stability_boundary(params(0, 0), Channel::mechanical);
  CHECK(std::abs(free.lambda_critical - 0.5e-4) <= 1e-10);
  CHECK(std::abs(free.max_re_eig) <= 1e-10);

  const StabilityBoundary fig3 = find_stability_boundary(params(0.05, 0), Channel::mechanical);
  CHECK(fig3.lambda_predicted == doctest::Approx(0.5e-4 * 101));
  CHECK(fig3.relative_gap <= 0.05);

  const StabilityBoundary at0 = find_stability_boundary(params(0.05, 0.05), Channel::atomic);
  const StabilityBoundary at2 = find_stability_boundary(params(0.05, 0.05, 0.2 * 0.5e-4), Channel::atomic);
  MESSAGE("atomic boundary xi_m = 0: " << at0.lambda_critical << ", xi_m = 0.2: " << at2.lambda_critical);
  CHECK(at2.lambda_critical < at0.lambda_critical);

  CHECK_THROWS_AS(find_stability_boundary(params(0.05, 0.05, 0, 2e-4), Channel::mechanical), BoundaryNotFound);
}

}
