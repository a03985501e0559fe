#include "doctest.h"

#include "dce/errors.hpp"
#include "dce/time_dependent.hpp"

#include <cmath>
#include <numbers>

using namespace dce;

namespace {

TimeDependentParams resonant(double omega, double g, double G, double lm, double ld, ModulationForm form,
                             double gamma = 1e-2)
{
  ModelInputs in;
  in.gamma_m = in.gamma_d = gamma;
  in.g_m = g;
  in.g_d = G;
  in.lambda_m = lm;
  in.lambda_d = ld;
  return {ModelParams(in), omega, omega, omega, form};
}

Eigen::Matrix2d block(const DriftMatrix& a, int k) { return a.matrix().block<2, 2>(2 * k, 2 * k); }

}  // namespace

TEST_SUITE("time_dependent") {

TEST_CASE("at t = 0 the modulation block matches the static pattern")
{
  const TimeDependentParams tp = resonant(20, 0.05, 0.1, 3e-3, 2e-3, ModulationForm::rotating);
  const Eigen::Matrix2d m = block(build_drift_time_dependent(tp, 0.0), 1);
  CHECK(m(0, 0) == doctest::Approx(3e-3 - 5e-3));
  CHECK(m(1, 1) == doctest::Approx(-(3e-3 + 5e-3)));
  CHECK(m(0, 1) == doctest::Approx(20.0));
  CHECK(m(1, 0) == doctest::Approx(-20.0));
}

TEST_CASE("free evolution is time independent")
{
  const TimeDependentParams tp = resonant(15, 0, 0, 0, 0, ModulationForm::bare);
  const Matrix6 a0 = build_drift_time_dependent(tp, 0.0).matrix();
  CHECK(build_drift_time_dependent(tp, 0.37).matrix() == a0);
  CHECK(a0(0, 1) == 15.0);
  CHECK(a0(5, 4) == -15.0);
  CHECK(a0(2, 2) == -5e-3);
}

TEST_CASE("modulation has period pi / omega")
{
  for (ModulationForm form : {ModulationForm::rotating, ModulationForm::bare}) {
    const TimeDependentParams tp = resonant(12, 0.05, 0.1, 3e-3, 2e-3, form);
    for (double t : {0.0, 0.011, 0.5, 3.3}) {
      const Matrix6 a = build_drift_time_dependent(tp, t).matrix();
      const Matrix6 b = build_drift_time_dependent(tp, t + std::numbers::pi / 12).matrix();
      CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("validator: vacuum stays vacuum")
{
  const RwaValidation r = rwa_validate(resonant(20, 0, 0, 0, 0, ModulationForm::bare, 0.5), 1 << 20, 64);
  CHECK(r.rwa.photon == 0.0);
  CHECK(std::abs(r.time_averaged.photon) <= 1e-12);
  CHECK(r.time_averaged.phonon_m <= 1e-12);
  CHECK(r.relative_gap <= 1e-12);
}

TEST_CASE("validator: rotating-form drive reproduces the static solution")
{
  const RwaValidation r = rwa_validate(resonant(20, 0, 0, 0.25, 0, ModulationForm::rotating, 1.0), 1 << 20, 200);
  CHECK(r.rwa.phonon_m == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(r.relative_gap <= 1e-6);
}

TEST_CASE("validator: RWA gap shrinks as omega / kappa grows")
{
  const RwaValidation r25 = rwa_validate(resonant(25, 0, 0, 0.25, 0, ModulationForm::bare, 1.0), 1 << 20, 200);
  const RwaValidation r50 = rwa_validate(resonant(50, 0, 0, 0.25, 0, ModulationForm::bare, 1.0), 1 << 20, 200);
  CHECK(r50.relative_gap <= 0.1);
  CHECK(r50.relative_gap < r25.relative_gap);
  CHECK(r50.period == doctest::Approx(std::numbers::pi / 50));
}

TEST_CASE("validator errors")
{
  TimeDependentParams tp = resonant(20, 0, 0, 0.25, 0, ModulationForm::bare, 1.0);
  CHECK_THROWS_AS(rwa_validate(tp, 1, 100), NonConvergence);
  tp.omega_d = 21;
  CHECK_THROWS_AS(rwa_validate(tp, 1 << 20, 100), InvalidParameter);
  CHECK_THROWS_AS(rwa_validate(resonant(5, 0, 0, 0.25, 0, ModulationForm::bare, 1.0), 1 << 20, 100),
                  InvalidParameter);
  CHECK_THROWS_AS(rwa_validate(resonant(20, 0, 0, 0.75, 0, ModulationForm::bare, 1.0), 1 << 20, 100), Unstable);
  tp.omega_d = 0;
  CHECK_THROWS_AS(tp.validate(), InvalidParameter);

  std::stop_source src;
  src.request_stop();
  RwaOptions opts;
  opts.stop = src.get_token();
  CHECK_THROWS_AS(rwa_validate(resonant(20, 0, 0, 0.25, 0, ModulationForm::bare, 1.0), 1 << 20, 100, opts),
                  Cancelled);
}

}
