#include "dce/sweep.hpp"

#include "dce/errors.hpp"
#include "dce/lyapunov.hpp"

#include <omp.h>

#include <cmath>
#include <limits>

namespace dce {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool is_relative(Control c) { return c == Control::xi_m_rel || c == Control::xi_d_rel; }
bool is_mechanical(Control c) { return c == Control::xi_m_rel || c == Control::lambda_m; }
bool is_modulation(Control c) { return c != Control::g && c != Control::G; }

double cooperativity(double g, double gamma, double kappa) { return 4 * g * g / (kappa * gamma); }

}  // namespace

std::string_view to_string(Control c)
{
  switch (c) {
    case Control::xi_m_rel: return "xi_m_rel";
    case Control::xi_d_rel: return "xi_d_rel";
    case Control::lambda_m: return "lambda_m";
    case Control::lambda_d: return "lambda_d";
    case Control::g: return "g";
    case Control::G: return "G";
  }
  return "xi_m_rel";
}

Control control_from_string(std::string_view name)
{
  for (Control c : {Control::xi_m_rel, Control::xi_d_rel, Control::lambda_m, Control::lambda_d, Control::g, Control::G})
    if (to_string(c) == name) return c;
  throw InvalidParameter("control", "unknown control '" + std::string(name) +
                                        "' (expected xi_m_rel, xi_d_rel, lambda_m, lambda_d, g or G)");
}

void SweepSpec::validate() const
{
  if (points < 2) throw InvalidParameter("points", "must be >= 2");
  if (!std::isfinite(from) || !std::isfinite(to)) throw InvalidParameter("from", "range must be finite");
  if (!(from < to)) throw InvalidParameter("from", "must be < to");
  if (from < 0) throw InvalidParameter("from", "must be >= 0");
  if (is_relative(control) && !(to < 1)) throw InvalidParameter("to", "relative sweeps must stay below 1");
  if (fixed_partner_xi) {
    if (!is_modulation(control)) throw InvalidParameter("fixed_partner_xi", "only applies to modulation sweeps");
    if (!std::isfinite(*fixed_partner_xi) || *fixed_partner_xi < 0)
      throw InvalidParameter("fixed_partner_xi", "must be >= 0");
  }
  if (!(coherent_threshold > 0)) throw InvalidParameter("coherent_threshold", "must be > 0");
  band.validate();
}

std::vector<double> SweepSpec::grid() const
{
  validate();
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) g[static_cast<std::size_t>(i)] = from + (to - from) * i / (points - 1);
  g.back() = to;
  return g;
}

ModelParams resolve_point(const SweepSpec& spec, double control)
{
  ModelParams p = spec.base;
  if (spec.fixed_partner_xi) {
    const double xi = *spec.fixed_partner_xi;
    p = is_mechanical(spec.control) ? p.with_lambda_d(xi * p.gamma_d() / 2) : p.with_lambda_m(xi * p.gamma_m() / 2);
  }
  const double c0 = cooperativity(p.g_m(), p.gamma_m(), p.kappa());
  const double c1 = cooperativity(p.g_d(), p.gamma_d(), p.kappa());
  switch (spec.control) {
    case Control::xi_m_rel: {
      const double xi_max = 1 + collective_cooperativity(c0, c1, p.xi_d());
      return p.with_lambda_m(control * xi_max * p.gamma_m() / 2);
    }
    case Control::xi_d_rel: {
      const double xi_max = 1 + collective_cooperativity(c1, c0, p.xi_m());
      return p.with_lambda_d(control * xi_max * p.gamma_d() / 2);
    }
    case Control::lambda_m: return p.with_lambda_m(control);
    case Control::lambda_d: return p.with_lambda_d(control);
    case Control::g: return p.with_g_m(control);
    case Control::G: return p.with_g_d(control);
  }
  return p;
}

SweepRow evaluate_point(const SweepSpec& spec, double control)
{
  SweepRow row;
  row.control = control;
  row.n_photon = row.n_phonon_m = row.n_phonon_d = kNaN;
  row.residual = row.min_symplectic = kNaN;
  row.coherent_ratio = kNaN;
  row.regime = Regime::indeterminate;
  try {
    const ModelParams p = resolve_point(spec, control);
    const RegimeReport rr = regime_report(p, spec.band, spec.coherent_threshold);
    row.coherent_ratio = rr.coherent_ratio;
    row.regime = rr.regime;

    const SteadyState ss = solve_steady(build_drift(p), build_diffusion(p));
    row.max_re_eig = ss.max_re_eig;
    row.residual = ss.residual;
    row.stable = ss.stable;
    if (!ss.stable) {
      row.error = "unstable";
      return row;
    }
    row.min_symplectic = symplectic_eigenvalues(*ss.v).minCoeff();
    const Occupations occ = occupations(CovarianceMatrix(Matrix6(*ss.v)));
    row.n_photon = occ.photon;
    row.n_phonon_m = occ.phonon_m;
    row.n_phonon_d = occ.phonon_d;
  } catch (const MarginalStability& e) {
    row.max_re_eig = e.max_re_eig();
    row.stable = false;
    row.error = e.what();
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

SweepTable run_sweep_serial(const SweepSpec& spec)
{
  SweepTable t;
  for (double c : spec.grid()) t.rows.push_back(evaluate_point(spec, c));
  return t;
}

SweepTable run_sweep(const SweepSpec& spec, int max_threads)
{
  const std::vector<double> grid = spec.grid();
  SweepTable t;
  t.rows.resize(grid.size());
  const auto n = static_cast<long>(grid.size());
  const int threads = max_threads > 0 ? max_threads : omp_get_max_threads();
#pragma omp parallel for num_threads(threads) schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    t.rows[k] = evaluate_point(spec, grid[k]);
  }
  return t;
}

std::string_view label(Series s)
{
  switch (s) {
    case Series::photons: return "Casimir photons";
    case Series::mechanical: return "mechanical-type Casimir phonons";
    case Series::bogoliubov: return "Bogoliubov-type Casimir phonons";
  }
  return "";
}

const std::vector<std::string>& preset_names()
{
  static const std::vector<std::string> names{
      "fig3a_weak",     "fig3a_strong",    "fig4a",         "fig4b",          "fig5_equal",
      "fig5_diff",      "fig6_equal_xm0",  "fig6_equal_xm02", "fig6_diff_xm0", "fig6_diff_xm02",
  };
  return names;
}

namespace {

FigurePreset make_preset(std::string name, double gamma, double g, double G, Control control, double partner_xi,
                         std::vector<std::string> caption)
{
  ModelInputs in;
  in.kappa = 1.0;
  in.gamma_m = gamma;
  in.gamma_d = gamma;
  in.g_m = g;
  in.g_d = G;

  FigurePreset f;
  f.name = std::move(name);
  f.spec.base = ModelParams(in);
  f.spec.control = control;
  f.spec.from = 0.0;
  f.spec.to = 0.99;
  f.spec.points = 200;
  f.spec.fixed_partner_xi = partner_xi;
  f.spec.band = Band{-1.0, 1.0, 201};
  f.caption.push_back("preset: " + f.name);
  for (auto& c : caption) f.caption.push_back(std::move(c));
  f.caption.push_back("control: " + std::string(to_string(control)) + " from 0 to 0.99 of xi_max, 200 points");
  f.series = G == 0 ? std::vector<Series>{Series::photons, Series::mechanical}
                    : std::vector<Series>{Series::photons, Series::mechanical, Series::bogoliubov};
  return f;
}

}  // namespace

FigurePreset figure_preset(std::string_view name)
{
  if (name == "fig3a_weak")
    return make_preset("fig3a_weak", 1e-4, 0.05, 0.0, Control::xi_m_rel, 0.0,
                       {"G = 0", "g = 0.05 kappa", "C0 = 100", "kappa/gamma_m = 10000", "xi_d = 0"});
  if (name == "fig3a_strong")
    return make_preset("fig3a_strong", 1e-4, 0.25, 0.0, Control::xi_m_rel, 0.0,
                       {"G = 0", "g = 0.25 kappa", "C0 = 2500", "kappa/gamma_m = 10000", "xi_d = 0"});
  if (name == "fig4a")
    return make_preset("fig4a", 1e-3, 0.05, 0.05, Control::xi_d_rel, 0.0,
                       {"gamma_m = gamma_d = 0.001 kappa", "g = G = 0.05 kappa", "xi_m = 0"});
  if (name == "fig4b")
    return make_preset("fig4b", 1e-3, 0.005, 0.1, Control::xi_d_rel, 0.0,
                       {"gamma_m = gamma_d = 0.001 kappa", "G = 20 g = 0.1 kappa", "xi_m = 0"});
  if (name == "fig5_equal")
    return make_preset("fig5_equal", 1e-4, 0.05, 0.05, Control::xi_d_rel, 0.0,
                       {"gamma_m = gamma_d = 0.0001 kappa", "g = G = 0.05 kappa", "xi_m = 0"});
  if (name == "fig5_diff")
    return make_preset("fig5_diff", 1e-4, 0.001, 0.25, Control::xi_d_rel, 0.0,
                       {"gamma_m = gamma_d = 0.0001 kappa", "G = 250 g = 0.25 kappa", "xi_m = 0"});
  if (name == "fig6_equal_xm0")
    return make_preset("fig6_equal_xm0", 1e-4, 0.05, 0.05, Control::xi_d_rel, 0.0,
                       {"gamma_m = gamma_d = 0.0001 kappa", "g = G = 0.05 kappa", "xi_m = 0"});
  if (name == "fig6_equal_xm02")
    return make_preset("fig6_equal_xm02", 1e-4, 0.05, 0.05, Control::xi_d_rel, 0.2,
                       {"gamma_m = gamma_d = 0.0001 kappa", "g = G = 0.05 kappa", "xi_m = 0.2"});
  if (name == "fig6_diff_xm0")
    return make_preset("fig6_diff_xm0", 1e-4, 0.001, 0.05, Control::xi_d_rel, 0.0,
                       {"gamma_m = gamma_d = 0.0001 kappa", "G = 50 g = 0.05 kappa", "xi_m = 0"});
  if (name == "fig6_diff_xm02")
    return make_preset("fig6_diff_xm02", 1e-4, 0.001, 0.05, Control::xi_d_rel, 0.2,
                       {"gamma_m = gamma_d = 0.0001 kappa", "G = 50 g = 0.05 kappa", "xi_m = 0.2"});

  std::string valid;
  for (const auto& n : preset_names()) valid += (valid.empty() ? "" : ", ") + n;
  throw InvalidParameter("preset", "unknown preset '" + std::string(name) + "'; valid presets: " + valid);
}

}  // namespace dce
