#include "cli.hpp"

#include "dce/calibration.hpp"
#include "dce/config.hpp"
#include "dce/errors.hpp"
#include "dce/lyapunov.hpp"
#include "dce/spectral.hpp"
#include "dce/sweep.hpp"

#include "CLI11.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

namespace dce::cli {

namespace {

struct Options {
  std::string config;
  std::string preset;
  std::string out;
  std::string svg;
  std::string band;
  double coherent_threshold = 0.0;
  bool has_threshold = false;
};

int thread_cap()
{
  const char* env = std::getenv("DCE_THREADS");
  if (!env || !*env) return 0;
  int n = 0;
  const std::string_view s(env);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
  if (ec != std::errc() || ptr != s.data() + s.size() || n < 1)
    throw InvalidParameter("DCE_THREADS", "must be a positive integer");
  return n;
}

Band parse_band_flag(const std::string& text)
{
  const auto a = text.find(':');
  const auto b = a == std::string::npos ? a : text.find(':', a + 1);
  if (b == std::string::npos) throw InvalidParameter("--band", "expected <omega_min:omega_max:n>");
  auto num = [&](std::string_view s, auto& v) {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
      throw InvalidParameter("--band", "bad number '" + std::string(s) + "'");
  };
  const std::string_view t(text);
  Band band;
  num(t.substr(0, a), band.omega_min);
  num(t.substr(a + 1, b - a - 1), band.omega_max);
  num(t.substr(b + 1), band.points);
  band.validate();
  return band;
}

RunConfig require_config(const Options& o)
{
  if (o.config.empty()) throw InvalidParameter("--config", "required for this command");
  return load_config(o.config);
}

Band band_for(const Options& o, const RunConfig* cfg)
{
  if (!o.band.empty()) return parse_band_flag(o.band);
  if (cfg && cfg->band) return *cfg->band;
  return Band{};
}

double threshold_for(const Options& o, const RunConfig* cfg)
{
  if (o.has_threshold) {
    if (!(o.coherent_threshold > 0)) throw InvalidParameter("--coherent-threshold", "must be > 0");
    return o.coherent_threshold;
  }
  if (cfg && cfg->coherent_threshold) return *cfg->coherent_threshold;
  return kDefaultCoherentThreshold;
}

void write_text(const std::string& path, const std::string& text)
{
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  os << text;
  os.flush();
  if (!os) throw IoError("write to '" + path + "' failed");
}

int cmd_steady(const Options& o, std::ostream& out)
{
  const RunConfig cfg = require_config(o);
  const ModelParams p = cfg.resolve_model();
  const RegimeReport rr = regime_report(p, band_for(o, &cfg), threshold_for(o, &cfg));
  const SteadyState ss = solve_steady(build_drift(p), build_diffusion(p));

  Json j;
  j["model"] = to_json(p);
  j["stable"] = ss.stable;
  j["max_re_eig"] = ss.max_re_eig;
  if (ss.stable) {
    const CovarianceMatrix v{Matrix6(*ss.v)};
    j["residual"] = ss.residual;
    j["occupations"] = to_json(occupations(v));
    j["min_symplectic"] = symplectic_eigenvalues(*ss.v).minCoeff();
    if (p.g_d() > p.g_m()) {
      const CollectiveMode cm = collective_mode_occupation(v, p);
      j["collective_mode"] = {{"occupation", cm.occupation}, {"squeezing", cm.squeezing}};
    }
  }
  j["regime"] = to_json(rr);
  out << j.dump(2) << '\n';
  return ss.stable ? kExitOk : kExitDomain;
}

std::string model_line(const ModelParams& p) { return "model: " + to_json(p).dump(); }

int cmd_sweep(const Options& o, std::ostream& out)
{
  std::optional<RunConfig> cfg;
  if (!o.config.empty()) cfg = load_config(o.config);
  if (!o.preset.empty() && cfg) throw InvalidParameter("--preset", "cannot be combined with --config");

  std::string preset_name = o.preset;
  if (cfg) {
    if (!cfg->sweep) throw InvalidParameter("sweep", "missing sweep block");
    if (cfg->sweep->preset) preset_name = *cfg->sweep->preset;
  }

  SweepSpec spec;
  std::vector<std::string> comments;
  std::vector<Series> series{Series::photons, Series::mechanical, Series::bogoliubov};
  std::string title;
  if (!preset_name.empty()) {
    FigurePreset f = figure_preset(preset_name);
    spec = f.spec;
    comments = f.caption;
    series = f.series;
    title = f.name;
    if (!o.band.empty()) spec.band = parse_band_flag(o.band);
  } else if (cfg) {
    const SweepBlock& b = *cfg->sweep;
    spec.base = cfg->resolve_model();
    spec.control = b.control;
    spec.from = b.from;
    spec.to = b.to;
    spec.points = b.points;
    spec.fixed_partner_xi = b.fixed_partner_xi;
    spec.band = band_for(o, &*cfg);
    comments.push_back(model_line(spec.base));
    comments.push_back("control: " + std::string(to_string(spec.control)) + " from " + format_double(spec.from) +
                       " to " + format_double(spec.to) + ", " + std::to_string(spec.points) + " points");
    if (spec.fixed_partner_xi) comments.push_back("fixed partner xi: " + format_double(*spec.fixed_partner_xi));
  } else {
    throw InvalidParameter("--preset", "sweep needs --preset or --config");
  }
  spec.coherent_threshold = threshold_for(o, cfg ? &*cfg : nullptr);
  spec.validate();

  SweepTable table = run_sweep(spec, thread_cap());
  table.comments = comments;

  if (o.out.empty())
    write_csv(table, out);
  else
    emit_csv(table, o.out);
  if (!o.svg.empty()) emit_plot(series_from_table(table, series), o.svg, title, std::string(to_string(spec.control)));
  return kExitOk;
}

int cmd_spectrum(const Options& o, std::ostream& out)
{
  const RunConfig cfg = require_config(o);
  const ModelParams p = cfg.resolve_model();
  const std::vector<SpectralPoint> pts = evaluate_band(p, band_for(o, &cfg), thread_cap());

  std::ostringstream os;
  os << "omega";
  for (const char* k : {"sigma_a", "sigma_b", "sigma_d", "sigma_s", "sigma_m_aux", "lam_bar_s", "lam_m_aux",
                        "lam_tilde_a", "lam_tilde_b", "lam_tilde_d"})
    os << ",re_" << k << ",im_" << k;
  os << '\n';
  for (const auto& s : pts) {
    os << format_double(s.omega);
    for (const cplx& v : {s.sigma_a, s.sigma_b, s.sigma_d, s.sigma_s, s.sigma_m_aux, s.lam_bar_s, s.lam_m_aux,
                          s.lam_tilde_a, s.lam_tilde_b, s.lam_tilde_d})
      os << ',' << format_double(v.real()) << ',' << format_double(v.imag());
    os << '\n';
  }
  if (o.out.empty())
    out << os.str();
  else
    write_text(o.out, os.str());
  return kExitOk;
}

int cmd_stability(const Options& o, std::ostream& out)
{
  const RunConfig cfg = require_config(o);
  const ModelParams p = cfg.resolve_model();
  const Channel ch = cfg.channel.value_or(Channel::mechanical);
  const StabilityBoundary b = find_stability_boundary(p, ch);
  Json j;
  j["channel"] = ch == Channel::mechanical ? "mechanical" : "atomic";
  const Json fields = to_json(b);
  for (const auto& [k, v] : fields.items()) j[k] = v;
  out << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_calibrate(const Options& o, std::ostream& out)
{
  const RunConfig cfg = require_config(o);
  if (!cfg.physical) throw InvalidParameter("units", "calibrate needs units \"si\" with a physical block");
  out << to_json(derive_rates(*cfg.physical)).dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
  CLI::App app{"Dynamical Casimir photon and phonon generation in a hybrid BEC-optomechanical cavity", "dcesim"};
  app.require_subcommand(1);
  Options o;

  auto add_config = [&](CLI::App* s) { s->add_option("--config", o.config, "JSON run configuration"); };
  auto add_band = [&](CLI::App* s) { s->add_option("--band", o.band, "frequency band omega_min:omega_max:n"); };
  auto add_threshold = [&](CLI::App* s) {
    s->add_option_function<double>(
        "--coherent-threshold",
        [&](double v) {
          o.coherent_threshold = v;
          o.has_threshold = true;
        },
        "coherent-regime ratio threshold (default 0.1)");
  };

  CLI::App* steady = app.add_subcommand("steady", "steady-state occupations and regime report (JSON)");
  add_config(steady);
  add_band(steady);
  add_threshold(steady);

  CLI::App* sweep = app.add_subcommand("sweep", "parameter sweep or figure preset (CSV, optional SVG)");
  add_config(sweep);
  sweep->add_option("--preset", o.preset, "figure preset name");
  sweep->add_option("--out", o.out, "CSV output path (default stdout)");
  sweep->add_option("--svg", o.svg, "SVG plot output path");
  add_band(sweep);
  add_threshold(sweep);

  CLI::App* spectrum = app.add_subcommand("spectrum", "self-energy and gain kernels over a band (CSV)");
  add_config(spectrum);
  add_band(spectrum);
  spectrum->add_option("--out", o.out, "CSV output path (default stdout)");

  CLI::App* stability = app.add_subcommand("stability", "modulation stability boundary (JSON)");
  add_config(stability);

  CLI::App* calibrate = app.add_subcommand("calibrate", "map SI parameters to rates in units of kappa (JSON)");
  add_config(calibrate);

  std::vector<char*> argv;
  std::vector<std::string> copy = args;
  if (copy.empty()) copy.emplace_back("dcesim");
  for (auto& a : copy) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (steady->parsed()) return cmd_steady(o, out);
    if (sweep->parsed()) return cmd_sweep(o, out);
    if (spectrum->parsed()) return cmd_spectrum(o, out);
    if (stability->parsed()) return cmd_stability(o, out);
    if (calibrate->parsed()) return cmd_calibrate(o, out);
  } catch (const DomainFailure& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace dce::cli
