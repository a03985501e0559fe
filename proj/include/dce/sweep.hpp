#pragma once

#include "dce/model.hpp"
#include "dce/spectral.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dce {

enum class Control { xi_m_rel, xi_d_rel, lambda_m, lambda_d, g, G };

std::string_view to_string(Control c);
/// Throws InvalidParameter("control", ...) for unknown names.
Control control_from_string(std::string_view name);

struct SweepSpec {
  ModelParams base{ModelInputs{}};
  Control control = Control::xi_m_rel;
  double from = 0.0;
  double to = 0.99;
  int points = 200;
  /// xi of the channel not being swept; when unset the base value is kept.
  std::optional<double> fixed_partner_xi;
  Band band;
  double coherent_threshold = kDefaultCoherentThreshold;

  void validate() const;
  std::vector<double> grid() const;
};

struct SweepRow {
  double control = 0.0;
  double n_photon = 0.0;  ///< NaN unless the point solved stably
  double n_phonon_m = 0.0;
  double n_phonon_d = 0.0;
  double max_re_eig = 0.0;
  double residual = 0.0;
  double coherent_ratio = 0.0;
  Regime regime = Regime::unmodulated;
  bool stable = false;
  double min_symplectic = 0.0;  ///< not written to CSV
  std::string error;            ///< not written to CSV
};

struct SweepTable {
  std::vector<std::string> comments;  ///< written as '# ' lines before the header
  std::vector<SweepRow> rows;
};

/// Parameters of one grid point of a sweep.
ModelParams resolve_point(const SweepSpec& spec, double control);

/// Solves one grid point; failures are recorded in the row.
SweepRow evaluate_point(const SweepSpec& spec, double control);

/// OpenMP-parallel over grid points; rows come back in grid order.
SweepTable run_sweep(const SweepSpec& spec, int max_threads = 0);
SweepTable run_sweep_serial(const SweepSpec& spec);

enum class Series { photons, mechanical, bogoliubov };

std::string_view label(Series s);

struct FigurePreset {
  std::string name;
  SweepSpec spec;
  std::vector<std::string> caption;
  std::vector<Series> series;
};

const std::vector<std::string>& preset_names();
/// Throws InvalidParameter("preset", ...) listing the valid names.
FigurePreset figure_preset(std::string_view name);

void write_csv(const SweepTable& table, std::ostream& os);
/// Throws IoError carrying the path.
void emit_csv(const SweepTable& table, const std::string& path);
SweepTable read_csv(std::istream& is);
SweepTable read_csv_file(const std::string& path);

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

std::vector<PlotSeries> series_from_table(const SweepTable& table, const std::vector<Series>& which,
                                          const std::string& suffix = {});

void write_svg(const std::vector<PlotSeries>& series, std::ostream& os, const std::string& title = {},
               const std::string& x_label = "control");
void emit_plot(const std::vector<PlotSeries>& series, const std::string& path, const std::string& title = {},
               const std::string& x_label = "control");

/// Shortest decimal string that parses back to the same double; empty for NaN.
std::string format_double(double v);

}  // namespace dce
