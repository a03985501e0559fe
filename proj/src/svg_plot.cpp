#include "dce/errors.hpp"
#include "dce/sweep.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>

namespace dce {

namespace {

constexpr double kFloor = 1e-12;
constexpr double kWidth = 760, kHeight = 460;
constexpr double kLeft = 80, kRight = 250, kTop = 40, kBottom = 60;
constexpr std::array<const char*, 6> kColors{"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

std::string fmt(const char* f, double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string escape(const std::string& s)
{
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

bool plottable(double x, double y) { return std::isfinite(x) && std::isfinite(y); }

}  // namespace

std::vector<PlotSeries> series_from_table(const SweepTable& table, const std::vector<Series>& which,
                                          const std::string& suffix)
{
  std::vector<PlotSeries> out;
  for (Series s : which) {
    PlotSeries ps;
    ps.label = std::string(label(s)) + suffix;
    for (const auto& r : table.rows) {
      ps.x.push_back(r.control);
      ps.y.push_back(s == Series::photons ? r.n_photon : s == Series::mechanical ? r.n_phonon_m : r.n_phonon_d);
    }
    out.push_back(std::move(ps));
  }
  return out;
}

void write_svg(const std::vector<PlotSeries>& series, std::ostream& os, const std::string& title,
               const std::string& x_label)
{
  if (series.empty()) throw InvalidParameter("series", "nothing to plot");
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
  double y0 = x0, y1 = -x0;
  for (const auto& s : series) {
    if (s.x.empty()) throw InvalidParameter("series", "'" + s.label + "' is empty");
    if (s.x.size() != s.y.size()) throw InvalidParameter("series", "'" + s.label + "' has mismatched x and y");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!plottable(s.x[i], s.y[i])) continue;
      const double ly = std::log10(std::max(s.y[i], kFloor));
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, ly);
      y1 = std::max(y1, ly);
    }
  }
  if (!(x0 <= x1)) throw InvalidParameter("series", "no finite points to plot");
  if (x0 == x1) {
    x0 -= 0.5;
    x1 += 0.5;
  }
  y0 = std::floor(y0);
  y1 = std::ceil(y1);
  if (y0 == y1) y1 = y0 + 1;

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return kTop + (y1 - std::log10(std::max(y, kFloor))) / (y1 - y0) * ph; };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty())
    os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" << escape(title)
       << "</text>\n";
  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";

  const int decades = static_cast<int>(y1 - y0);
  const int step = std::max(1, (decades + 11) / 12);
  for (int k = static_cast<int>(y0); k <= static_cast<int>(y1); k += step) {
    const std::string y = fmt("%.3f", kTop + (y1 - k) / (y1 - y0) * ph);
    os << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << y << "\" x2=\"" << kLeft << "\" y2=\"" << y
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << kLeft - 8 << "\" y=\"" << y << "\" text-anchor=\"end\" dominant-baseline=\"middle\">1e"
       << k << "</text>\n";
  }
  for (int i = 0; i <= 5; ++i) {
    const double xv = x0 + (x1 - x0) * i / 5;
    const std::string x = fmt("%.3f", px(xv));
    os << "<line x1=\"" << x << "\" y1=\"" << kTop + ph << "\" x2=\"" << x << "\" y2=\"" << kTop + ph + 5
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << x << "\" y=\"" << kTop + ph + 18 << "\" text-anchor=\"middle\">" << fmt("%.3g", xv)
       << "</text>\n";
  }
  os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 15 << "\" text-anchor=\"middle\">"
     << escape(x_label) << "</text>\n";
  os << "<text transform=\"translate(20," << kTop + ph / 2
     << ") rotate(-90)\" text-anchor=\"middle\">occupation</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kColors[k % kColors.size()];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!plottable(s.x[i], s.y[i])) continue;
      os << (first ? "" : " ") << fmt("%.3f", px(s.x[i])) << ',' << fmt("%.3f", py(s.y[i]));
      first = false;
    }
    os << "\"/>\n";
    const double ly = kTop + 10 + 20.0 * static_cast<double>(k);
    os << "<line x1=\"" << kWidth - kRight + 15 << "\" y1=\"" << ly << "\" x2=\"" << kWidth - kRight + 40
       << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
    os << "<text x=\"" << kWidth - kRight + 46 << "\" y=\"" << ly << "\" dominant-baseline=\"middle\">"
       << escape(s.label) << "</text>\n";
  }
  os << "</svg>\n";
}

void emit_plot(const std::vector<PlotSeries>& series, const std::string& path, const std::string& title,
               const std::string& x_label)
{
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  write_svg(series, os, title, x_label);
  os.flush();
  if (!os) throw IoError("write to '" + path + "' failed");
}

}  // namespace dce
