#include "dce/errors.hpp"
#include "dce/sweep.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace dce {

namespace {

constexpr std::string_view kHeader =
    "control,n_photon,n_phonon_m,n_phonon_d,max_re_eig,residual,coherent_ratio,regime,stable";

double parse_double(std::string_view s, std::size_t line)
{
  if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw InvalidParameter("csv", "line " + std::to_string(line) + ": bad number '" + std::string(s) + "'");
  return v;
}

Regime parse_regime(std::string_view s, std::size_t line)
{
  for (Regime r : {Regime::coherent, Regime::dissipative, Regime::unmodulated, Regime::indeterminate})
    if (to_string(r) == s) return r;
  throw InvalidParameter("csv", "line " + std::to_string(line) + ": bad regime '" + std::string(s) + "'");
}

}  // namespace

std::string format_double(double v)
{
  if (std::isnan(v)) return {};
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_csv(const SweepTable& table, std::ostream& os)
{
  for (const auto& c : table.comments) os << "# " << c << '\n';
  os << kHeader << '\n';
  for (const auto& r : table.rows) {
    os << format_double(r.control) << ',' << format_double(r.n_photon) << ',' << format_double(r.n_phonon_m) << ','
       << format_double(r.n_phonon_d) << ',' << format_double(r.max_re_eig) << ',' << format_double(r.residual)
       << ',' << format_double(r.coherent_ratio) << ',' << to_string(r.regime) << ','
       << (r.stable ? "true" : "false") << '\n';
  }
}

void emit_csv(const SweepTable& table, const std::string& path)
{
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  write_csv(table, os);
  os.flush();
  if (!os) throw IoError("write to '" + path + "' failed");
}

SweepTable read_csv(std::istream& is)
{
  SweepTable t;
  std::string line;
  std::size_t n = 0;
  bool header = false;
  while (std::getline(is, line)) {
    ++n;
    if (!header) {
      if (line.rfind("# ", 0) == 0) {
        t.comments.push_back(line.substr(2));
        continue;
      }
      if (line != kHeader) throw InvalidParameter("csv", "line " + std::to_string(n) + ": unexpected header");
      header = true;
      continue;
    }
    std::vector<std::string_view> f;
    std::string_view rest(line);
    for (;;) {
      const auto pos = rest.find(',');
      f.push_back(rest.substr(0, pos));
      if (pos == std::string_view::npos) break;
      rest.remove_prefix(pos + 1);
    }
    if (f.size() != 9) throw InvalidParameter("csv", "line " + std::to_string(n) + ": expected 9 fields");
    SweepRow r;
    r.control = parse_double(f[0], n);
    r.n_photon = parse_double(f[1], n);
    r.n_phonon_m = parse_double(f[2], n);
    r.n_phonon_d = parse_double(f[3], n);
    r.max_re_eig = parse_double(f[4], n);
    r.residual = parse_double(f[5], n);
    r.coherent_ratio = parse_double(f[6], n);
    r.regime = parse_regime(f[7], n);
    if (f[8] != "true" && f[8] != "false")
      throw InvalidParameter("csv", "line " + std::to_string(n) + ": bad stable flag");
    r.stable = f[8] == "true";
    t.rows.push_back(std::move(r));
  }
  if (!header) throw InvalidParameter("csv", "missing header");
  return t;
}

SweepTable read_csv_file(const std::string& path)
{
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path + "' for reading");
  return read_csv(is);
}

}  // namespace dce
