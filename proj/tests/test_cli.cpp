#include "doctest.h"

#include "cli.hpp"
#include "dce/sweep.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using dce::cli::run_cli;
using json = nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args)
{
  args.insert(args.begin(), "dcesim");
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir()
  {
    static int counter = 0;
    path = fs::temp_directory_path() / ("dce_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string write(const std::string& name, const std::string& text) const
  {
    std::ofstream(path / name) << text;
    return (path / name).string();
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path)
{
  std::ifstream is(path, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

struct EnvGuard {
  explicit EnvGuard(const char* value) { value ? setenv("DCE_THREADS", value, 1) : unsetenv("DCE_THREADS"); }
  ~EnvGuard() { unsetenv("DCE_THREADS"); }
};

const char* kVacuum = R"({"units": "kappa", "model": {"gamma_m": 1e-4, "gamma_d": 1e-4, "g": 0.05, "G": 0.05}})";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("steady: vacuum configuration")
{
  TempDir dir;
  const Run r = run({"steady", "--config", dir.write("c.json", kVacuum)});
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["stable"] == true);
  CHECK(j["occupations"]["photon"] == 0.0);
  CHECK(j["occupations"]["phonon_m"] == 0.0);
  CHECK(j["occupations"]["phonon_d"] == 0.0);
  CHECK(j["regime"]["regime"] == "unmodulated");
  CHECK(run({"steady", "--config", dir.file("c.json")}).out == r.out);
}

TEST_CASE("steady: modulation beyond the bound is a physics failure")
{
  TempDir dir;
  const auto cfg = dir.write("c.json", R"({"units": "kappa", "model": {"gamma_m": 1e-4, "g": 0.05, "lambda_m": 0.006}})");
  const Run r = run({"steady", "--config", cfg});
  CHECK(r.code == 2);
  const json j = json::parse(r.out);
  CHECK(j["stable"] == false);
  CHECK(j["max_re_eig"].get<double>() > 0);
}

TEST_CASE("steady: malformed configurations name the field")
{
  TempDir dir;
  Run r = run({"steady", "--config", dir.write("a.json", R"({"units": "kappa", "model": {"gamma_m": -1}})")});
  CHECK(r.code == 1);
  CHECK(r.err.find("gamma_m") != std::string::npos);
  r = run({"steady", "--config", dir.write("b.json", R"({"units": "kappa", "model": {"gama_m": 1}})")});
  CHECK(r.code == 1);
  CHECK(r.err.find("model.gama_m") != std::string::npos);
  r = run({"steady", "--config", dir.write("c.json", R"({"units": "kappa", "model": {"g": "big"}})")});
  CHECK(r.code == 1);
  CHECK(r.err.find("model.g") != std::string::npos);
  r = run({"steady", "--config", dir.write("d.json", R"({"units": "kappa", "model": {}, "physical": {}})")});
  CHECK(r.code == 1);
  r = run({"steady", "--config", dir.write("e.json", "{ not json")});
  CHECK(r.code == 1);
  r = run({"steady", "--config", dir.write("f.json", R"({"model": {}})")});
  CHECK(r.code == 1);
  CHECK(r.err.find("units") != std::string::npos);
  CHECK(run({"steady", "--config", dir.file("missing.json")}).code == 1);
  CHECK(run({"steady"}).code == 1);
}

TEST_CASE("sweep: preset CSV carries the caption")
{
  TempDir dir;
  const Run r = run({"sweep", "--preset", "fig3a_weak"});
  CHECK(r.code == 0);
  CHECK(r.out.find("# kappa/gamma_m = 10000\n") != std::string::npos);
  CHECK(r.out.find("# C0 = 100\n") != std::string::npos);
  std::istringstream is(r.out);
  CHECK(dce::read_csv(is).rows.size() == 200);
}

TEST_CASE("sweep: csv and svg files")
{
  TempDir dir;
  const Run r = run({"sweep", "--preset", "fig4a", "--out", dir.file("a.csv"), "--svg", dir.file("a.svg")});
  CHECK(r.code == 0);
  CHECK(fs::file_size(dir.file("a.csv")) > 0);
  CHECK(slurp(dir.file("a.svg")).find("<polyline") != std::string::npos);
}

TEST_CASE("sweep: unknown preset lists valid ones")
{
  const Run r = run({"sweep", "--preset", "fig9"});
  CHECK(r.code == 1);
  for (const auto& n : dce::preset_names()) CHECK(r.err.find(n) != std::string::npos);
}

TEST_CASE("sweep: configuration-driven sweep and thread cap")
{
  TempDir dir;
  const auto cfg = dir.write("s.json", R"({"units": "kappa",
    "model": {"gamma_m": 1e-3, "gamma_d": 1e-3, "g": 0.05, "G": 0.05},
    "sweep": {"control": "xi_d_rel", "from": 0, "to": 0.9, "points": 17, "fixed_partner_xi": 0.1}})");
  std::string one, three;
  {
    EnvGuard env("1");
    const Run r = run({"sweep", "--config", cfg, "--band", "-0.5:0.5:21"});
    CHECK(r.code == 0);
    one = r.out;
  }
  {
    EnvGuard env("3");
    three = run({"sweep", "--config", cfg, "--band", "-0.5:0.5:21"}).out;
  }
  CHECK(one == three);
  std::istringstream is(one);
  CHECK(dce::read_csv(is).rows.size() == 17);
  {
    EnvGuard env("zero");
    CHECK(run({"sweep", "--config", cfg}).code == 1);
  }
  CHECK(run({"sweep", "--config", cfg, "--preset", "fig4a"}).code == 1);
  CHECK(run({"sweep", "--config", cfg, "--band", "1:2"}).code == 1);
  CHECK(run({"sweep", "--config", cfg, "--coherent-threshold", "-1"}).code == 1);
  CHECK(run({"sweep"}).code == 1);
}

TEST_CASE("spectrum: zero couplings give zero kernels")
{
  TempDir dir;
  const auto cfg = dir.write("z.json", R"({"units": "kappa", "model": {"g": 0, "G": 0}})");
  const Run r = run({"spectrum", "--config", cfg, "--band", "-1:1:11"});
  REQUIRE(r.code == 0);
  std::istringstream is(r.out);
  std::string line;
  std::getline(is, line);
  CHECK(line.rfind("omega,re_sigma_a,im_sigma_a,", 0) == 0);
  int rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    std::stringstream ss(line.substr(line.find(',') + 1));
    std::string cell;
    while (std::getline(ss, cell, ',')) CHECK(std::stod(cell) == 0.0);
  }
  CHECK(rows == 11);
}

TEST_CASE("spectrum: file symmetry and zero-frequency damping")
{
  TempDir dir;
  const auto cfg = dir.write("s.json", R"({"units": "kappa",
    "model": {"gamma_m": 1e-4, "gamma_d": 2e-4, "g": 0.05, "G": 0.1, "xi_m": 0.3, "xi_d": 0.2}})");
  REQUIRE(run({"spectrum", "--config", cfg, "--band", "-1:1:41", "--out", dir.file("s.csv")}).code == 0);
  std::ifstream is(dir.file("s.csv"));
  std::string line;
  std::getline(is, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(is, line)) {
    std::vector<double> v;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
    rows.push_back(v);
  }
  REQUIRE(rows.size() == 41);
  // columns: omega, then (re, im) for five self-energies and five gain kernels
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& a = rows[i];
    const auto& b = rows[rows.size() - 1 - i];
    CHECK(a[0] == -b[0]);
    for (std::size_t c = 1; c < 11; c += 2) {
      CHECK(a[c] == doctest::Approx(-b[c]).epsilon(1e-12));
      CHECK(a[c + 1] == doctest::Approx(b[c + 1]).epsilon(1e-12));
    }
    for (std::size_t c = 11; c < 21; c += 2) {
      CHECK(a[c] == doctest::Approx(b[c]).epsilon(1e-12));
      CHECK(a[c + 1] == doctest::Approx(-b[c + 1]).epsilon(1e-12));
    }
  }
  const json st = json::parse(run({"steady", "--config", cfg}).out);
  CHECK(st["regime"]["kappa_opt"].get<double>() == doctest::Approx(-2 * rows[20][2]).epsilon(1e-12));
}

TEST_CASE("stability: decoupled threshold")
{
  TempDir dir;
  const auto cfg = dir.write("s.json", R"({"units": "kappa", "model": {"gamma_m": 1e-4, "g": 0, "G": 0}, "channel": "mechanical"})");
  const Run r = run({"stability", "--config", cfg});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(std::abs(j["lambda_critical"].get<double>() - 0.5e-4) <= 1e-10);
  CHECK(j["channel"] == "mechanical");
  const auto bad = dir.write("b.json", R"({"units": "kappa", "model": {"g": 0.05, "G": 0.05, "xi_d": 5}})");
  CHECK(run({"stability", "--config", bad}).code == 2);
  CHECK(run({"stability", "--config", dir.write("c.json", R"({"units": "kappa", "model": {}, "channel": "optical"})")}).code == 1);
}

TEST_CASE("calibrate")
{
  TempDir dir;
  const auto cfg = dir.write("si.json", R"({"units": "si", "physical": {
    "cavity_length": 1e-4, "mirror_mass": 1e-11, "mirror_freq": 2e5, "cavity_freq": 2.4152e15,
    "laser_freq": 2.415e15, "laser_power": 1e-9, "cavity_decay": 1e4, "mech_damping": 1,
    "bogoliubov_damping": 1, "atom_number": 1e5, "atom_mass": 1.443e-25, "scattering_length": 5.3e-9,
    "mode_waist": 2.5e-5, "atom_detuning": -2e11, "rabi_coupling": 1e8, "detuning": 2e5}})");
  const Run r = run({"calibrate", "--config", cfg});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["model"]["kappa"] == 1.0);
  CHECK(j["model"]["g"].get<double>() > 0);
  CHECK(j["diagnostics"].size() == 5);
  CHECK(run({"steady", "--config", cfg}).code == 0);
  CHECK(run({"calibrate", "--config", dir.write("k.json", kVacuum)}).code == 1);
  CHECK(run({"calibrate", "--config", dir.write("m.json", R"({"units": "si", "physical": {"cavity_length": 1}})")}).code == 1);
}

TEST_CASE("usage")
{
  CHECK(run({}).code == 1);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"steady", "--bogus"}).code == 1);
}

}
