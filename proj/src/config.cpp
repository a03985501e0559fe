#include "dce/config.hpp"

#include "dce/errors.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace dce {

namespace {

void reject_unknown(const Json& obj, const std::string& where, const std::set<std::string>& allowed)
{
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.count(key)) throw InvalidParameter(where.empty() ? key : where + "." + key, "unknown key");
  }
}

const Json& object_at(const Json& doc, const std::string& key)
{
  const Json& v = doc.at(key);
  if (!v.is_object()) throw InvalidParameter(key, "must be an object");
  return v;
}

std::optional<double> number(const Json& obj, const std::string& where, const std::string& key)
{
  if (!obj.contains(key)) return std::nullopt;
  const Json& v = obj.at(key);
  if (!v.is_number()) throw InvalidParameter(where + "." + key, "must be a number");
  return v.get<double>();
}

void read(const Json& obj, const std::string& where, const std::string& key, double& into)
{
  if (auto v = number(obj, where, key)) into = *v;
}

ModelInputs parse_model(const Json& m)
{
  reject_unknown(m, "model", {"kappa", "gamma_m", "gamma_d", "g", "G", "lambda_m", "lambda_d", "xi_m", "xi_d",
                              "nbar_m", "nbar_d", "nbar_ph"});
  ModelInputs in;
  read(m, "model", "kappa", in.kappa);
  read(m, "model", "gamma_m", in.gamma_m);
  read(m, "model", "gamma_d", in.gamma_d);
  read(m, "model", "g", in.g_m);
  read(m, "model", "G", in.g_d);
  read(m, "model", "lambda_m", in.lambda_m);
  read(m, "model", "lambda_d", in.lambda_d);
  read(m, "model", "nbar_m", in.nbar_m);
  read(m, "model", "nbar_d", in.nbar_d);
  read(m, "model", "nbar_ph", in.nbar_ph);
  // xi is relative to the (unnormalized) damping given in the same block
  if (auto xi = number(m, "model", "xi_m")) {
    if (m.contains("lambda_m")) throw InvalidParameter("model.xi_m", "give either xi_m or lambda_m");
    in.lambda_m = *xi * in.gamma_m / 2;
  }
  if (auto xi = number(m, "model", "xi_d")) {
    if (m.contains("lambda_d")) throw InvalidParameter("model.xi_d", "give either xi_d or lambda_d");
    in.lambda_d = *xi * in.gamma_d / 2;
  }
  return in;
}

PhysicalParams parse_physical(const Json& m)
{
  PhysicalParams pp;
  const std::pair<const char*, double*> fields[] = {
      {"cavity_length", &pp.cavity_length},
      {"mirror_mass", &pp.mirror_mass},
      {"mirror_freq", &pp.mirror_freq},
      {"cavity_freq", &pp.cavity_freq},
      {"laser_freq", &pp.laser_freq},
      {"laser_power", &pp.laser_power},
      {"cavity_decay", &pp.cavity_decay},
      {"mech_damping", &pp.mech_damping},
      {"bogoliubov_damping", &pp.bogoliubov_damping},
      {"atom_number", &pp.atom_number},
      {"atom_mass", &pp.atom_mass},
      {"scattering_length", &pp.scattering_length},
      {"mode_waist", &pp.mode_waist},
      {"atom_detuning", &pp.atom_detuning},
      {"rabi_coupling", &pp.rabi_coupling},
      {"spring_mod_depth", &pp.spring_mod_depth},
      {"collision_mod_depth", &pp.collision_mod_depth},
      {"detuning", &pp.detuning},
      {"nbar_m", &pp.nbar_m},
      {"nbar_d", &pp.nbar_d},
      {"nbar_ph", &pp.nbar_ph},
  };
  std::set<std::string> allowed;
  for (const auto& [name, ptr] : fields) allowed.insert(name);
  reject_unknown(m, "physical", allowed);
  const std::set<std::string> optional{"spring_mod_depth", "collision_mod_depth", "detuning", "nbar_m", "nbar_d",
                                       "nbar_ph", "scattering_length"};
  for (const auto& [name, ptr] : fields) {
    if (!m.contains(name) && !optional.count(name)) throw InvalidParameter(std::string("physical.") + name, "missing");
    read(m, "physical", name, *ptr);
  }
  return pp;
}

Band parse_band(const Json& b)
{
  reject_unknown(b, "band", {"omega_min", "omega_max", "points"});
  Band band;
  read(b, "band", "omega_min", band.omega_min);
  read(b, "band", "omega_max", band.omega_max);
  if (auto n = number(b, "band", "points")) {
    if (*n != std::floor(*n) || *n < 0 || *n > 1e7) throw InvalidParameter("band.points", "must be a count");
    band.points = static_cast<int>(*n);
  }
  band.validate();
  return band;
}

SweepBlock parse_sweep(const Json& s)
{
  reject_unknown(s, "sweep", {"preset", "control", "from", "to", "points", "fixed_partner_xi"});
  SweepBlock b;
  if (s.contains("preset")) {
    if (!s.at("preset").is_string()) throw InvalidParameter("sweep.preset", "must be a string");
    if (s.size() != 1) throw InvalidParameter("sweep.preset", "a preset cannot be combined with other sweep keys");
    b.preset = s.at("preset").get<std::string>();
    return b;
  }
  if (!s.contains("control")) throw InvalidParameter("sweep.control", "missing");
  if (!s.at("control").is_string()) throw InvalidParameter("sweep.control", "must be a string");
  b.control = control_from_string(s.at("control").get<std::string>());
  read(s, "sweep", "from", b.from);
  read(s, "sweep", "to", b.to);
  if (auto n = number(s, "sweep", "points")) {
    if (*n != std::floor(*n) || *n < 2 || *n > 1e7) throw InvalidParameter("sweep.points", "must be a count >= 2");
    b.points = static_cast<int>(*n);
  }
  b.fixed_partner_xi = number(s, "sweep", "fixed_partner_xi");
  return b;
}

Json number_or_null(double v)
{
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

ModelParams RunConfig::resolve_model() const
{
  if (model) return ModelParams(*model);
  return derive_rates(*physical).model;
}

RunConfig parse_config(const Json& doc)
{
  if (!doc.is_object()) throw InvalidParameter("config", "must be a JSON object");
  reject_unknown(doc, "", {"units", "model", "physical", "band", "coherent_threshold", "channel", "sweep"});
  if (!doc.contains("units") || !doc.at("units").is_string())
    throw InvalidParameter("units", "missing; expected \"kappa\" or \"si\"");

  RunConfig cfg;
  cfg.units = doc.at("units").get<std::string>();
  if (cfg.units == "kappa") {
    if (doc.contains("physical")) throw InvalidParameter("physical", "not allowed with units \"kappa\"");
    if (!doc.contains("model")) throw InvalidParameter("model", "missing (required with units \"kappa\")");
    cfg.model = parse_model(object_at(doc, "model"));
  } else if (cfg.units == "si") {
    if (doc.contains("model")) throw InvalidParameter("model", "not allowed with units \"si\"");
    if (!doc.contains("physical")) throw InvalidParameter("physical", "missing (required with units \"si\")");
    cfg.physical = parse_physical(object_at(doc, "physical"));
  } else {
    throw InvalidParameter("units", "expected \"kappa\" or \"si\"");
  }

  if (doc.contains("band")) cfg.band = parse_band(object_at(doc, "band"));
  if (doc.contains("coherent_threshold")) {
    cfg.coherent_threshold = number(doc, "", "coherent_threshold");
    if (!(*cfg.coherent_threshold > 0)) throw InvalidParameter("coherent_threshold", "must be > 0");
  }
  if (doc.contains("channel")) {
    const Json& c = doc.at("channel");
    if (c == "mechanical")
      cfg.channel = Channel::mechanical;
    else if (c == "atomic")
      cfg.channel = Channel::atomic;
    else
      throw InvalidParameter("channel", "expected \"mechanical\" or \"atomic\"");
  }
  if (doc.contains("sweep")) cfg.sweep = parse_sweep(object_at(doc, "sweep"));
  return cfg;
}

RunConfig load_config(const std::string& path)
{
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config '" + path + "'");
  Json doc;
  try {
    doc = Json::parse(is);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidParameter("config", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

Json to_json(const ModelParams& p)
{
  Json j;
  j["kappa"] = p.kappa();
  j["gamma_m"] = p.gamma_m();
  j["gamma_d"] = p.gamma_d();
  j["g"] = p.g_m();
  j["G"] = p.g_d();
  j["lambda_m"] = p.lambda_m();
  j["lambda_d"] = p.lambda_d();
  j["xi_m"] = p.xi_m();
  j["xi_d"] = p.xi_d();
  j["nbar_m"] = p.nbar_m();
  j["nbar_d"] = p.nbar_d();
  j["nbar_ph"] = p.nbar_ph();
  j["kappa_si"] = p.kappa_scale();
  return j;
}

Json to_json(const Occupations& o)
{
  Json j;
  j["photon"] = o.photon;
  j["phonon_m"] = o.phonon_m;
  j["phonon_d"] = o.phonon_d;
  j["clamped"] = o.clamped;
  return j;
}

Json to_json(const RegimeReport& r)
{
  Json j;
  j["c0"] = r.cooperativity_c0;
  j["c1"] = r.cooperativity_c1;
  j["cm"] = r.collective_cm;
  j["cd"] = r.collective_cd;
  j["xi_m"] = r.xi_m;
  j["xi_d"] = r.xi_d;
  j["xi_m_max"] = r.xi_m_max;
  j["xi_d_max"] = r.xi_d_max;
  j["gamma_eff_m"] = r.gamma_eff_m;
  j["gamma_eff_d"] = r.gamma_eff_d;
  j["kappa_opt"] = number_or_null(r.kappa_opt);
  j["kappa_eff"] = number_or_null(r.kappa_eff);
  j["kappa_opt_divergent"] = r.kappa_opt_divergent;
  j["coherent_ratio"] = number_or_null(r.coherent_ratio);
  j["regime"] = std::string(to_string(r.regime));
  return j;
}

Json to_json(const StabilityBoundary& b)
{
  Json j;
  j["lambda_critical"] = b.lambda_critical;
  j["lambda_predicted"] = b.lambda_predicted;
  j["relative_gap"] = b.relative_gap;
  j["max_re_eig"] = b.max_re_eig;
  return j;
}

Json to_json(const Calibration& c)
{
  const DerivedQuantities& q = c.derived;
  Json j;
  j["model"] = to_json(c.model);
  Json d;
  d["x_zp"] = q.x_zp;
  d["g0"] = q.g0;
  d["U0"] = q.u0;
  d["G0"] = q.g0_atomic;
  d["omega_R"] = q.omega_recoil;
  d["omega_sw"] = q.omega_sw;
  d["omega_d"] = q.omega_d;
  d["delta0"] = q.delta0_shift;
  d["Delta0"] = q.delta0;
  d["E_L"] = q.drive;
  d["alpha_re"] = q.alpha.real();
  d["alpha_im"] = q.alpha.imag();
  d["g"] = q.g;
  d["G"] = q.G;
  d["lambda_m"] = q.lambda_m;
  d["lambda_d"] = q.lambda_d;
  j["derived_si"] = d;
  Json diags = Json::array();
  for (const auto& x : c.diagnostics) {
    Json e;
    e["name"] = x.name;
    e["value"] = number_or_null(x.value);
    e["limit"] = number_or_null(x.limit);
    e["ok"] = x.ok;
    e["message"] = x.message;
    diags.push_back(e);
  }
  j["diagnostics"] = diags;
  return j;
}

}  // namespace dce
