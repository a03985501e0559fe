#pragma once

#include "dce/calibration.hpp"
#include "dce/model.hpp"
#include "dce/spectral.hpp"
#include "dce/sweep.hpp"

#include "json.hpp"

#include <optional>
#include <string>

namespace dce {

using Json = nlohmann::ordered_json;

struct SweepBlock {
  std::optional<std::string> preset;
  Control control = Control::xi_m_rel;
  double from = 0.0;
  double to = 0.99;
  int points = 200;
  std::optional<double> fixed_partner_xi;
};

/// A parsed run configuration. `units` is "kappa" (a "model" block) or "si"
/// (a "physical" block); exactly one of the two blocks is present.
struct RunConfig {
  std::string units;
  std::optional<ModelInputs> model;
  std::optional<PhysicalParams> physical;
  std::optional<Band> band;
  std::optional<double> coherent_threshold;
  std::optional<Channel> channel;
  std::optional<SweepBlock> sweep;

  /// Model parameters, derived through calibration for SI input.
  ModelParams resolve_model() const;
};

/// Throws InvalidParameter naming the offending key, e.g. "model.gamma_m".
RunConfig parse_config(const Json& doc);
RunConfig load_config(const std::string& path);

Json to_json(const ModelParams& p);
Json to_json(const Occupations& o);
Json to_json(const RegimeReport& r);
Json to_json(const StabilityBoundary& b);
Json to_json(const Calibration& c);

}  // namespace dce
