#pragma once

#include "ruinopt/contracts.hpp"
#include "ruinopt/distortion.hpp"
#include "ruinopt/errors.hpp"
#include "ruinopt/loss_model.hpp"
#include "ruinopt/premium.hpp"
#include "ruinopt/solver.hpp"
#include "ruinopt/verify.hpp"

#include <json.hpp>

#include <string>
#include <string_view>

namespace ruinopt::io {

using Json = nlohmann::ordered_json;

/// Bad configuration document. Carries a "line L, column C" prefix for
/// syntax errors and a JSON path for schema errors.
class ConfigError : public ValidationError {
public:
  using ValidationError::ValidationError;
};

/// {"loss": {...}, "distortion": {...}, "theta": number, "wealth": number}
struct RunConfig {
  Json loss;
  Json distortion;
  double theta = 0.0;
  double wealth = 0.0;

  Market market() const;
};

RunConfig parse_config(std::string_view text);
RunConfig config_from_json(const Json &doc);

LossModel loss_from_json(const Json &j, const std::string &path = "loss");
Distortion distortion_from_json(const Json &j, const std::string &path = "distortion");

/// Parametric families round-trip through loss_from_json; an empirical
/// loss is written as its family name only.
Json to_json(const LossModel &loss);
Json to_json(const Distortion &g);

/// {"d": .., "m": ..}; "m": "max" stands for m = M.
Json contract_to_json(const LossModel &loss, const DimlContract &c);
DimlContract contract_from_json(const LossModel &loss, const Json &j);

Json to_json(const Solution &s, const LossModel &loss);
Json to_json(const PremiumQuote &q);
Json to_json(const verify::OracleReport &r, const LossModel &loss);
Json to_json(const verify::MonteCarloResult &r);
Json to_json(const verify::DualityReport &r, const LossModel &loss);

} // namespace ruinopt::io
