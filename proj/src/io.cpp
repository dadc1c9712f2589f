#include "ruinopt/io.hpp"

#include <cmath>
#include <set>

namespace ruinopt::io {

namespace {

[[noreturn]] void fail(const std::string &path, const std::string &what) {
  throw ConfigError(path + ": " + what);
}

void expect_keys(const Json &j, const std::string &path,
                 std::initializer_list<const char *> allowed) {
  if (!j.is_object())
    fail(path, "expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto &item : j.items())
    if (!ok.count(item.key()))
      fail(path, "unknown key \"" + item.key() + "\"");
}

double number(const Json &j, const std::string &path, const char *key) {
  if (!j.contains(key))
    fail(path, std::string("missing \"") + key + "\"");
  const auto &v = j.at(key);
  if (!v.is_number())
    fail(path + "." + key, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x))
    fail(path + "." + key, "must be finite");
  return x;
}

// Re-throw library validation failures with the JSON path attached.
template <class Fn> auto at_path(const std::string &path, Fn &&fn) {
  try {
    return fn();
  } catch (const ConfigError &) {
    throw;
  } catch (const std::exception &e) {
    fail(path, e.what());
  }
}

} // namespace

Market RunConfig::market() const {
  auto l = loss_from_json(loss);
  auto g = distortion_from_json(distortion);
  return Market(std::move(l), g, theta);
}

RunConfig parse_config(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error &e) {
    std::size_t line = 1, column = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ConfigError("line " + std::to_string(line) + ", column " + std::to_string(column) +
                      ": " + e.what());
  }
  return config_from_json(doc);
}

RunConfig config_from_json(const Json &doc) {
  expect_keys(doc, "$", {"loss", "distortion", "theta", "wealth"});
  RunConfig cfg;
  if (!doc.contains("loss"))
    fail("$", "missing \"loss\"");
  if (!doc.contains("distortion"))
    fail("$", "missing \"distortion\"");
  cfg.loss = doc.at("loss");
  cfg.distortion = doc.at("distortion");
  cfg.theta = number(doc, "$", "theta");
  cfg.wealth = number(doc, "$", "wealth");
  if (cfg.theta < 0.0)
    fail("$.theta", "must be >= 0");
  if (cfg.wealth <= 0.0)
    fail("$.wealth", "must be > 0");
  // Validate the nested models now so bad configs never reach a solver.
  loss_from_json(cfg.loss);
  distortion_from_json(cfg.distortion);
  return cfg;
}

LossModel loss_from_json(const Json &j, const std::string &path) {
  if (!j.is_object() || !j.contains("family") || !j.at("family").is_string())
    fail(path, "expected an object with a string \"family\"");
  const auto family = j.at("family").get<std::string>();
  if (family == "exponential") {
    expect_keys(j, path, {"family", "rate"});
    const double rate = number(j, path, "rate");
    return at_path(path, [&] { return LossModel::exponential(rate); });
  }
  if (family == "pareto") {
    expect_keys(j, path, {"family", "shape", "scale"});
    const double a = number(j, path, "shape"), s = number(j, path, "scale");
    return at_path(path, [&] { return LossModel::pareto(a, s); });
  }
  if (family == "uniform") {
    expect_keys(j, path, {"family", "upper"});
    const double b = number(j, path, "upper");
    return at_path(path, [&] { return LossModel::uniform(b); });
  }
  if (family == "lognormal") {
    expect_keys(j, path, {"family", "mu", "sigma"});
    const double mu = number(j, path, "mu"), sigma = number(j, path, "sigma");
    return at_path(path, [&] { return LossModel::lognormal(mu, sigma); });
  }
  if (family == "atom_scaled") {
    expect_keys(j, path, {"family", "q", "inner"});
    const double q = number(j, path, "q");
    if (!j.contains("inner"))
      fail(path, "missing \"inner\"");
    auto inner = loss_from_json(j.at("inner"), path + ".inner");
    return at_path(path, [&] { return LossModel::atom_scaled(q, std::move(inner)); });
  }
  if (family == "empirical") {
    expect_keys(j, path, {"family", "points"});
    if (!j.contains("points") || !j.at("points").is_array())
      fail(path, "\"points\" must be an array of [p, x] pairs");
    std::vector<QuantilePoint> table;
    std::size_t k = 0;
    for (const auto &row : j.at("points")) {
      if (!row.is_array() || row.size() != 2 || !row[0].is_number() || !row[1].is_number())
        fail(path + ".points[" + std::to_string(k) + "]", "expected [p, x]");
      table.push_back({row[0].get<double>(), row[1].get<double>()});
      ++k;
    }
    return at_path(path, [&] { return load_empirical(table); });
  }
  fail(path + ".family", "unknown loss family \"" + family + "\"");
}

Distortion distortion_from_json(const Json &j, const std::string &path) {
  if (!j.is_object() || !j.contains("family") || !j.at("family").is_string())
    fail(path, "expected an object with a string \"family\"");
  const auto family = j.at("family").get<std::string>();
  if (family == "identity") {
    expect_keys(j, path, {"family"});
    return Distortion::identity();
  }
  if (family == "proportional_hazard") {
    expect_keys(j, path, {"family", "c"});
    const double c = number(j, path, "c");
    return at_path(path, [&] { return Distortion::proportional_hazard(c); });
  }
  if (family == "dual_power") {
    expect_keys(j, path, {"family", "k"});
    const double k = number(j, path, "k");
    return at_path(path, [&] { return Distortion::dual_power(k); });
  }
  if (family == "wang") {
    expect_keys(j, path, {"family", "lambda"});
    const double l = number(j, path, "lambda");
    return at_path(path, [&] { return Distortion::wang(l); });
  }
  fail(path + ".family", "unknown distortion family \"" + family + "\"");
}

Json to_json(const LossModel &loss) {
  return std::visit(
      [](const auto &f) -> Json {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Exponential>)
          return {{"family", "exponential"}, {"rate", f.rate}};
        else if constexpr (std::is_same_v<T, Pareto>)
          return {{"family", "pareto"}, {"shape", f.shape}, {"scale", f.scale}};
        else if constexpr (std::is_same_v<T, Uniform>)
          return {{"family", "uniform"}, {"upper", f.upper}};
        else if constexpr (std::is_same_v<T, LogNormal>)
          return {{"family", "lognormal"}, {"mu", f.mu}, {"sigma", f.sigma}};
        else if constexpr (std::is_same_v<T, AtomScaled>)
          return {{"family", "atom_scaled"}, {"q", f.q}, {"inner", to_json(*f.inner)}};
        else
          return {{"family", "empirical"}};
      },
      loss.family());
}

Json to_json(const Distortion &g) {
  return std::visit(
      [](const auto &f) -> Json {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, IdentityDistortion>)
          return {{"family", "identity"}};
        else if constexpr (std::is_same_v<T, ProportionalHazard>)
          return {{"family", "proportional_hazard"}, {"c", f.c}};
        else if constexpr (std::is_same_v<T, DualPower>)
          return {{"family", "dual_power"}, {"k", f.k}};
        else
          return {{"family", "wang"}, {"lambda", f.lambda}};
      },
      g.family());
}

Json contract_to_json(const LossModel &loss, const DimlContract &c) {
  const auto sup = loss.essential_sup();
  const bool at_max = std::isinf(c.m) || (sup && c.m == *sup);
  Json j;
  j["d"] = c.d;
  j["m"] = at_max ? Json("max") : Json(c.m);
  return j;
}

DimlContract contract_from_json(const LossModel &loss, const Json &j) {
  expect_keys(j, "contract", {"d", "m"});
  const double d = number(j, "contract", "d");
  if (!j.contains("m"))
    fail("contract", "missing \"m\"");
  if (j.at("m").is_string()) {
    if (j.at("m").get<std::string>() != "max")
      fail("contract.m", "expected a number or \"max\"");
    return at_path("contract", [&] { return DimlContract::unlimited(loss, d); });
  }
  const double m = number(j, "contract", "m");
  return at_path("contract", [&] { return DimlContract::make(loss, d, m); });
}

Json to_json(const Solution &s, const LossModel &loss) {
  const auto c = contract_to_json(loss, s.contract);
  Json j;
  j["case"] = std::string(case_name(s.kind));
  j["d"] = c["d"];
  j["m"] = c["m"];
  j["premium"] = s.premium;
  j["ruin_prob"] = s.ruin_prob;
  j["theta_s"] = s.thresholds.theta_s;
  j["d_s"] = s.thresholds.d_s;
  j["w_s"] = s.thresholds.w_s;
  return j;
}

Json to_json(const PremiumQuote &q) {
  Json j;
  j["pi_I"] = q.pi_I;
  j["pi_R"] = q.pi_R;
  j["pi_X"] = q.pi_X;
  j["truncation_error_bound"] = q.truncation_error_bound;
  return j;
}

Json to_json(const verify::OracleReport &r, const LossModel &loss) {
  Json j;
  j["oracle"] = r.oracle;
  if (r.best_contract)
    j["best_contract"] = contract_to_json(loss, *r.best_contract);
  if (r.best_sample)
    j["best_sample"] = {{"index", r.best_sample->index},
                        {"forced", r.best_sample->forced},
                        {"premium", r.best_sample->premium},
                        {"premium_bound", r.best_sample->premium_bound}};
  j["best_ruin_prob"] = r.best_ruin_prob;
  j["solver_ruin_prob"] = r.solver_ruin_prob;
  j["gap"] = r.gap;
  j["tolerance"] = r.tolerance;
  j["samples_or_cells"] = r.samples_or_cells;
  if (r.oracle == "random_admissible")
    j["admissible"] = r.admissible;
  else {
    j["d_step"] = r.d_step;
    j["m_step"] = r.m_step;
  }
  j["seed"] = r.seed;
  j["passed"] = r.passed();
  return j;
}

Json to_json(const verify::MonteCarloResult &r) {
  Json j;
  j["estimate"] = r.estimate;
  j["std_err"] = r.std_err;
  j["paths"] = r.paths;
  j["ruined"] = r.ruined;
  j["seed"] = r.seed;
  return j;
}

Json to_json(const verify::DualityReport &r, const LossModel &loss) {
  Json j;
  j["alpha"] = r.alpha;
  j["min_var"] = r.min_var;
  j["gap"] = r.gap;
  j["tolerance"] = r.tolerance;
  j["argmin"] = contract_to_json(loss, r.argmin);
  j["passed"] = r.passed;
  return j;
}

} // namespace ruinopt::io
