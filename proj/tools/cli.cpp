#include "cli.hpp"

#include "ruinopt/io.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace ruinopt::cli {

namespace {

using io::Json;

struct Options {
  std::string config_path;
  std::string format = "json";
  std::string out_path;
  unsigned threads = 1;
  std::uint64_t seed = 7;

  std::string param;
  double from = 0.0, to = 0.0;
  std::size_t steps = 0;

  std::string d_text, m_text;

  std::size_t grid = 512;
  std::size_t samples = 10000;
  std::size_t cells = 1000;
  std::uint64_t paths = 1000000;
};

// Shortest round-trip decimal, identical on every platform.
std::string num(double x) {
  if (std::isinf(x))
    return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

std::string m_cell(const LossModel &loss, const DimlContract &c) {
  auto j = io::contract_to_json(loss, c);
  return j["m"].is_string() ? "max" : num(c.m);
}

io::RunConfig read_config(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw io::ConfigError(path + ": cannot open config");
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return io::parse_config(text.str());
  } catch (const io::ConfigError &e) {
    throw io::ConfigError(path + ": " + e.what());
  }
}

double contract_bound(const std::string &text, const char *name) {
  double x = 0.0;
  auto r = std::from_chars(text.data(), text.data() + text.size(), x);
  if (r.ec != std::errc() || r.ptr != text.data() + text.size() || !std::isfinite(x))
    throw io::ConfigError(std::string("--") + name + ": expected a finite number");
  return x;
}

DimlContract contract_from_flags(const LossModel &loss, const Options &o) {
  Json j;
  j["d"] = contract_bound(o.d_text, "d");
  if (o.m_text == "max")
    j["m"] = "max";
  else
    j["m"] = contract_bound(o.m_text, "m");
  return io::contract_from_json(loss, j);
}

std::string cmd_solve(const Options &o) {
  const auto cfg = read_config(o.config_path);
  const Market market = cfg.market();
  const auto s = solve(market, cfg.wealth);
  const auto doc = io::to_json(s, market.loss());
  if (o.format == "json")
    return doc.dump(2) + "\n";
  std::string csv = "case,d,m,premium,ruin_prob,theta_s,d_s,w_s\n";
  csv += std::string(case_name(s.kind)) + "," + num(s.contract.d) + "," +
         m_cell(market.loss(), s.contract) + "," + num(s.premium) + "," + num(s.ruin_prob) +
         "," + num(s.thresholds.theta_s) + "," + num(s.thresholds.d_s) + "," +
         num(s.thresholds.w_s) + "\n";
  return csv;
}

std::string cmd_sweep(const Options &o) {
  const auto cfg = read_config(o.config_path);
  if (!(o.from < o.to))
    throw io::ConfigError("sweep: --from must be < --to");
  if (o.steps < 2)
    throw io::ConfigError("sweep: --steps must be >= 2");
  if (o.param == "theta" && o.from < 0.0)
    throw io::ConfigError("sweep: theta must be >= 0");
  if (o.param == "wealth" && o.from <= 0.0)
    throw io::ConfigError("sweep: wealth must be > 0");

  const LossModel loss = io::loss_from_json(cfg.loss);
  const Distortion g = io::distortion_from_json(cfg.distortion);
  std::optional<Market> fixed;
  if (o.param == "wealth")
    fixed.emplace(loss, g, cfg.theta);

  Json rows = Json::array();
  std::string csv = "param,case,d,m,premium,ruin_prob\n";
  for (std::size_t i = 0; i < o.steps; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(o.steps - 1);
    const double x = i + 1 == o.steps ? o.to : o.from + (o.to - o.from) * t;
    const Market market = fixed ? *fixed : Market(loss, g, x);
    const double w = fixed ? x : cfg.wealth;
    const auto s = solve(market, w);
    const auto c = io::contract_to_json(loss, s.contract);
    Json row;
    row["param"] = x;
    row["case"] = std::string(case_name(s.kind));
    row["d"] = c["d"];
    row["m"] = c["m"];
    row["premium"] = s.premium;
    row["ruin_prob"] = s.ruin_prob;
    rows.push_back(row);
    csv += num(x) + "," + std::string(case_name(s.kind)) + "," + num(s.contract.d) + "," +
           m_cell(loss, s.contract) + "," + num(s.premium) + "," + num(s.ruin_prob) + "\n";
  }
  if (o.format == "csv")
    return csv;
  Json doc;
  doc["param"] = o.param;
  doc["rows"] = rows;
  return doc.dump(2) + "\n";
}

std::string cmd_premium(const Options &o) {
  const auto cfg = read_config(o.config_path);
  const Market market = cfg.market();
  const auto c = contract_from_flags(market.loss(), o);
  const auto q = premium_diml(market, c.d, c.m);
  if (o.format == "json") {
    Json doc;
    doc["contract"] = io::contract_to_json(market.loss(), c);
    const auto quote = io::to_json(q);
    for (const auto &item : quote.items())
      doc[item.key()] = item.value();
    return doc.dump(2) + "\n";
  }
  return "d,m,pi_I,pi_R,pi_X,truncation_error_bound\n" + num(c.d) + "," +
         m_cell(market.loss(), c) + "," + num(q.pi_I) + "," + num(q.pi_R) + "," +
         num(q.pi_X) + "," + num(q.truncation_error_bound) + "\n";
}

struct Verdict {
  std::string text;
  bool passed = true;
};

Verdict cmd_simulate(const Options &o) {
  const auto cfg = read_config(o.config_path);
  const Market market = cfg.market();
  const bool explicit_contract = !o.d_text.empty() || !o.m_text.empty();
  if (explicit_contract && (o.d_text.empty() || o.m_text.empty()))
    throw io::ConfigError("simulate: --d and --m go together");
  const DimlContract c =
      explicit_contract ? contract_from_flags(market.loss(), o) : solve(market, cfg.wealth).contract;
  const double analytic = ruin_probability(market, c, cfg.wealth);
  const auto mc = verify::monte_carlo_ruin(market, c, cfg.wealth, o.paths, o.seed, o.threads);

  const double n = static_cast<double>(mc.paths);
  const double sigma = std::sqrt(analytic * (1.0 - analytic) / n);
  const double diff = mc.estimate - analytic;
  const bool ok = sigma > 0.0 ? std::abs(diff) <= 4.0 * sigma : mc.ruined == 0 || analytic == 1.0;

  Json doc;
  doc["contract"] = io::contract_to_json(market.loss(), c);
  doc["analytic_ruin_prob"] = analytic;
  const auto counts = io::to_json(mc);
  for (const auto &item : counts.items())
    doc[item.key()] = item.value();
  doc["binomial_sigma"] = sigma;
  doc["within_4_sigma"] = ok;
  if (o.format == "json")
    return {doc.dump(2) + "\n", ok};
  return {"d,m,analytic_ruin_prob,estimate,std_err,paths,ruined,seed,within_4_sigma\n" +
              num(c.d) + "," + m_cell(market.loss(), c) + "," + num(analytic) + "," +
              num(mc.estimate) + "," + num(mc.std_err) + "," + std::to_string(mc.paths) + "," +
              std::to_string(mc.ruined) + "," + std::to_string(mc.seed) + "," +
              (ok ? "true" : "false") + "\n",
          ok};
}

Verdict cmd_verify(const Options &o, std::string &status) {
  const auto cfg = read_config(o.config_path);
  const Market market = cfg.market();
  const auto s = solve(market, cfg.wealth);

  Json doc;
  doc["solution"] = io::to_json(s, market.loss());
  std::vector<verify::OracleReport> reports;
  if (s.kind != SolutionCase::SafeLevel) {
    reports.push_back(verify::grid_oracle(market, cfg.wealth, o.grid, o.grid, o.threads));
    reports.push_back(verify::random_admissible_oracle(market, cfg.wealth, o.samples, o.cells,
                                                       o.seed, o.threads));
  }
  bool ok = true;
  Json oracles = Json::array();
  for (const auto &r : reports) {
    ok = ok && r.passed();
    oracles.push_back(io::to_json(r, market.loss()));
  }
  doc["oracles"] = oracles;
  doc["passed"] = ok;

  status = ok ? "PASS" : "FAIL";
  status += " verify case=" + std::string(case_name(s.kind));
  if (reports.empty())
    status += " ruin_prob=0 (safe level, nothing to undercut)";
  for (const auto &r : reports)
    status += " " + r.oracle + "_gap=" + num(r.gap) + "/" + num(r.tolerance);
  status += "\n";

  if (o.format == "json")
    return {doc.dump(2) + "\n", ok};
  std::string csv = "oracle,best_ruin_prob,solver_ruin_prob,gap,tolerance,passed\n";
  for (const auto &r : reports)
    csv += r.oracle + "," + num(r.best_ruin_prob) + "," + num(r.solver_ruin_prob) + "," +
           num(r.gap) + "," + num(r.tolerance) + "," + (r.passed() ? "true" : "false") + "\n";
  return {csv, ok};
}

void emit(const Options &o, const std::string &text, std::ostream &out) {
  if (o.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(o.out_path, std::ios::binary);
  if (!file)
    throw io::ConfigError(o.out_path + ": cannot open for writing");
  file << text;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  Options o;
  CLI::App app{"Ruin-minimising deductible-with-limit insurance contracts", "ruinopt"};
  app.require_subcommand(1);

  auto common = [&](CLI::App *sub) {
    sub->add_option("config", o.config_path, "JSON market config")->required();
    sub->add_option("--format", o.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    sub->add_option("--out", o.out_path, "write the result here instead of stdout");
  };
  auto parallel = [&](CLI::App *sub) {
    sub->add_option("--threads", o.threads, "worker threads")
        ->check(CLI::Range(1u, 1024u))
        ->capture_default_str();
    sub->add_option("--seed", o.seed, "random seed")->capture_default_str();
  };

  auto *solve_cmd = app.add_subcommand("solve", "optimal contract for the config");
  common(solve_cmd);

  auto *sweep_cmd = app.add_subcommand("sweep", "solve over a range of theta or wealth");
  common(sweep_cmd);
  sweep_cmd->add_option("--param", o.param)->required()->check(CLI::IsMember({"theta", "wealth"}));
  sweep_cmd->add_option("--from", o.from)->required();
  sweep_cmd->add_option("--to", o.to)->required();
  sweep_cmd->add_option("--steps", o.steps)->required();

  auto *premium_cmd = app.add_subcommand("premium", "price a contract (d, m)");
  common(premium_cmd);
  premium_cmd->add_option("--d", o.d_text, "deductible")->required();
  premium_cmd->add_option("--m", o.m_text, "limit, or 'max'")->required();

  auto *simulate_cmd = app.add_subcommand("simulate", "Monte Carlo ruin frequency");
  common(simulate_cmd);
  parallel(simulate_cmd);
  simulate_cmd->add_option("--paths", o.paths)
      ->check(CLI::Range(std::uint64_t{10000}, std::uint64_t{1} << 40))
      ->capture_default_str();
  simulate_cmd->add_option("--d", o.d_text, "deductible (default: solver's)");
  simulate_cmd->add_option("--m", o.m_text, "limit, or 'max' (default: solver's)");

  auto *verify_cmd = app.add_subcommand("verify", "check the solver against brute-force oracles");
  common(verify_cmd);
  parallel(verify_cmd);
  verify_cmd->add_option("--grid", o.grid, "DIML grid nodes per axis")
      ->check(CLI::Range(std::size_t{16}, std::size_t{1} << 16))
      ->capture_default_str();
  verify_cmd->add_option("--samples", o.samples, "random admissible contracts")
      ->capture_default_str();
  verify_cmd->add_option("--cells", o.cells, "quantile cells per random contract")
      ->check(CLI::Range(std::size_t{256}, std::size_t{1} << 24))
      ->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    Verdict v;
    if (solve_cmd->parsed())
      v.text = cmd_solve(o);
    else if (sweep_cmd->parsed())
      v.text = cmd_sweep(o);
    else if (premium_cmd->parsed())
      v.text = cmd_premium(o);
    else if (simulate_cmd->parsed())
      v = cmd_simulate(o);
    else {
      std::string status;
      v = cmd_verify(o, status);
      out << status;
    }
    emit(o, v.text, out);
    return v.passed ? kOk : kVerificationFailed;
  } catch (const ValidationError &e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception &e) {
    err << "numeric error: " << e.what() << "\n";
    return kNumericError;
  }
}

} // namespace ruinopt::cli
