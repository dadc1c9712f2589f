#include "cli.hpp"
#include "oracles.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = ruinopt::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / "ruinopt_cli_tests";
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write_config(const std::string &name, const std::string &text) {
  const auto p = scratch() / name;
  std::ofstream(p, std::ios::binary) << text;
  return p.string();
}

const fs::path kGolden = RUINOPT_GOLDEN_DIR;

std::string exp_config(double theta, double wealth) {
  ordered_json j;
  j["loss"] = {{"family", "exponential"}, {"rate", 1.0}};
  j["distortion"] = {{"family", "identity"}};
  j["theta"] = theta;
  j["wealth"] = wealth;
  return j.dump();
}

std::string atom_config(double theta, double wealth) {
  ordered_json j;
  j["loss"] = {{"family", "atom_scaled"},
               {"q", 0.5},
               {"inner", {{"family", "exponential"}, {"rate", 1.0}}}};
  j["distortion"] = {{"family", "identity"}};
  j["theta"] = theta;
  j["wealth"] = wealth;
  return j.dump();
}

std::vector<std::vector<std::string>> csv_rows(const std::string &text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ','))
      cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

} // namespace

TEST_CASE("solve: case (iii) document matches the golden file") {
  const auto cfg = write_config("case3.json", exp_config(0.25, 0.8));
  const auto r = run({"solve", cfg});
  CHECK(r.code == 0);
  CHECK(r.out == slurp(kGolden / "solve_case3.json"));
  const auto doc = ordered_json::parse(r.out);
  CHECK(doc["case"] == "positive_deductible");
  CHECK(doc["ruin_prob"].get<double>() == doctest::Approx(oracle::kRuinCase3).epsilon(1e-12));

  const auto csv = run({"solve", cfg, "--format", "csv"});
  CHECK(csv.code == 0);
  CHECK(csv.out == slurp(kGolden / "solve_case3.csv"));
}

TEST_CASE("solve: safe level") {
  const auto r = run({"solve", write_config("safe.json", exp_config(0.25, 2.0))});
  CHECK(r.code == 0);
  const auto doc = ordered_json::parse(r.out);
  CHECK(doc["case"] == "safe_level");
  CHECK(doc["ruin_prob"].get<double>() == 0.0);
  CHECK(doc["m"] == "max");
}

TEST_CASE("solve: --out writes the file") {
  const auto cfg = write_config("case3.json", exp_config(0.25, 0.8));
  const auto path = (scratch() / "solution.json").string();
  const auto r = run({"solve", cfg, "--out", path});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  CHECK(slurp(path) == slurp(kGolden / "solve_case3.json"));
}

TEST_CASE("config errors exit with 2") {
  const auto malformed = write_config("bad.json", "{\n  \"theta\": 0.25,\n  \"wealth\": ,\n}\n");
  auto r = run({"solve", malformed});
  CHECK(r.code == 2);
  CHECK(r.err.find("line 3, column 13") != std::string::npos);

  r = run({"solve", write_config("nan.json",
                                 R"({"loss":{"family":"exponential","rate":1},)"
                                 R"("distortion":{"family":"identity"},"theta":NaN,"wealth":1})")});
  CHECK(r.code == 2);

  r = run({"solve", write_config("extra.json",
                                 R"({"loss":{"family":"exponential","rate":1,"shape":2},)"
                                 R"("distortion":{"family":"identity"},"theta":0.1,"wealth":1})")});
  CHECK(r.code == 2);
  CHECK(r.err.find("loss") != std::string::npos);

  r = run({"solve", write_config("neg.json", exp_config(-0.5, 1.0))});
  CHECK(r.code == 2);

  r = run({"solve", write_config("broke.json", exp_config(0.5, 0.0))});
  CHECK(r.code == 2);

  r = run({"solve", write_config("pc.json",
                                 R"({"loss":{"family":"exponential","rate":1},)"
                                 R"("distortion":{"family":"proportional_hazard","c":1.5},)"
                                 R"("theta":0.1,"wealth":1})")});
  CHECK(r.code == 2);
  CHECK(r.err.find("distortion") != std::string::npos);

  CHECK(run({"solve", (scratch() / "missing.json").string()}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("divergent premium exits with 3") {
  const auto cfg = write_config("heavy.json",
                                R"({"loss":{"family":"pareto","shape":1.5,"scale":1},)"
                                R"("distortion":{"family":"proportional_hazard","c":0.5},)"
                                R"("theta":0.1,"wealth":1})");
  const auto r = run({"solve", cfg});
  CHECK(r.code == 3);
}

TEST_CASE("sweep over theta crosses theta_s on the atom market") {
  const auto cfg = write_config("atom.json", atom_config(0.0, 0.3));
  const auto r = run({"sweep", cfg, "--param", "theta", "--from", "0", "--to", "2", "--steps",
                      "41", "--format", "csv"});
  CHECK(r.code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 42);
  CHECK(rows[0] == std::vector<std::string>{"param", "case", "d", "m", "premium", "ruin_prob"});
  // theta_s = 1; d_s reaches w = 0.3 at theta = 2 e^0.3 - 1.
  const double theta_ii = 2.0 * std::exp(0.3) - 1.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double theta = std::stod(rows[i][0]);
    CAPTURE(theta);
    if (theta <= 1.0)
      CHECK(rows[i][1] == "zero_deductible");
    else if (theta <= theta_ii)
      CHECK(rows[i][1] == "positive_deductible");
    else
      CHECK(rows[i][1] == "no_insurance");
  }
  CHECK(rows[21][0] == "1");
  CHECK(rows[21][1] == "zero_deductible");
  CHECK(rows[22][1] == "positive_deductible");
}

TEST_CASE("sweep over wealth crosses d_s") {
  const auto cfg = write_config("case3.json", exp_config(0.25, 0.8));
  const auto r = run({"sweep", cfg, "--param", "wealth", "--from", "0.1", "--to", "1.5",
                      "--steps", "8", "--format", "csv"});
  CHECK(r.code == 0);
  CHECK(r.out == slurp(kGolden / "sweep_wealth.csv"));
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 9);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double w = std::stod(rows[i][0]);
    if (w <= oracle::kLn125)
      CHECK(rows[i][1] == "no_insurance");
    else if (w < oracle::kWs025)
      CHECK(rows[i][1] == "positive_deductible");
    else
      CHECK(rows[i][1] == "safe_level");
  }
}

TEST_CASE("sweep edge cases") {
  const auto cfg = write_config("case3.json", exp_config(0.25, 0.8));
  const auto two = run({"sweep", cfg, "--param", "wealth", "--from", "0.5", "--to", "0.9",
                        "--steps", "2"});
  CHECK(two.code == 0);
  CHECK(ordered_json::parse(two.out)["rows"].size() == 2);
  CHECK(run({"sweep", cfg, "--param", "wealth", "--from", "1", "--to", "0.5", "--steps", "4"})
            .code == 2);
  CHECK(run({"sweep", cfg, "--param", "wealth", "--from", "0.1", "--to", "0.5", "--steps", "1"})
            .code == 2);
  CHECK(run({"sweep", cfg, "--param", "gamma", "--from", "0.1", "--to", "0.5", "--steps", "3"})
            .code == 2);
}

TEST_CASE("premium command") {
  const auto cfg = write_config("case3.json", exp_config(0.25, 0.8));
  auto r = run({"premium", cfg, "--d", "0.5", "--m", "1.5"});
  CHECK(r.code == 0);
  CHECK(r.out == slurp(kGolden / "premium.json"));
  auto doc = ordered_json::parse(r.out);
  CHECK(doc["pi_I"].get<double>() == doctest::Approx(oracle::kPremium05to15).epsilon(1e-14));

  doc = ordered_json::parse(run({"premium", cfg, "--d", "0.7", "--m", "0.7"}).out);
  CHECK(doc["pi_I"].get<double>() == 0.0);

  doc = ordered_json::parse(run({"premium", cfg, "--d", "0", "--m", "max"}).out);
  CHECK(doc["pi_I"].get<double>() == doc["pi_X"].get<double>());
  CHECK(doc["contract"]["m"] == "max");

  CHECK(run({"premium", cfg, "--d", "2", "--m", "1"}).code == 2);
  CHECK(run({"premium", cfg, "--d", "x", "--m", "1"}).code == 2);
}

TEST_CASE("verify: exponential case (iii) passes and is thread-count invariant") {
  const auto cfg = write_config("case3.json", exp_config(0.25, 0.8));
  const auto a = run({"verify", cfg, "--threads", "1"});
  CHECK(a.code == 0);
  CHECK(a.out.rfind("PASS verify", 0) == 0);
  const auto b = run({"verify", cfg, "--threads", "3"});
  CHECK(a.out == b.out);

  const auto safe = run({"verify", write_config("safe.json", exp_config(0.25, 2.0))});
  CHECK(safe.code == 0);
  CHECK(safe.out.rfind("PASS verify", 0) == 0);
}

TEST_CASE("simulate: solver contract within 4 sigma, reproducible") {
  const auto cfg = write_config("case3.json", exp_config(0.25, 0.8));
  const auto a = run({"simulate", cfg, "--paths", "1000000", "--seed", "7"});
  CHECK(a.code == 0);
  const auto doc = ordered_json::parse(a.out);
  const double est = doc["estimate"].get<double>();
  const double sigma = doc["binomial_sigma"].get<double>();
  CHECK(std::abs(est - oracle::kRuinCase3) <= 4 * sigma);
  CHECK(doc["within_4_sigma"] == true);
  const auto b = run({"simulate", cfg, "--paths", "1000000", "--seed", "7", "--threads", "2"});
  CHECK(a.out == b.out);
  CHECK(run({"simulate", cfg, "--paths", "10"}).code == 2);
}
