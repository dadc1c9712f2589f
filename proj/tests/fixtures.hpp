#pragma once

#include "ruinopt/premium.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace fixtures {

using ruinopt::Distortion;
using ruinopt::LossModel;

// Exponential(1) tabulated at p = 0.9 ... 0.001.
inline LossModel empirical_exponential() {
  std::vector<ruinopt::QuantilePoint> table;
  for (double p : {0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1, 0.05, 0.01, 0.005, 0.001})
    table.push_back({p, -std::log(p)});
  return ruinopt::load_empirical(table);
}

struct NamedLoss {
  std::string name;
  LossModel loss;
};

inline std::vector<NamedLoss> losses() {
  return {
      {"exponential(1)", LossModel::exponential(1.0)},
      {"pareto(3,2)", LossModel::pareto(3.0, 2.0)},
      {"uniform(2)", LossModel::uniform(2.0)},
      {"lognormal(0,0.5)", LossModel::lognormal(0.0, 0.5)},
      {"atom(0.5,exp(1))", LossModel::atom_scaled(0.5, LossModel::exponential(1.0))},
      {"empirical(exp)", empirical_exponential()},
  };
}

inline std::vector<Distortion> distortions() {
  return {Distortion::identity(), Distortion::proportional_hazard(0.5),
          Distortion::dual_power(2.0), Distortion::wang(0.3)};
}

inline bool close_rel(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

} // namespace fixtures
