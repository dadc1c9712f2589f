#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ruinopt {

/// Input rejected by a validator. `indices` lists the offending positions
/// when the input is a table or grid.
class ValidationError : public std::invalid_argument {
public:
  explicit ValidationError(const std::string &what,
                           std::vector<std::size_t> indices = {})
      : std::invalid_argument(what), indices_(std::move(indices)) {}

  const std::vector<std::size_t> &indices() const noexcept { return indices_; }

private:
  std::vector<std::size_t> indices_;
};

/// A quantity that is +infinity for an unbounded loss, e.g. the quantile at
/// probability zero.
class UnboundedError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// The distorted tail integral does not converge.
class PremiumNotFinite : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace ruinopt
