#pragma once

#include <stdexcept>
#include <string>

namespace aud {

/// Invalid system or run configuration: unstable queue, non-positive rate,
/// unknown law name, malformed sweep grid.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the set on which a quantity is defined (MGF divergence,
/// non-positive mean inter-departure time).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Evaluation landed on a numerically singular point.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Formula requested for a system it does not describe, e.g. a
/// periodic-decision result on a Poisson-decision system.
class WrongOperationError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace aud
