#pragma once

#include <stdexcept>
#include <string>

namespace marchuk {

/// Bad configuration or arguments: non-positive parameter, step too large
/// for the delays, odd quadrature count, degenerate coefficient.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A function was evaluated outside the set where it is defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The stability condition a11*a99 > a19*a91 fails; no certificate exists.
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(const std::string& what, double margin)
      : std::runtime_error(what), margin_(margin) {}
  double margin() const noexcept { return margin_; }

 private:
  double margin_;
};

/// Initial data lies outside the region where sqrt(V0) < 2*omega/q.
class BasinError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Signals a bug in this library rather than a property of the model.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace marchuk
