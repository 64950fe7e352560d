#include "hillzone/errors.hpp"

#include <json.hpp>

namespace hillzone {

Error::Error(std::string kind, const std::string& message)
    : std::runtime_error(message), kind_(std::move(kind)) {}

nlohmann::json Error::payload() const {
  return {{"error", kind_}, {"message", what()}};
}

InvalidPotential::InvalidPotential(const std::string& message)
    : Error("InvalidPotential", message) {}

BandwidthExceeded::BandwidthExceeded(int requested, int available)
    : Error("BandwidthExceeded", "Fourier index " + std::to_string(requested) +
                                     " exceeds resolvable bandwidth " +
                                     std::to_string(available)),
      requested_(requested),
      available_(available) {}

nlohmann::json BandwidthExceeded::payload() const {
  auto j = Error::payload();
  j["requested"] = requested_;
  j["available"] = available_;
  return j;
}

IntegrationFailure::IntegrationFailure(const std::string& message, double last_x)
    : Error("IntegrationFailure", message), last_x_(last_x) {}

nlohmann::json IntegrationFailure::payload() const {
  auto j = Error::payload();
  j["last_x"] = last_x_;
  return j;
}

NumberingAmbiguity::NumberingAmbiguity(int n, double t, const std::string& detail)
    : Error("NumberingAmbiguity", "cannot number eigenvalue n=" + std::to_string(n) +
                                      " at t=" + std::to_string(t) + ": " + detail),
      n_(n),
      t_(t) {}

nlohmann::json NumberingAmbiguity::payload() const {
  auto j = Error::payload();
  j["n"] = n_;
  j["t"] = t_;
  return j;
}

CoalescenceNotFound::CoalescenceNotFound(int n)
    : Error("CoalescenceNotFound",
            "bisection for the reality boundary of band " + std::to_string(n) +
                " did not converge"),
      n_(n) {}

nlohmann::json CoalescenceNotFound::payload() const {
  auto j = Error::payload();
  j["n"] = n_;
  return j;
}

ContourFailure::ContourFailure(const std::string& message)
    : Error("ContourFailure", message) {}

NumericsError::NumericsError(const std::string& message) : Error("NumericsError", message) {}

JumpDeclarationRequired::JumpDeclarationRequired(const std::string& message)
    : Error("JumpDeclarationRequired", message) {}

ConfigError::ConfigError(const std::string& message, std::string key, int line)
    : Error("ConfigError",
            (line > 0 ? "line " + std::to_string(line) + ": " : std::string{}) +
                (key.empty() ? std::string{} : "key '" + key + "': ") + message),
      key_(std::move(key)),
      line_(line) {}

nlohmann::json ConfigError::payload() const {
  auto j = Error::payload();
  j["key"] = key_;
  j["line"] = line_;
  return j;
}

}  // namespace hillzone
