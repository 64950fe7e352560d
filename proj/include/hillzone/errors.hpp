#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

namespace hillzone {

/// Base of every error raised by the library. `payload()` is what the CLI
/// serializes when a run fails.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message);

  const std::string& kind() const noexcept { return kind_; }
  virtual nlohmann::json payload() const;

 private:
  std::string kind_;
};

class InvalidPotential : public Error {
 public:
  explicit InvalidPotential(const std::string& message);
};

class BandwidthExceeded : public Error {
 public:
  BandwidthExceeded(int requested, int available);
  int requested() const noexcept { return requested_; }
  int available() const noexcept { return available_; }
  nlohmann::json payload() const override;

 private:
  int requested_;
  int available_;
};

class IntegrationFailure : public Error {
 public:
  IntegrationFailure(const std::string& message, double last_x);
  double last_x() const noexcept { return last_x_; }
  nlohmann::json payload() const override;

 private:
  double last_x_;
};

class NumberingAmbiguity : public Error {
 public:
  NumberingAmbiguity(int n, double t, const std::string& detail);
  int index() const noexcept { return n_; }
  double t() const noexcept { return t_; }
  nlohmann::json payload() const override;

 private:
  int n_;
  double t_;
};

class CoalescenceNotFound : public Error {
 public:
  explicit CoalescenceNotFound(int n);
  int index() const noexcept { return n_; }
  nlohmann::json payload() const override;

 private:
  int n_;
};

class ContourFailure : public Error {
 public:
  explicit ContourFailure(const std::string& message);
};

class NumericsError : public Error {
 public:
  explicit NumericsError(const std::string& message);
};

class JumpDeclarationRequired : public Error {
 public:
  explicit JumpDeclarationRequired(const std::string& message);
};

/// Malformed potential file or command-line configuration. `line` is 1-based,
/// 0 when unknown.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& message, std::string key, int line);
  const std::string& key() const noexcept { return key_; }
  int line() const noexcept { return line_; }
  nlohmann::json payload() const override;

 private:
  std::string key_;
  int line_;
};

}  // namespace hillzone
