#pragma once

#include <stdexcept>
#include <string>

namespace ecsim {

enum class ErrorCode {
  kInvalidArgument,
  kInvalidPolicy,
  kInvalidInput,
  kInsufficientUnits,
  kCorruptStripe,
  kInvalidParams,
  kInvalidConfig,
  kInsufficientCluster,
  kUnknownBattery,
  kIo,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by config parsing; carries the key that was rejected.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what)
      : Error(ErrorCode::kInvalidConfig, what), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace ecsim
