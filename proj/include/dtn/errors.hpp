#pragma once

#include <stdexcept>
#include <string>

namespace dtn {

// Bad config file / bad campaign file / unknown keys. CLI maps this to exit code 1.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Feature-schema or model-file incompatibility.
struct SchemaError : std::runtime_error {
  explicit SchemaError(const std::string& msg) : std::runtime_error(msg) {}
};

// Engine contract violations (mis-sized cooldown, double tick, non-finite loss, ...).
// CLI maps this (and anything else) to exit code 2.
struct SimError : std::runtime_error {
  explicit SimError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace dtn
