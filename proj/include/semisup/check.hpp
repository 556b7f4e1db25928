#pragma once

#include <stdexcept>
#include <string>

namespace semisup {

// Contract violations and bad configurations throw; the CLI maps them to
// exit codes (config -> 2, runtime -> 1).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ContractError : std::logic_error {
  explicit ContractError(const std::string& msg) : std::logic_error(msg) {}
};

struct IngestError : std::runtime_error {
  explicit IngestError(const std::string& msg) : std::runtime_error(msg) {}
};

inline void check(bool cond, const std::string& msg) {
  if (!cond) throw ContractError(msg);
}

inline void check_config(bool cond, const std::string& msg) {
  if (!cond) throw ConfigError(msg);
}

}  // namespace semisup
