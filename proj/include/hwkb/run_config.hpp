#pragma once

#include <filesystem>
#include <string>

#include "hwkb/convergence_harness.hpp"

namespace hwkb {

struct RunConfig {
  SweepConfig sweep;
  std::string echo;  ///< the parsed document, re-serialized
};

/// Parses and validates a JSON run configuration. Every failure is a ConfigError
/// naming the key or rule involved.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace hwkb
