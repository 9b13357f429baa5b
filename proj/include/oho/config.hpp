#ifndef OHO_CONFIG_HPP
#define OHO_CONFIG_HPP

#include <string>

#include "oho/harness.hpp"

namespace oho {

// Strict schema: unknown keys are rejected, every error names the field.
// The full schema with defaults is documented in the README. Throws
// ConfigError for malformed JSON or schema violations.
RunConfig parse_run_config(const std::string& json_text);

// Reads and parses a config file. IoError if the file is unreadable.
RunConfig load_run_config(const std::string& path);

}  // namespace oho

#endif  // OHO_CONFIG_HPP
