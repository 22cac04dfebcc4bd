#pragma once

#include <istream>
#include <map>
#include <string>
#include <string_view>

#include "eit/model.hpp"

namespace eit {

/// One `key = value` assignment with its 1-based source line.
struct ConfigEntry {
  std::string value;
  int line = 0;
};

using ConfigEntries = std::map<std::string, ConfigEntry, std::less<>>;

/// Parses `key = value` lines; `#` starts a comment, blank lines are skipped.
/// Keys must be LambdaParams or FieldSchedule field names. Throws
/// Error{ParseError} naming the line for malformed lines, unknown or repeated
/// keys.
ConfigEntries parse_config(std::istream& in);
ConfigEntries parse_config_file(const std::string& path);

bool is_config_key(std::string_view key);

/// Writes the entries onto params/schedule. Numeric fields must parse
/// completely; `mode` takes a SwitchMode name.
void apply_config(const ConfigEntries& entries, LambdaParams& params, FieldSchedule& schedule);

}  // namespace eit
