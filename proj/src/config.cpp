#include "eit/config.hpp"

#include <array>
#include <charconv>
#include <fstream>

#include "eit/error.hpp"

namespace eit {
namespace {

constexpr std::array<std::string_view, 11> kKeys = {
    "omega1",   "omega2",   "delta1",   "delta2",        "gamma_ca",  "gamma_cb",
    "gamma_ba", "uncoupled_fraction", "mode", "switch_time", "omega1_on",
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, const ConfigEntry& entry) {
  const std::string_view text = entry.value;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(entry.line) + ": '" + key +
                                           "' expects a number, got '" + entry.value + "'");
  }
  return value;
}

}  // namespace

bool is_config_key(std::string_view key) {
  for (auto k : kKeys) {
    if (k == key) return true;
  }
  return false;
}

ConfigEntries parse_config(std::istream& in) {
  ConfigEntries entries;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view text = raw;
    if (const auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
    text = trim(text);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": expected 'key = value'");
    }
    const std::string key(trim(text.substr(0, eq)));
    const std::string value(trim(text.substr(eq + 1)));
    if (key.empty() || value.empty()) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": empty key or value");
    }
    if (!is_config_key(key)) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": unknown key '" + key + "'");
    }
    if (!entries.emplace(key, ConfigEntry{value, line}).second) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": duplicate key '" + key + "'");
    }
  }
  return entries;
}

ConfigEntries parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config '" + path + "'");
  return parse_config(in);
}

void apply_config(const ConfigEntries& entries, LambdaParams& params, FieldSchedule& schedule) {
  for (const auto& [key, entry] : entries) {
    if (key == "mode") {
      try {
        schedule.mode = parse_switch_mode(entry.value);
      } catch (const Error&) {
        throw Error(ErrorCode::ParseError,
                    "line " + std::to_string(entry.line) + ": unknown mode '" + entry.value + "'");
      }
      continue;
    }
    const double v = to_double(key, entry);
    if (key == "omega1") params.omega1 = v;
    else if (key == "omega2") params.omega2 = v;
    else if (key == "delta1") params.delta1 = v;
    else if (key == "delta2") params.delta2 = v;
    else if (key == "gamma_ca") params.gamma_ca = v;
    else if (key == "gamma_cb") params.gamma_cb = v;
    else if (key == "gamma_ba") params.gamma_ba = v;
    else if (key == "uncoupled_fraction") params.uncoupled_fraction = v;
    else if (key == "switch_time") schedule.switch_time = v;
    else if (key == "omega1_on") schedule.omega1_on = v;
  }
}

}  // namespace eit
