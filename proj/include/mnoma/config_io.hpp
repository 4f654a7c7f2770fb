#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mnoma/experiments.hpp"

namespace mnoma {

/// Result of reading a configuration: the sweep description and the keys the
/// user set explicitly (file or overrides), so callers can tell a default
/// apart from a deliberate choice.
struct ParsedConfig {
    SweepSpec spec;
    std::set<std::string> explicit_keys;

    bool has(const std::string& key) const { return explicit_keys.count(key) != 0; }
};

/// Flat `key = value` text, one pair per line, `#` starts a comment. List
/// values are comma separated, or written as an inclusive range
/// `start:step:stop`. Overrides use the same `key=value` form and are
/// applied after the file. Errors carry the line number (or the override
/// text) and the key name.
ParsedConfig parse_config(std::istream& in, const std::vector<std::string>& overrides = {});

/// Reads `path` when given; otherwise starts from defaults.
ParsedConfig parse_config_file(const std::optional<std::filesystem::path>& path,
                               const std::vector<std::string>& overrides = {});

/// Applies one `key=value` assignment. Throws ConfigError.
void apply_setting(SweepSpec& spec, const std::string& key, const std::string& value);

/// Every key accepted by apply_setting, in output order.
const std::vector<std::string>& config_keys();

/// Serialises `spec` in the same format, so that the text parses back to an
/// identical spec.
std::string to_config_text(const SweepSpec& spec);

}  // namespace mnoma
