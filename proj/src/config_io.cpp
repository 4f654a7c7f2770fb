#include "mnoma/config_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

namespace mnoma {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::string format_double(double x) {
    std::array<char, 32> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), end);
}

double parse_double(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    double x = 0.0;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    if (!t.empty() && *first == '+') {
        ++first;
    }
    auto [ptr, ec] = std::from_chars(first, last, x);
    if (t.empty() || ec != std::errc() || ptr != last || !std::isfinite(x)) {
        throw ConfigError(key + ": expected a number, got '" + t + "'");
    }
    return x;
}

long long parse_integer(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    long long x = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
        throw ConfigError(key + ": expected an integer, got '" + t + "'");
    }
    return x;
}

int parse_int(const std::string& key, const std::string& text) {
    const long long x = parse_integer(key, text);
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
        throw ConfigError(key + ": integer out of range");
    }
    return static_cast<int>(x);
}

std::uint64_t parse_u64(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    std::uint64_t x = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
        throw ConfigError(key + ": expected a non-negative integer, got '" + t + "'");
    }
    return x;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) {
        return {};
    }
    if (t.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(t);
        for (std::string part; std::getline(ss, part, ':');) {
            parts.push_back(part);
        }
        if (parts.size() != 3) {
            throw ConfigError(key + ": range must read start:step:stop");
        }
        const double start = parse_double(key, parts[0]);
        const double step = parse_double(key, parts[1]);
        const double stop = parse_double(key, parts[2]);
        if (!(step > 0.0) || stop < start) {
            throw ConfigError(key + ": range needs step > 0 and stop >= start");
        }
        const double span = (stop - start) / step;
        if (span > 1e6) {
            throw ConfigError(key + ": range has too many points");
        }
        const auto n = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
        std::vector<double> out(n);
        for (std::size_t i = 0; i < n; ++i) {
            // Snap to a short decimal so 0.07 prints as 0.07, not 0.07000000000000001.
            const double raw = start + static_cast<double>(i) * step;
            out[i] = std::round(raw * 1e12) / 1e12;
        }
        return out;
    }
    std::vector<double> out;
    std::stringstream ss(t);
    for (std::string part; std::getline(ss, part, ',');) {
        out.push_back(parse_double(key, part));
    }
    return out;
}

std::string format_list(const std::vector<double>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        out += (i ? "," : "") + format_double(xs[i]);
    }
    return out;
}

struct Field {
    std::string name;
    std::function<void(SweepSpec&, const std::string&, const std::string&)> set;
    std::function<std::string(const SweepSpec&)> get;
};

#define MNOMA_DOUBLE(name, member)                                                          \
    Field {                                                                                 \
        name, [](SweepSpec& s, const std::string& k, const std::string& v) {                \
            s.member = parse_double(k, v);                                                  \
        },                                                                                  \
            [](const SweepSpec& s) { return format_double(s.member); }                      \
    }
#define MNOMA_INT(name, member)                                                             \
    Field {                                                                                 \
        name, [](SweepSpec& s, const std::string& k, const std::string& v) {                \
            s.member = parse_int(k, v);                                                     \
        },                                                                                  \
            [](const SweepSpec& s) { return std::to_string(s.member); }                     \
    }
#define MNOMA_LIST(name, member)                                                            \
    Field {                                                                                 \
        name, [](SweepSpec& s, const std::string& k, const std::string& v) {                \
            s.member = parse_list(k, v);                                                    \
        },                                                                                  \
            [](const SweepSpec& s) { return format_list(s.member); }                        \
    }

const std::vector<Field>& fields() {
    static const std::vector<Field> table{
        Field{"kind",
              [](SweepSpec& s, const std::string& k, const std::string& v) {
                  const auto kind = parse_sweep_kind(trim(v));
                  if (!kind) {
                      throw ConfigError(k + ": unknown sweep kind '" + trim(v) + "'");
                  }
                  s.kind = *kind;
              },
              [](const SweepSpec& s) { return std::string(to_string(s.kind)); }},
        MNOMA_INT("tx_antennas", config.tx_antennas),
        MNOMA_INT("rx_antennas", config.rx_antennas),
        MNOMA_INT("users_per_cluster", config.users_per_cluster),
        MNOMA_DOUBLE("bandwidth_hz", config.bandwidth_hz),
        MNOMA_DOUBLE("noise_density_dbm_hz", config.noise_density_dbm_hz),
        MNOMA_DOUBLE("pathloss_fixed_db", config.pathloss_fixed_db),
        MNOMA_DOUBLE("pathloss_slope", config.pathloss_slope),
        MNOMA_DOUBLE("tx_power_dbm", config.tx_power_dbm),
        MNOMA_DOUBLE("cell_radius_min_km", config.cell_radius_min_km),
        MNOMA_DOUBLE("cell_radius_max_km", config.cell_radius_max_km),
        Field{"rng_seed",
              [](SweepSpec& s, const std::string& k, const std::string& v) {
                  s.config.rng_seed = parse_u64(k, v);
              },
              [](const SweepSpec& s) { return std::to_string(s.config.rng_seed); }},
        MNOMA_INT("trials", trials),
        MNOMA_INT("cluster_index", cluster_index),
        MNOMA_LIST("grid", grid),
        MNOMA_LIST("grid2", grid2),
        MNOMA_DOUBLE("omega1", omega1),
        MNOMA_DOUBLE("theta_last", theta_last),
        MNOMA_LIST("power_levels_dbm", power_levels_dbm),
        MNOMA_LIST("sinr_levels_db", sinr_levels_db),
        MNOMA_LIST("mixed_sinr_db", mixed_sinr_db),
        MNOMA_INT("requesting_users", requesting_users),
        Field{"exhaustive_cap",
              [](SweepSpec& s, const std::string& k, const std::string& v) {
                  s.exhaustive_cap = static_cast<std::size_t>(parse_u64(k, v));
              },
              [](const SweepSpec& s) { return std::to_string(s.exhaustive_cap); }},
        Field{"workers",
              [](SweepSpec& s, const std::string& k, const std::string& v) {
                  const std::uint64_t w = parse_u64(k, v);
                  if (w < 1 || w > 1024) {
                      throw ConfigError(k + ": must lie in [1, 1024]");
                  }
                  s.workers = static_cast<unsigned>(w);
              },
              [](const SweepSpec& s) { return std::to_string(s.workers); }},
    };
    return table;
}

#undef MNOMA_DOUBLE
#undef MNOMA_INT
#undef MNOMA_LIST

// Splits `key = value`; returns false for blank or comment-only lines.
bool split_line(const std::string& raw, std::string& key, std::string& value) {
    std::string line = raw;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
        line.erase(hash);
    }
    if (trim(line).empty()) {
        return false;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
        throw ConfigError("expected key = value");
    }
    key = trim(line.substr(0, eq));
    value = trim(line.substr(eq + 1));
    if (key.empty()) {
        throw ConfigError("missing key before '='");
    }
    return true;
}

}  // namespace

void apply_setting(SweepSpec& spec, const std::string& key, const std::string& value) {
    for (const auto& f : fields()) {
        if (f.name == key) {
            f.set(spec, key, value);
            return;
        }
    }
    throw ConfigError("unknown key '" + key + "'");
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> out;
        for (const auto& f : fields()) {
            out.push_back(f.name);
        }
        return out;
    }();
    return keys;
}

ParsedConfig parse_config(std::istream& in, const std::vector<std::string>& overrides) {
    ParsedConfig parsed;
    std::string raw;
    for (std::size_t line_no = 1; std::getline(in, raw); ++line_no) {
        try {
            std::string key;
            std::string value;
            if (!split_line(raw, key, value)) {
                continue;
            }
            apply_setting(parsed.spec, key, value);
            parsed.explicit_keys.insert(key);
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    for (const auto& o : overrides) {
        try {
            std::string key;
            std::string value;
            if (!split_line(o, key, value)) {
                throw ConfigError("empty assignment");
            }
            apply_setting(parsed.spec, key, value);
            parsed.explicit_keys.insert(key);
        } catch (const ConfigError& e) {
            throw ConfigError("override '" + o + "': " + e.what());
        }
    }
    parsed.spec.config.validate();
    return parsed;
}

ParsedConfig parse_config_file(const std::optional<std::filesystem::path>& path,
                               const std::vector<std::string>& overrides) {
    if (!path) {
        std::istringstream empty;
        return parse_config(empty, overrides);
    }
    std::ifstream in(*path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path->string() + "'");
    }
    return parse_config(in, overrides);
}

std::string to_config_text(const SweepSpec& spec) {
    std::string out;
    for (const auto& f : fields()) {
        out += f.name + " = " + f.get(spec) + "\n";
    }
    return out;
}

}  // namespace mnoma
