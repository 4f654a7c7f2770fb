#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mnoma {

/// Raised when a configuration value violates a field invariant or cannot be
/// parsed. The message names the offending field (and line, when read from a
/// file).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

double db_to_linear(double db);
double linear_to_db(double linear);

/// Physical and experiment parameters shared by every simulation.
///
/// Defaults describe a 3x3 downlink over 10 MHz with path loss
/// 114 + 38 log10(d[km]). Users are dropped uniformly in distance over
/// [cell_radius_min_km, cell_radius_max_km].
struct SystemConfig {
    int tx_antennas = 3;         // M
    int rx_antennas = 3;         // N, must be >= M
    int users_per_cluster = 2;   // L
    double bandwidth_hz = 10e6;
    double noise_density_dbm_hz = -174.0;
    double pathloss_fixed_db = 114.0;
    double pathloss_slope = 38.0;  // dB per decade of km
    double tx_power_dbm = 35.0;
    double cell_radius_min_km = 0.2;
    double cell_radius_max_km = 2.5;
    std::uint64_t rng_seed = 1;

    /// Throws ConfigError naming the first field that violates its invariant.
    void validate() const;

    double noise_power_dbm() const;
    double pathloss_db(double distance_km) const;

    /// Transmit power over noise power, both linear.
    double rho() const;
    double rho_at(double tx_power_dbm) const;
};

}  // namespace mnoma
