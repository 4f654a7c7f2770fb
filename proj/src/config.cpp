#include "mnoma/config.hpp"

#include <cmath>

namespace mnoma {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

void SystemConfig::validate() const {
    if (tx_antennas < 1) {
        throw ConfigError("tx_antennas: must be a positive integer");
    }
    if (rx_antennas < 1) {
        throw ConfigError("rx_antennas: must be a positive integer");
    }
    if (rx_antennas < tx_antennas) {
        throw ConfigError("rx_antennas: must be >= tx_antennas for zero-forcing detection");
    }
    if (users_per_cluster < 2) {
        throw ConfigError("users_per_cluster: must be >= 2");
    }
    if (!(bandwidth_hz > 0.0) || !std::isfinite(bandwidth_hz)) {
        throw ConfigError("bandwidth_hz: must be positive");
    }
    if (!std::isfinite(noise_density_dbm_hz)) {
        throw ConfigError("noise_density_dbm_hz: must be finite");
    }
    if (!std::isfinite(pathloss_fixed_db)) {
        throw ConfigError("pathloss_fixed_db: must be finite");
    }
    if (!std::isfinite(pathloss_slope)) {
        throw ConfigError("pathloss_slope: must be finite");
    }
    if (!std::isfinite(tx_power_dbm)) {
        throw ConfigError("tx_power_dbm: must be finite");
    }
    if (!(cell_radius_min_km > 0.0)) {
        throw ConfigError("cell_radius_min_km: must be positive");
    }
    if (!(cell_radius_max_km > cell_radius_min_km) || !std::isfinite(cell_radius_max_km)) {
        throw ConfigError("cell_radius_max_km: must be finite and greater than cell_radius_min_km");
    }
}

double SystemConfig::noise_power_dbm() const {
    return noise_density_dbm_hz + 10.0 * std::log10(bandwidth_hz);
}

double SystemConfig::pathloss_db(double distance_km) const {
    return pathloss_fixed_db + pathloss_slope * std::log10(distance_km);
}

double SystemConfig::rho() const { return rho_at(tx_power_dbm); }

double SystemConfig::rho_at(double power_dbm) const {
    return db_to_linear(power_dbm - noise_power_dbm());
}

}  // namespace mnoma
