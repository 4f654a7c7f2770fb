#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "mnoma/config.hpp"

namespace mnoma {

/// Tally for one property over the randomized instances.
struct PropertyOutcome {
    std::string name;
    std::string description;
    std::size_t checked = 0;
    std::size_t failed = 0;
    double worst = 0.0;  // largest violation measure seen; <= 0 when clean
    std::string first_failure;

    bool passed() const { return failed == 0; }
};

struct VerifyReport {
    std::vector<PropertyOutcome> properties;

    bool all_passed() const;
    const PropertyOutcome* find(const std::string& name) const;
};

struct VerifyOptions {
    std::size_t trials = 1000;
    std::uint64_t seed = 1;
    SystemConfig config;  // geometry and noise; antennas forced to 3x3
    std::size_t dof_samples = 100;    // random OMA splits per instance
    std::size_t gap_grid_points = 10000;
    int admission_users = 8;
};

/// Runs the whole invariant suite on randomized channel draws. Each trial
/// derives its own generator from (seed, trial), so reports are reproducible.
VerifyReport run_verify(const VerifyOptions& options);

void print_report(std::ostream& out, const VerifyReport& report);

}  // namespace mnoma
