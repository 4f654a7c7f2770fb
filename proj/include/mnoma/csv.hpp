#pragma once

#include <filesystem>
#include <ostream>
#include <string>

#include "mnoma/experiments.hpp"

namespace mnoma {

/// Shortest decimal text that reads back to the same double.
std::string format_number(double x);

/// Header `sweep_point[,sweep_point2],scheme,metric,mean,stderr,trials`, then
/// one line per row in emission order.
void write_csv(std::ostream& out, const SweepResult& result);

/// Companion file: the full resolved spec in config syntax (loadable with
/// --config) followed by the result metadata as comments.
void write_metadata(std::ostream& out, const SweepSpec& spec, const SweepResult& result,
                    const std::string& command);

/// Writes `<path>` and `<path>.meta`. Throws std::runtime_error on I/O failure.
void write_outputs(const std::filesystem::path& path, const SweepSpec& spec,
                   const SweepResult& result, const std::string& command);

}  // namespace mnoma
