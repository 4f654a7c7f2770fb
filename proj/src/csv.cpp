#include "mnoma/csv.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <stdexcept>

#include "mnoma/config_io.hpp"

namespace mnoma {

std::string format_number(double x) {
    std::array<char, 32> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), end);
}

void write_csv(std::ostream& out, const SweepResult& result) {
    out << (result.two_dimensional ? "sweep_point,sweep_point2" : "sweep_point")
        << ",scheme,metric,mean,stderr,trials\n";
    for (const auto& r : result.rows) {
        out << format_number(r.point);
        if (result.two_dimensional) {
            out << ',' << format_number(r.point2.value_or(0.0));
        }
        out << ',' << r.scheme << ',' << r.metric << ',' << format_number(r.mean) << ','
            << format_number(r.stderr_mean) << ',' << r.trials << '\n';
    }
}

void write_metadata(std::ostream& out, const SweepSpec& spec, const SweepResult& result,
                    const std::string& command) {
    out << "# " << build_tag() << "\n";
    out << "# command: " << command << "\n";
    out << "# Reload with --config to reproduce this run.\n";
    out << to_config_text(spec);
    for (const auto& [k, v] : result.metadata) {
        out << "# " << k << ": " << v << "\n";
    }
}

void write_outputs(const std::filesystem::path& path, const SweepSpec& spec,
                   const SweepResult& result, const std::string& command) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) {
            throw std::runtime_error("cannot create directory '" + path.parent_path().string() +
                                     "': " + ec.message());
        }
    }
    auto write = [](const std::filesystem::path& p, auto&& body) {
        std::ofstream f(p, std::ios::binary | std::ios::trunc);
        if (!f) {
            throw std::runtime_error("cannot open '" + p.string() + "' for writing");
        }
        body(f);
        f.flush();
        if (!f) {
            throw std::runtime_error("write to '" + p.string() + "' failed");
        }
    };
    write(path, [&](std::ostream& o) { write_csv(o, result); });
    std::filesystem::path meta = path;
    meta += ".meta";
    write(meta, [&](std::ostream& o) { write_metadata(o, spec, result, command); });
}

}  // namespace mnoma
