// Acceptance suite: one pass/fail line per criterion; nonzero exit on any
// failure. Optional argv[1] points at the reference-graph data file.

#include <cstdio>
#include <string>

#include "sphpack/commands.hpp"

int main(int argc, char** argv) {
    const std::string data_file = argc > 1 ? argv[1] : "data/reference_graphs.json";

    auto checks = sphpack::acceptance::run_library_checks();
    for (auto& c : sphpack::cli::run_cli_checks(data_file)) checks.push_back(std::move(c));

    bool all = true;
    for (const auto& c : checks) {
        std::printf("%s  %-36s %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
        all = all && c.pass;
    }
    std::printf("%s (%zu checks)\n", all ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED", checks.size());
    return all ? 0 : 1;
}
