// runner.hpp: dispatch of a resolved RunConfig, built-in check suites

#pragma once

#include "cqed/config.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace cqed {

inline constexpr int exit_ok = 0;
inline constexpr int exit_config_error = 2;
inline constexpr int exit_numeric_error = 3;
inline constexpr int exit_check_failure = 4;

struct CheckItem {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    // "<" or ">"
    std::string relation = "<";
    bool pass = false;
};

struct SuiteResult {
    int id = 0;
    std::string title;
    std::vector<CheckItem> items;

    bool pass() const;
};

SuiteResult suite_transmon_regime();
SuiteResult suite_gauge_invariance();
SuiteResult suite_field_circuit();
SuiteResult suite_coupled_dynamics();
SuiteResult suite_bath();
SuiteResult suite_equations_of_motion();

std::vector<SuiteResult> run_check_suites(std::ostream* progress = nullptr);

// Writes <out_dir>/<prefix><mode>.csv (several tables for some modes) and
// <prefix>summary.json. Returns the process exit code; diagnostics go to err.
int run(const RunConfig& cfg, const std::string& out_dir, std::ostream& out, std::ostream& err,
        bool verbose = false);

}  // namespace cqed
