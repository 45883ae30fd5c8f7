// config.hpp: JSON run configuration for the cqed command-line tool

#pragma once

#include "cqed/bath.hpp"
#include "cqed/coupled.hpp"
#include "cqed/transmon.hpp"
#include "cqed/txline.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace cqed {

enum class RunMode { Transmon, Modes, Couple, Evolve, Bath, Check };
enum class UnitSystem { SI, Natural };

const char* to_string(RunMode m);
const char* to_string(UnitSystem u);
std::optional<RunMode> parse_run_mode(const std::string& s);
std::optional<UnitSystem> parse_unit_system(const std::string& s);

struct SweepSpec {
    double n_g_start = 0.0;
    double n_g_stop = 1.0;
    std::size_t points = 21;
    std::size_t levels = 5;
};

struct LineSpec {
    LineParams params;
    std::size_t n_modes = 3;
    Convention convention = Convention::LiteralIntegral;
};

struct CrossSectionSpec {
    double w = 1.0e-5;
    double d = 0.0;
    double eps_r = 1.0;
};

struct CouplingBlock {
    CouplingSpec spec;
    std::size_t transmon_levels = 3;
    // One entry per mode, or a single entry applied to every mode.
    std::vector<std::size_t> fock_cutoffs{6};
    bool nearest_neighbor = false;
};

struct PartitionBlock {
    RegionPartition part;
    std::size_t cavity_modes = 20;
    std::size_t bins = 200;
    // 0 selects bins times the bin spacing of the finite oracle port.
    double omega_max = 0.0;
    std::size_t decay_mode = 9;
    std::size_t decay_bins = 400;
    double decay_omega_max = 60.0;
    std::size_t decay_points = 600;
    bool all_cavity_modes = false;
};

struct TimeSpec {
    double t0 = 0.0;
    double t1 = 1.0;
    std::size_t points = 101;
    // Basis label (transmon level, photons per mode); empty means level 1, vacuum.
    std::vector<int> initial;
};

// Energies are in units of 2 pi GHz and times in 1 / (2 pi GHz) under
// Natural; Hz (E/h) and seconds under SI. Line quantities are always SI and
// the partition block is in its own model units.
struct RunConfig {
    std::optional<RunMode> mode;
    std::optional<UnitSystem> units;
    std::set<std::string> blocks;
    TransmonParams transmon;
    SweepSpec sweep;
    LineSpec line;
    std::optional<CrossSectionSpec> cross_section;
    CouplingBlock coupling;
    PartitionBlock partition;
    TimeSpec time;
    std::string output_prefix;

    bool has(const std::string& block) const { return blocks.count(block) > 0; }
};

// Throws ConfigError listing every violation, each prefixed by its key path.
RunConfig parse_config(const std::string& text);

// Fixes the mode and unit system from the command line and checks that the
// blocks the mode needs are present. A unit flag that contradicts the file
// is a unit mismatch.
RunConfig resolve_config(RunConfig cfg, RunMode mode, std::optional<UnitSystem> units_flag);

}  // namespace cqed
