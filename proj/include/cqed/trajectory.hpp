// trajectory.hpp: time grid plus named observable series

#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace cqed {

struct Trajectory {
    std::vector<double> times;
    // Series kept in insertion order so tabular output is stable.
    std::vector<std::string> names;
    std::vector<std::vector<double>> series;
    std::vector<std::string> warnings;
    std::string metadata;

    std::size_t size() const { return times.size(); }
    bool has(const std::string& name) const;
    // Appends a value to the named series, creating it on first use.
    void record(const std::string& name, double value);
    void set(const std::string& name, std::vector<double> values);
    const std::vector<double>& at(const std::string& name) const;
    // Throws ContractViolation when a series length differs from times.
    void validate() const;
};

// n_points uniformly spaced values on [t0, t1].
std::vector<double> uniform_grid(double t0, double t1, std::size_t n_points);

}  // namespace cqed
