#include "cqed/trajectory.hpp"

#include "cqed/errors.hpp"

#include <algorithm>

namespace cqed {

bool Trajectory::has(const std::string& name) const {
    return std::find(names.begin(), names.end(), name) != names.end();
}

void Trajectory::record(const std::string& name, double value) {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) {
        names.push_back(name);
        series.emplace_back();
        series.back().push_back(value);
        return;
    }
    series[static_cast<std::size_t>(it - names.begin())].push_back(value);
}

void Trajectory::set(const std::string& name, std::vector<double> values) {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) {
        names.push_back(name);
        series.push_back(std::move(values));
        return;
    }
    series[static_cast<std::size_t>(it - names.begin())] = std::move(values);
}

const std::vector<double>& Trajectory::at(const std::string& name) const {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw IndexError("trajectory has no series '" + name + "'");
    return series[static_cast<std::size_t>(it - names.begin())];
}

void Trajectory::validate() const {
    for (std::size_t k = 0; k < names.size(); ++k) {
        if (series[k].size() != times.size()) {
            throw ContractViolation("series '" + names[k] + "' length differs from the time grid");
        }
    }
}

std::vector<double> uniform_grid(double t0, double t1, std::size_t n_points) {
    if (n_points < 2) throw InvalidDimension("time grid needs at least 2 points");
    std::vector<double> t(n_points);
    const double h = (t1 - t0) / static_cast<double>(n_points - 1);
    for (std::size_t k = 0; k < n_points; ++k) t[k] = t0 + h * static_cast<double>(k);
    t.back() = t1;
    return t;
}

}  // namespace cqed
