// quadrature.hpp: Gauss-Legendre rules, plain and composite

#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace cqed::quad {

struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [-1, 1].
Rule gauss_legendre(std::size_t n);

// Composite rule on [a, b]: `panels` equal panels, `order` points each.
Rule composite(double a, double b, std::size_t panels, std::size_t order);

double integrate(const Rule& rule, const std::function<double(double)>& f);

}  // namespace cqed::quad
