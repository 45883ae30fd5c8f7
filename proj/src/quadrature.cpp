#include "cqed/quadrature.hpp"

#include "cqed/errors.hpp"

#include <cmath>
#include <numbers>

namespace cqed::quad {

Rule gauss_legendre(std::size_t n) {
    if (n == 0) throw InvalidDimension("Gauss-Legendre rule needs at least one node");
    Rule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        // Tricomi initial guess, then Newton on P_n.
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const double kk = static_cast<double>(k);
                const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) {
                p1 = x;
                p0 = 1.0;
            }
            dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // Weight from the converged derivative.
        double p0 = 1.0;
        double p1 = x;
        for (std::size_t k = 2; k <= n; ++k) {
            const double kk = static_cast<double>(k);
            const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
            p0 = p1;
            p1 = p2;
        }
        dp = n == 1 ? 1.0 : static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

Rule composite(double a, double b, std::size_t panels, std::size_t order) {
    if (panels == 0) throw InvalidDimension("composite rule needs at least one panel");
    const Rule base = gauss_legendre(order);
    Rule out;
    out.nodes.reserve(panels * order);
    out.weights.reserve(panels * order);
    const double h = (b - a) / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
        const double left = a + h * static_cast<double>(p);
        const double mid = left + 0.5 * h;
        for (std::size_t k = 0; k < order; ++k) {
            out.nodes.push_back(mid + 0.5 * h * base.nodes[k]);
            out.weights.push_back(0.5 * h * base.weights[k]);
        }
    }
    return out;
}

double integrate(const Rule& rule, const std::function<double(double)>& f) {
    double sum = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) sum += rule.weights[k] * f(rule.nodes[k]);
    return sum;
}

}  // namespace cqed::quad
