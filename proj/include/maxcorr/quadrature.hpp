#pragma once

// Gauss-Legendre rules. Nodes and weights are computed at startup by Newton
// iteration on the Legendre recurrence rather than typed in from tables.

#include <cstddef>
#include <vector>

namespace maxcorr {

struct GaussLegendreRule {
    std::vector<double> nodes;   // on (-1, 1)
    std::vector<double> weights;
};

// Rule of the given order; cached, thread-safe after first use per order.
const GaussLegendreRule& gauss_legendre(int order);

// Integral of f over [a, b] with a single application of the rule.
template <typename F>
double gl_integrate(const GaussLegendreRule& rule, double a, double b, F&& f) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
    }
    return acc * half;
}

} // namespace maxcorr
