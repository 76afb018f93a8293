#pragma once

#include <vector>

namespace seglab {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Cached n-point rule; nodes by Newton iteration on P_n.
const GaussRule& gauss_legendre(int n);

/// Composite Gauss-Legendre over [a, b] split into equal panels.
template <class F>
double integrate(F&& f, double a, double b, int order, int panels = 1) {
    const GaussRule& rule = gauss_legendre(order);
    const double h = (b - a) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        const double mid = lo + 0.5 * h;
        double s = 0.0;
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) s += rule.weights[k] * f(mid + 0.5 * h * rule.nodes[k]);
        total += 0.5 * h * s;
    }
    return total;
}

} // namespace seglab
