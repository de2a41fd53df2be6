#include "stdg/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace stdg {

namespace {
constexpr int kMaxOrder = 64;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    // Newton iteration on P_n over [-1, 1], then map to [0, 1].
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = 0.5 * (1.0 - x);  // descending x -> ascending node
        nodes[n - 1 - i] = 0.5 * (1.0 + x);
        weights[i] = 0.5 * w;
        weights[n - 1 - i] = 0.5 * w;
    }
}

QuadratureRule segment_rule(int order) {
    if (order < 1 || order > kMaxOrder)
        throw std::invalid_argument("segment_rule: order out of range");
    const int n = (order + 2) / 2;  // 2n - 1 >= order
    std::vector<double> x, w;
    gauss_legendre(n, x, w);
    QuadratureRule rule;
    rule.order = order;
    rule.points.reserve(n);
    rule.weights = w;
    for (int i = 0; i < n; ++i) rule.points.push_back({x[i], 0.0});
    return rule;
}

// Duffy-collapsed product rule: with xi = a (1 - b), eta = b,
//   int_T f = int_0^1 int_0^1 f(a (1 - b), b) (1 - b) da db.
// A polynomial of total degree <= p has degree <= p in a and <= p + 1 in b
// after absorbing the Jacobian, so Gauss-Legendre with 2n - 1 >= p in a and
// 2n - 1 >= p + 1 in b integrates it exactly.
QuadratureRule triangle_rule(int order) {
    if (order < 1 || order > kMaxOrder)
        throw std::invalid_argument("triangle_rule: order out of range");
    const int na = (order + 2) / 2;
    const int nb = (order + 3) / 2;
    std::vector<double> xa, wa, xb, wb;
    gauss_legendre(na, xa, wa);
    gauss_legendre(nb, xb, wb);
    QuadratureRule rule;
    rule.order = order;
    rule.points.reserve(static_cast<std::size_t>(na) * nb);
    rule.weights.reserve(static_cast<std::size_t>(na) * nb);
    for (int j = 0; j < nb; ++j) {
        for (int i = 0; i < na; ++i) {
            const double b = xb[j];
            const double a = xa[i];
            rule.points.push_back({a * (1.0 - b), b});
            rule.weights.push_back(wa[i] * wb[j] * (1.0 - b));
        }
    }
    return rule;
}

}  // namespace stdg
