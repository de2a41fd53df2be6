#pragma once

#include <array>
#include <vector>

namespace stdg {

// Quadrature rule on a reference domain. For triangle rules the points are
// (xi, eta) on the unit triangle {xi, eta >= 0, xi + eta <= 1}; for segment
// rules the points are (s, 0) with s in [0, 1].
struct QuadratureRule {
    std::vector<std::array<double, 2>> points;
    std::vector<double> weights;
    int order = 0;  // exact for polynomials of total degree <= order

    std::size_t size() const { return weights.size(); }
};

// Gauss-Legendre nodes/weights on [0, 1], exact for degree <= 2n - 1.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Rule on the reference triangle, exact for total degree <= order.
// Built as a collapsed tensor product of Gauss-Legendre rules, so any
// order up to the implemented cap is available.
QuadratureRule triangle_rule(int order);

// Rule on the reference segment [0, 1], exact for degree <= order.
QuadratureRule segment_rule(int order);

}  // namespace stdg
