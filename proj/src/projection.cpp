#include "stdg/projection.hpp"

#include <cmath>
#include <stdexcept>

#include "stdg/quadrature.hpp"

namespace stdg {

// int grad(g) . grad(w) = - int g Lap(w) + sum_edges int g (grad w . nu) ds,
// which is exact for polynomial w. Everything on the right needs only point
// values of g.
Eigen::VectorXd h1_project(const std::function<double(const SpaceTimePoint&)>& g,
                           const AffineMap& map, const SimplexBasis& basis, int quad_order) {
    const int dim = basis.dim();
    const double det = std::abs(map.det);
    if (!(det > 0.0)) throw std::invalid_argument("h1_project: degenerate element");
    const double scale = 1.0 / std::sqrt(det);  // orthonormal basis factor

    // J^{-1} J^{-T} for the Laplacian chain rule.
    const double i00 = map.j11 / map.det, i01 = -map.j01 / map.det;
    const double i10 = -map.j10 / map.det, i11 = map.j00 / map.det;
    const double m00 = i00 * i00 + i01 * i01;
    const double m01 = i00 * i10 + i01 * i11;
    const double m11 = i10 * i10 + i11 * i11;

    const QuadratureRule vol = triangle_rule(quad_order);
    Eigen::MatrixXd stiff = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
    double g_integral = 0.0;

    for (std::size_t n = 0; n < vol.size(); ++n) {
        const double xi = vol.points[n][0], eta = vol.points[n][1];
        const double w = vol.weights[n] * det;
        const Eigen::MatrixXd ref_grad = basis.eval_ref_grad(xi, eta);
        const Eigen::MatrixXd ref_hess = basis.eval_ref_hess(xi, eta);
        const double gv = g(map.apply(xi, eta));
        g_integral += w * gv;
        Eigen::MatrixXd phys(dim, 2);
        for (int i = 0; i < dim; ++i) {
            const auto pg = map.grad_to_physical(ref_grad(i, 0), ref_grad(i, 1));
            phys(i, 0) = pg[0];
            phys(i, 1) = pg[1];
            const double lap =
                m00 * ref_hess(i, 0) + 2.0 * m01 * ref_hess(i, 1) + m11 * ref_hess(i, 2);
            rhs[i] -= w * gv * lap * scale;
        }
        stiff += w * scale * scale * phys * phys.transpose();
    }

    // Edge terms: int_e g (grad w . nu) ds with outward normals.
    const std::array<std::array<double, 2>, 3> corners = {{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}}};
    const QuadratureRule seg = segment_rule(quad_order);
    for (int e = 0; e < 3; ++e) {
        const auto& ra = corners[e];
        const auto& rb = corners[(e + 1) % 3];
        const SpaceTimePoint pa = map.apply(ra[0], ra[1]);
        const SpaceTimePoint pb = map.apply(rb[0], rb[1]);
        const double len = distance(pa, pb);
        // Outward normal for a CCW physical triangle; reversed if the map flips
        // orientation.
        const double sgn = (map.det > 0.0) ? 1.0 : -1.0;
        const double nt = sgn * (pb.x - pa.x) / len;
        const double nx = -sgn * (pb.t - pa.t) / len;
        for (std::size_t n = 0; n < seg.size(); ++n) {
            const double s = seg.points[n][0];
            const double xi = ra[0] + s * (rb[0] - ra[0]);
            const double eta = ra[1] + s * (rb[1] - ra[1]);
            const double w = seg.weights[n] * len;
            const double gv = g(map.apply(xi, eta));
            const Eigen::MatrixXd ref_grad = basis.eval_ref_grad(xi, eta);
            for (int i = 0; i < dim; ++i) {
                const auto pg = map.grad_to_physical(ref_grad(i, 0), ref_grad(i, 1));
                rhs[i] += w * gv * (pg[0] * nt + pg[1] * nx) * scale;
            }
        }
    }

    // Gradient part: modes 1..dim-1 (mode 0 is constant, zero row/column).
    Eigen::VectorXd c = Eigen::VectorXd::Zero(dim);
    if (dim > 1) {
        const Eigen::MatrixXd k = stiff.bottomRightCorner(dim - 1, dim - 1);
        const Eigen::VectorXd b = rhs.tail(dim - 1);
        c.tail(dim - 1) = Eigen::LDLT<Eigen::MatrixXd>(k).solve(b);
    }
    // Mean gauge: modes >= 1 have zero mean, the constant mode integrates to
    // sqrt(|kappa|).
    c[0] = g_integral / std::sqrt(0.5 * det);
    return c;
}

}  // namespace stdg
