#include "stdg/basis.hpp"

#include <stdexcept>

#include "stdg/quadrature.hpp"

namespace stdg {

namespace {

Eigen::VectorXd monomial_values(const std::vector<std::array<int, 2>>& exps, double xi,
                                double eta) {
    Eigen::VectorXd m(static_cast<int>(exps.size()));
    for (int k = 0; k < m.size(); ++k)
        m[k] = std::pow(xi, exps[k][0]) * std::pow(eta, exps[k][1]);
    return m;
}

}  // namespace

SimplexBasis::SimplexBasis(int degree) : degree_(degree) {
    if (degree < 1 || degree > 8)
        throw std::invalid_argument("SimplexBasis: degree must be in [1, 8]");
    dim_ = (degree + 1) * (degree + 2) / 2;
    for (int d = 0; d <= degree; ++d)
        for (int a = d; a >= 0; --a) exps_.push_back({a, d - a});

    // Gram matrix of the monomials, integrated exactly.
    const QuadratureRule rule = triangle_rule(2 * degree + 2);
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(dim_, dim_);
    for (std::size_t n = 0; n < rule.size(); ++n) {
        const Eigen::VectorXd m = monomial_values(exps_, rule.points[n][0], rule.points[n][1]);
        gram += rule.weights[n] * m * m.transpose();
    }

    // Modified Gram-Schmidt on the monomial coefficients, with one
    // re-orthogonalization pass for stability at higher degree.
    coeff_ = Eigen::MatrixXd::Identity(dim_, dim_);
    auto inner = [&](const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
        return u.dot(gram * v);
    };
    for (int i = 0; i < dim_; ++i) {
        Eigen::VectorXd v = coeff_.row(i);
        for (int pass = 0; pass < 2; ++pass)
            for (int j = 0; j < i; ++j) {
                const Eigen::VectorXd pj = coeff_.row(j);
                v -= inner(pj, v) * pj;
            }
        const double nrm = std::sqrt(inner(v, v));
        if (!(nrm > 0.0)) throw std::runtime_error("SimplexBasis: Gram-Schmidt breakdown");
        coeff_.row(i) = v / nrm;
    }
}

Eigen::VectorXd SimplexBasis::eval(double xi, double eta) const {
    return coeff_ * monomial_values(exps_, xi, eta);
}

Eigen::MatrixXd SimplexBasis::eval_ref_grad(double xi, double eta) const {
    Eigen::VectorXd mxi = Eigen::VectorXd::Zero(dim_);
    Eigen::VectorXd meta = Eigen::VectorXd::Zero(dim_);
    for (int k = 0; k < dim_; ++k) {
        const int a = exps_[k][0], b = exps_[k][1];
        if (a > 0) mxi[k] = a * std::pow(xi, a - 1) * std::pow(eta, b);
        if (b > 0) meta[k] = b * std::pow(xi, a) * std::pow(eta, b - 1);
    }
    Eigen::MatrixXd g(dim_, 2);
    g.col(0) = coeff_ * mxi;
    g.col(1) = coeff_ * meta;
    return g;
}

Eigen::MatrixXd SimplexBasis::eval_ref_hess(double xi, double eta) const {
    Eigen::VectorXd mxx = Eigen::VectorXd::Zero(dim_);
    Eigen::VectorXd mxe = Eigen::VectorXd::Zero(dim_);
    Eigen::VectorXd mee = Eigen::VectorXd::Zero(dim_);
    for (int k = 0; k < dim_; ++k) {
        const int a = exps_[k][0], b = exps_[k][1];
        if (a > 1) mxx[k] = a * (a - 1) * std::pow(xi, a - 2) * std::pow(eta, b);
        if (a > 0 && b > 0) mxe[k] = a * b * std::pow(xi, a - 1) * std::pow(eta, b - 1);
        if (b > 1) mee[k] = b * (b - 1) * std::pow(xi, a) * std::pow(eta, b - 2);
    }
    Eigen::MatrixXd h(dim_, 3);
    h.col(0) = coeff_ * mxx;
    h.col(1) = coeff_ * mxe;
    h.col(2) = coeff_ * mee;
    return h;
}

Eigen::MatrixXd eval_grad(const SimplexBasis& basis, double xi, double eta,
                          const AffineMap& map) {
    if (!(std::abs(map.det) > 0.0))
        throw std::invalid_argument("eval_grad: singular Jacobian");
    const Eigen::MatrixXd ref = basis.eval_ref_grad(xi, eta);
    Eigen::MatrixXd phys(ref.rows(), 2);
    for (int i = 0; i < ref.rows(); ++i) {
        const auto g = map.grad_to_physical(ref(i, 0), ref(i, 1));
        phys(i, 0) = g[0];
        phys(i, 1) = g[1];
    }
    return phys;
}

}  // namespace stdg
