#pragma once

#include <vector>

#include <Eigen/Dense>

#include "stdg/geometry.hpp"

namespace stdg {

// Orthonormal modal basis for polynomials of total degree <= q on the
// reference triangle, built by Gram-Schmidt on the monomials. The first mode
// is the constant 1/sqrt(|T_ref|) = sqrt(2).
class SimplexBasis {
  public:
    explicit SimplexBasis(int degree);

    int degree() const { return degree_; }
    int dim() const { return dim_; }

    // Values of all modes at a reference point.
    Eigen::VectorXd eval(double xi, double eta) const;

    // Reference gradients: rows are modes, columns (d/dxi, d/deta).
    Eigen::MatrixXd eval_ref_grad(double xi, double eta) const;

    // Reference second derivatives: columns (d2/dxi2, d2/dxideta, d2/deta2).
    Eigen::MatrixXd eval_ref_hess(double xi, double eta) const;

    // Monomial exponents of the underlying monomial ordering.
    const std::vector<std::array<int, 2>>& exponents() const { return exps_; }

  private:
    int degree_;
    int dim_;
    std::vector<std::array<int, 2>> exps_;  // (a, b) for xi^a eta^b
    Eigen::MatrixXd coeff_;                 // mode i = sum_k coeff_(i,k) xi^a_k eta^b_k
};

// Physical-space gradients of the basis functions phi_i(F^{-1}(x)):
// rows are modes, columns (d/dt, d/dx). Chain rule with the inverse Jacobian.
Eigen::MatrixXd eval_grad(const SimplexBasis& basis, double xi, double eta,
                          const AffineMap& map);

}  // namespace stdg
