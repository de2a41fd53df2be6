#pragma once

#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "stdg/basis.hpp"
#include "stdg/mesh.hpp"

namespace stdg {

// Polynomial solution on one slab: one coefficient row per element in the
// mass-orthonormal element basis phi_i(F^{-1}(x)) / sqrt(det J).
struct DGSolution {
    std::shared_ptr<const SlabMesh> mesh;
    int degree = 1;
    Eigen::MatrixXd coeffs;          // n_elements x basis dim
    std::vector<double> viscosity;   // eps frozen in the final Newton solve

    double eval_ref(const SimplexBasis& basis, int elem, double xi, double eta) const {
        const double det = 2.0 * mesh->elements[elem].area;
        return basis.eval(xi, eta).dot(coeffs.row(elem)) / std::sqrt(det);
    }

    double eval(const SimplexBasis& basis, int elem, const SpaceTimePoint& p) const {
        const auto ref = mesh->element_map(elem).invert(p);
        return eval_ref(basis, elem, ref[0], ref[1]);
    }
};

// Trace of a slab solution on its top interface, u(t_hi^-, x), used as the
// upwind state for the next slab.
class SlabTopTrace {
  public:
    SlabTopTrace(const DGSolution& sol, std::shared_ptr<const SimplexBasis> basis);
    double operator()(double x) const;

  private:
    struct Segment {
        double x0, x1;
        int elem;
    };
    const DGSolution* sol_;
    std::shared_ptr<const SimplexBasis> basis_;
    std::vector<Segment> segments_;
    double t_top_;
};

using PointwiseFn = std::function<double(double)>;

}  // namespace stdg
