#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "stdg/flux.hpp"
#include "stdg/initial_data.hpp"
#include "stdg/mesh.hpp"
#include "stdg/shock_capturing.hpp"
#include "stdg/solution.hpp"

namespace stdg {

struct NewtonSettings {
    double abs_tol = 1e-10;        // on the residual infinity norm
    int max_iter = 50;
    double min_step = 0x1p-10;     // backtracking floor
    int picard_sweeps = 3;         // Newton solves with lagged viscosity
    double picard_tol = 1e-8;      // relative eps change between sweeps
    double linear_tol = 1e-12;     // iterative linear solver tolerance
    bool iterative_linear = false;

    void validate() const {
        if (!(abs_tol > 0.0) || !(picard_tol > 0.0) || !(linear_tol > 0.0))
            throw std::invalid_argument("newton: tolerances must be positive");
        if (max_iter < 1) throw std::invalid_argument("newton.max_iter must be >= 1");
        if (picard_sweeps < 1) throw std::invalid_argument("picard.sweeps must be >= 1");
    }
};

class NonConvergenceError : public std::runtime_error {
  public:
    NonConvergenceError(std::string what, std::vector<double> history)
        : std::runtime_error(std::move(what)), residual_history(std::move(history)) {}
    std::vector<double> residual_history;
};

// Quadrature orders used for every solver integral: exact to roundoff for
// polynomial fluxes, elevated best-effort otherwise.
int solver_quad_order(int degree, const FluxFunction& flux);

// Per-slab balance pieces, assembled with exactly the solver's quadrature and
// flux evaluations so that their sum telescopes against the initial energy.
struct SlabBalance {
    double sc_dissipation = 0.0;          // sum_k eps_k int |grad u|^2
    double interface_dissipation = 0.0;   // sum over internal spatial facets of
                                          // int_a^b (ftilde.nu - hhat) dxi ds
    double min_interface_facet = 0.0;     // most negative per-facet dissipation
    double bottom_jump_halfsq = 0.0;      // 1/2 int (u+ - u-)^2 on the slab bottom
    double bottom_prev_halfsq = 0.0;      // 1/2 int (u-)^2   (u0 for the first slab)
    double top_halfsq = 0.0;              // 1/2 int u(t_hi^-)^2
    double boundary_entropy_outflux = 0.0;  // int qtilde(u) . nu over x = x_lo, x_hi
    double boundary_mass_outflux = 0.0;     // int ftilde(u) . nu over the same
    double bottom_prev_mass = 0.0;        // int u- dx
    double top_mass = 0.0;                // int u(t_hi^-) dx
    double sup_abs = 0.0;                 // max |u| over quadrature/vertex points
};

// Assembly engine for one slab: residual, Jacobian, viscosity, balance.
class SlabAssembly {
  public:
    SlabAssembly(const SlabMesh& mesh, const SimplexBasis& basis, const FluxFunction& flux,
                 NumericalFluxKind num_flux);

    int n_dofs() const;
    const SlabMesh& mesh() const { return *mesh_; }

    std::vector<double> viscosities(const Eigen::MatrixXd& coeffs, const PointwiseFn& prev,
                                    const ViscosityParams& params, double h_global) const;

    Eigen::VectorXd residual(const Eigen::MatrixXd& coeffs, const PointwiseFn& prev,
                             const std::vector<double>& eps) const;
    Eigen::SparseMatrix<double> jacobian(const Eigen::MatrixXd& coeffs, const PointwiseFn& prev,
                                         const std::vector<double>& eps) const;

    // Shock-capturing part of the residual only (zero eps rows elsewhere).
    Eigen::VectorXd sc_residual(const Eigen::MatrixXd& coeffs,
                                const std::vector<double>& eps) const;

    SlabBalance balance(const Eigen::MatrixXd& coeffs, const PointwiseFn& prev,
                        const std::vector<double>& eps) const;

    // L^2 projection of a pointwise function, extended constant in time.
    Eigen::MatrixXd project_pointwise(const PointwiseFn& fn) const;

    // sum_k int_k (div ftilde(u))^2 dx over the slab.
    double divflux_sq_integral(const Eigen::MatrixXd& coeffs) const;

    struct Impl;
    std::shared_ptr<const Impl> impl() const { return impl_; }

  private:
    const SlabMesh* mesh_;
    std::shared_ptr<const Impl> impl_;
};

struct RunSetup {
    FluxFunction flux = FluxFunction::burgers();
    NumericalFluxKind num_flux = NumericalFluxKind::Godunov;
    int degree = 1;
    ViscosityParams viscosity;
    double x_lo = -1.0, x_hi = 1.0;
    int n_x = 16;
    MeshPattern pattern = MeshPattern::UniformDiagonal;
    double t_final = 0.5;
    int n_slabs = 0;  // 0: slab height = cell width
    InitialData u0;
    NewtonSettings newton;
    std::uint64_t seed = 42;
};

struct SlabStats {
    double t_lo = 0.0, t_hi = 0.0;
    int sweeps = 0;
    std::vector<int> newton_iters;
    double eps_change = 0.0;
    double eps_max = 0.0;
};

struct RunState {
    RunSetup setup;
    std::shared_ptr<const SimplexBasis> basis;
    std::vector<DGSolution> slabs;
    std::vector<SlabStats> stats;
    double h_global = 0.0;

    PointwiseFn initial_fn() const {
        const InitialData u0 = setup.u0;
        return [u0](double x) { return u0(x); };
    }
    // Trace below the bottom interface of slab n: u0 for n = 0, the previous
    // slab's top trace otherwise.
    PointwiseFn prev_trace(int slab) const;
};

// Solve one slab: Picard sweeps over the lagged viscosity around damped
// Newton solves.
DGSolution solve_slab(std::shared_ptr<const SlabMesh> mesh, const SimplexBasis& basis,
                      const RunSetup& setup, const PointwiseFn& prev, double h_global,
                      SlabStats* stats = nullptr);

// March slabs over [0, T]. A slab that fails to converge is split in half
// once; a second failure propagates.
RunState advance(const RunSetup& setup, double t_final);

}  // namespace stdg
