#pragma once

#include <functional>
#include <vector>

#include "stdg/flux.hpp"
#include "stdg/solution.hpp"
#include "stdg/solver.hpp"

namespace stdg {

struct RiemannProblem {
    double left = 1.0;
    double right = 0.0;
    double x0 = 0.0;
};

// Entropy solution of the Burgers Riemann problem: shock with
// Rankine-Hugoniot speed (a + b) / 2 for a > b, rarefaction fan for a < b.
double exact_burgers_riemann(const RiemannProblem& rp, double t, double x);

// The non-entropic weak solution for a < b: a jump travelling at the
// Rankine-Hugoniot speed. Used as a negative control for entropy selection.
double expansion_shock_riemann(const RiemannProblem& rp, double t, double x);

// Exact advection solution u0(x - c t).
double exact_advection(const std::function<double(double)>& u0, double speed, double t, double x);

struct FVGrid {
    int n_cells = 100;
    double x_lo = -1.0, x_hi = 1.0;
    double cfl = 0.45;  // must lie in (0, 0.5]
};

// First-order Godunov finite-volume solve; monotone, so it converges to the
// entropy solution. Returns cell averages at time T.
std::vector<double> fv_solve(const FluxFunction& flux, const std::function<double(double)>& u0,
                             const FVGrid& grid, double t_final);

// Piecewise-constant view of FV cell averages.
std::function<double(double)> fv_as_function(std::vector<double> cells, const FVGrid& grid);

// int |u_h(t_final^-, x) - ref(x)| dx over the domain, by composite Gauss
// quadrature with at least 8 points per element trace.
double l1_error_final(const RunState& run, const std::function<double(double)>& ref);

// Same for the L2 norm of the difference.
double l2_error_final(const RunState& run, const std::function<double(double)>& ref);

}  // namespace stdg
