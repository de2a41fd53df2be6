#include "stdg/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stdg/quadrature.hpp"

namespace stdg {

double exact_burgers_riemann(const RiemannProblem& rp, double t, double x) {
    const double a = rp.left, b = rp.right;
    if (t <= 0.0) return x < rp.x0 ? a : b;
    if (a > b) {  // shock, speed (f(a) - f(b)) / (a - b) = (a + b) / 2
        const double s = 0.5 * (a + b);
        return x < rp.x0 + s * t ? a : b;
    }
    if (a < b) {  // rarefaction fan
        const double xi = (x - rp.x0) / t;
        return std::clamp(xi, a, b);
    }
    return a;
}

double expansion_shock_riemann(const RiemannProblem& rp, double t, double x) {
    const double s = 0.5 * (rp.left + rp.right);
    return x < rp.x0 + s * t ? rp.left : rp.right;
}

double exact_advection(const std::function<double(double)>& u0, double speed, double t,
                       double x) {
    return u0(x - speed * t);
}

std::vector<double> fv_solve(const FluxFunction& flux, const std::function<double(double)>& u0,
                             const FVGrid& grid, double t_final) {
    if (!(grid.cfl > 0.0) || grid.cfl > 0.5)
        throw std::invalid_argument("fv_solve: CFL must lie in (0, 0.5]");
    if (grid.n_cells < 1) throw std::invalid_argument("fv_solve: need at least one cell");
    const double dx = (grid.x_hi - grid.x_lo) / grid.n_cells;

    // Cell averages by 5-point Gauss per cell.
    std::vector<double> gx, gw;
    gauss_legendre(5, gx, gw);
    std::vector<double> u(grid.n_cells);
    for (int i = 0; i < grid.n_cells; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < gx.size(); ++k)
            s += gw[k] * u0(grid.x_lo + (i + gx[k]) * dx);
        u[i] = s;
    }

    const NumericalFlux godunov(NumericalFluxKind::Godunov, flux);
    std::vector<double> fluxes(grid.n_cells + 1);
    double t = 0.0;
    while (t < t_final) {
        double lo = u[0], hi = u[0];
        for (double v : u) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        const double speed = std::max(flux.max_abs_deriv_on(lo, hi), 1e-14);
        const double dt = std::min(grid.cfl * dx / speed, t_final - t);
        // Transmissive ends: boundary flux from the interior trace.
        fluxes[0] = flux.value(u[0]);
        fluxes[grid.n_cells] = flux.value(u[grid.n_cells - 1]);
        for (int i = 1; i < grid.n_cells; ++i)
            fluxes[i] = godunov.value(u[i - 1], u[i], 0.0, 1.0);
        for (int i = 0; i < grid.n_cells; ++i)
            u[i] -= dt / dx * (fluxes[i + 1] - fluxes[i]);
        t += dt;
    }
    return u;
}

std::function<double(double)> fv_as_function(std::vector<double> cells, const FVGrid& grid) {
    const double dx = (grid.x_hi - grid.x_lo) / grid.n_cells;
    const double x_lo = grid.x_lo;
    const int n = grid.n_cells;
    return [cells = std::move(cells), dx, x_lo, n](double x) {
        int i = static_cast<int>(std::floor((x - x_lo) / dx));
        i = std::clamp(i, 0, n - 1);
        return cells[static_cast<std::size_t>(i)];
    };
}

namespace {

template <typename Reduce>
double error_final(const RunState& run, const std::function<double(double)>& ref,
                   const Reduce& accumulate) {
    if (run.slabs.empty()) throw std::invalid_argument("error_final: empty run");
    const DGSolution& sol = run.slabs.back();
    const int order = std::max(2 * 8 - 1, solver_quad_order(sol.degree, run.setup.flux));
    const QuadratureRule seg = segment_rule(order);  // >= 8 points per trace
    double total = 0.0;
    for (const Facet& f : sol.mesh->facets) {
        if (f.kind != FacetKind::TemporalInterface || f.neighbor != -1 || f.normal_t <= 0.0)
            continue;
        const auto& pa = sol.mesh->points[f.v[0]];
        const auto& pb = sol.mesh->points[f.v[1]];
        for (std::size_t n = 0; n < seg.size(); ++n) {
            const double s = seg.points[n][0];
            const SpaceTimePoint p{pa.t, pa.x + s * (pb.x - pa.x)};
            const double uh = sol.eval(*run.basis, f.owner, p);
            total += seg.weights[n] * f.length * accumulate(uh - ref(p.x));
        }
    }
    return total;
}

}  // namespace

double l1_error_final(const RunState& run, const std::function<double(double)>& ref) {
    return error_final(run, ref, [](double d) { return std::abs(d); });
}

double l2_error_final(const RunState& run, const std::function<double(double)>& ref) {
    return std::sqrt(error_final(run, ref, [](double d) { return d * d; }));
}

}  // namespace stdg
