#pragma once

#include <cmath>
#include <stdexcept>

namespace stdg {

// Parameters of the element viscosity
//   eps|_kappa = h^beta C_eps [ int_kappa |div ftilde(u)| dx
//                             + int_{boundary kappa} |u_own - u_nbr| ds ] / |kappa|
struct ViscosityParams {
    double beta = 1.0;   // required: 1/2 < beta < 2
    double c_eps = 1.0;  // positive
    // Use the element diameter instead of the global mesh size in h^beta.
    bool local_h = false;
    // Include the slab-bottom jump against the previous slab's trace in the
    // jump integral (the slab-top face is never included: the later slab does
    // not exist yet while marching).
    bool include_temporal_jumps = true;

    void validate() const {
        if (!(beta > 0.5) || !(beta < 2.0))
            throw std::invalid_argument("viscosity.beta must lie strictly in (0.5, 2)");
        if (!(c_eps > 0.0)) throw std::invalid_argument("viscosity.c_eps must be positive");
    }
};

inline double element_viscosity(double divflux_integral, double jump_integral, double area,
                                double h, const ViscosityParams& p) {
    return std::pow(h, p.beta) * p.c_eps * (divflux_integral + jump_integral) / area;
}

}  // namespace stdg
