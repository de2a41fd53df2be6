#pragma once

#include <functional>

#include <Eigen/Dense>

#include "stdg/basis.hpp"
#include "stdg/geometry.hpp"

namespace stdg {

// Element-local H^1 projection: the unique p in P^q(kappa) with
//   int grad(p - g) . grad(w) dx = 0   for all w in P^q(kappa)
//   int (p - g) dx = 0                 (mean gauge for the Neumann null space)
// Returns coefficients in the mass-orthonormal element basis. The right-hand
// side is formed by integrating by parts, so only point values of g are
// needed; quad_order must be high enough for g times a polynomial of degree q.
Eigen::VectorXd h1_project(const std::function<double(const SpaceTimePoint&)>& g,
                           const AffineMap& map, const SimplexBasis& basis, int quad_order);

}  // namespace stdg
