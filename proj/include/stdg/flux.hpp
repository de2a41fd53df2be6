#pragma once

#include <cmath>
#include <string>
#include <vector>

namespace stdg {

enum class PdeKind { Advection, Burgers, BuckleyLeverett };

// Physical flux f(u) with derivatives and the antiderivative F(u) = int_0^u f.
// An optional clamp replaces f outside [lo, hi] by its C^1 linear extension
// (f' frozen at the interval endpoints), which keeps sup |f'| finite without
// changing f on the data range.
class FluxFunction {
  public:
    static FluxFunction advection(double speed);
    static FluxFunction burgers();
    static FluxFunction buckley_leverett(double m);

    double value(double u) const;
    double deriv(double u) const;
    double deriv2(double u) const;
    double antideriv(double u) const;

    PdeKind pde() const { return pde_; }
    std::string name() const;

    // Degree of f as a polynomial in u; -1 when not polynomial (Buckley-
    // Leverett, or any clamped flux).
    int poly_degree() const;
    bool is_convex() const;

    void set_clamp(double lo, double hi);
    void clear_clamp() { clamped_ = false; }
    bool has_clamp() const { return clamped_; }
    double clamp_lo() const { return clamp_lo_; }
    double clamp_hi() const { return clamp_hi_; }

    // Points where f'' is discontinuous (clamp joints); used when scanning
    // for slope extrema.
    std::vector<double> deriv_kinks() const;

    // max over [lo, hi] of |f'|.
    double max_abs_deriv_on(double lo, double hi) const;

  private:
    FluxFunction(PdeKind pde, double param) : pde_(pde), param_(param) {}
    double base_value(double u) const;
    double base_deriv(double u) const;
    double base_deriv2(double u) const;
    double base_antideriv(double u) const;

    PdeKind pde_;
    double param_ = 0.0;  // advection speed or Buckley-Leverett m
    bool clamped_ = false;
    double clamp_lo_ = 0.0, clamp_hi_ = 0.0;
    double f_lo_ = 0.0, f_hi_ = 0.0;    // f at the clamp endpoints
    double df_lo_ = 0.0, df_hi_ = 0.0;  // f' at the clamp endpoints
    double F_lo_ = 0.0, F_hi_ = 0.0;    // antiderivative at the clamp endpoints
};

// Space-time flux ftilde(u) = (u, f(u)) and its contractions with a unit
// normal nu = (nu_t, nu_x):
//   g(u)  = ftilde(u) . nu = u nu_t + f(u) nu_x
//   G(u)  = antiderivative of g, G(0) = 0
//   g'(u) = nu_t + f'(u) nu_x
struct SpaceTimeFlux {
    const FluxFunction* f = nullptr;

    explicit SpaceTimeFlux(const FluxFunction& flux) : f(&flux) {}

    double dot_normal(double u, double nu_t, double nu_x) const {
        return u * nu_t + f->value(u) * nu_x;
    }
    double antideriv_along(double u, double nu_t, double nu_x) const {
        return 0.5 * u * u * nu_t + f->antideriv(u) * nu_x;
    }
    double slope_along(double u, double nu_t, double nu_x) const {
        return nu_t + f->deriv(u) * nu_x;
    }
    double slope2_along(double u, double nu_x) const { return f->deriv2(u) * nu_x; }
    // |ftilde'(u)| = sqrt(1 + f'(u)^2)
    double deriv_norm(double u) const { return std::hypot(1.0, f->deriv(u)); }
};

double spacetime_flux_dot_normal(const FluxFunction& f, double u, double nu_t, double nu_x);

enum class NumericalFluxKind {
    Godunov,
    EngquistOsher,
    LocalLaxFriedrichs,
    Central,  // not monotone; negative control for the monotonicity checker
    TemporalUpwind,
};

struct FluxDerivs {
    double value = 0.0;
    double da = 0.0;  // d/d(owner trace)
    double db = 0.0;  // d/d(neighbor trace)
};

// Interface flux hhat(a, b; nu), consistent with ftilde . nu. a is the trace
// from the owner side (normal nu outward), b from the neighbor side.
class NumericalFlux {
  public:
    NumericalFlux(NumericalFluxKind kind, FluxFunction flux);

    double value(double a, double b, double nu_t, double nu_x) const;
    FluxDerivs value_and_derivs(double a, double b, double nu_t, double nu_x) const;

    // D = int_a^b (ftilde(xi) . nu - hhat(a, b; nu)) dxi, evaluated with the
    // closed-form antiderivative. Nonnegative for monotone (E-) fluxes.
    double dissipation_integral(double a, double b, double nu_t, double nu_x) const;

    NumericalFluxKind kind() const { return kind_; }
    const FluxFunction& flux() const { return flux_; }

  private:
    NumericalFluxKind kind_;
    FluxFunction flux_;
};

struct MonotonicityReport {
    bool pass = true;
    double min_da = 0.0;     // most negative forward difference in a
    double max_db = 0.0;     // most positive forward difference in b
    long violations = 0;
    long samples = 0;
};

// Forward-difference sign check of the monotonicity axioms over an
// (a, b) sample grid and a spread of normal directions. Violations are
// reported, not thrown.
MonotonicityReport check_monotone(const NumericalFlux& flux, double box_lo, double box_hi,
                                  int n_samples);

}  // namespace stdg
