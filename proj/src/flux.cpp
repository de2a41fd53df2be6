#include "stdg/flux.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stdg/quadrature.hpp"

namespace stdg {

namespace {

constexpr double kTemporalTol = 1e-12;

// Roots of a continuous function on [lo, hi], located via sign changes on a
// uniform scan followed by bisection.
template <typename F>
void scan_roots(const F& func, double lo, double hi, int n, std::vector<double>& out) {
    if (!(hi > lo)) return;
    double prev_x = lo, prev_v = func(lo);
    for (int i = 1; i <= n; ++i) {
        const double x = lo + (hi - lo) * i / n;
        const double v = func(x);
        if (prev_v == 0.0) {
            out.push_back(prev_x);
        } else if (prev_v * v < 0.0) {
            double a = prev_x, b = x, fa = prev_v;
            for (int it = 0; it < 200 && (b - a) > 1e-16 * (std::abs(a) + std::abs(b) + 1.0);
                 ++it) {
                const double m = 0.5 * (a + b);
                const double fm = func(m);
                if (fm == 0.0) {
                    a = b = m;
                    break;
                }
                if (fa * fm < 0.0)
                    b = m;
                else {
                    a = m;
                    fa = fm;
                }
            }
            out.push_back(0.5 * (a + b));
        }
        prev_x = x;
        prev_v = v;
    }
    if (func(hi) == 0.0) out.push_back(hi);
}

}  // namespace

// ---------------------------------------------------------------------------
// FluxFunction

FluxFunction FluxFunction::advection(double speed) {
    return FluxFunction(PdeKind::Advection, speed);
}

FluxFunction FluxFunction::burgers() { return FluxFunction(PdeKind::Burgers, 0.0); }

FluxFunction FluxFunction::buckley_leverett(double m) {
    if (!(m > 0.0)) throw std::invalid_argument("buckley_leverett: m must be positive");
    return FluxFunction(PdeKind::BuckleyLeverett, m);
}

double FluxFunction::base_value(double u) const {
    switch (pde_) {
        case PdeKind::Advection: return param_ * u;
        case PdeKind::Burgers: return 0.5 * u * u;
        case PdeKind::BuckleyLeverett: {
            const double d = u * u + param_ * (1.0 - u) * (1.0 - u);
            return u * u / d;
        }
    }
    return 0.0;
}

double FluxFunction::base_deriv(double u) const {
    switch (pde_) {
        case PdeKind::Advection: return param_;
        case PdeKind::Burgers: return u;
        case PdeKind::BuckleyLeverett: {
            const double d = u * u + param_ * (1.0 - u) * (1.0 - u);
            return 2.0 * param_ * u * (1.0 - u) / (d * d);
        }
    }
    return 0.0;
}

double FluxFunction::base_deriv2(double u) const {
    switch (pde_) {
        case PdeKind::Advection: return 0.0;
        case PdeKind::Burgers: return 1.0;
        case PdeKind::BuckleyLeverett: {
            const double m = param_;
            const double d = u * u + m * (1.0 - u) * (1.0 - u);
            const double dd = 2.0 * ((1.0 + m) * u - m);
            return 2.0 * m * ((1.0 - 2.0 * u) * d - 2.0 * (u - u * u) * dd) / (d * d * d);
        }
    }
    return 0.0;
}

double FluxFunction::base_antideriv(double u) const {
    switch (pde_) {
        case PdeKind::Advection: return 0.5 * param_ * u * u;
        case PdeKind::Burgers: return u * u * u / 6.0;
        case PdeKind::BuckleyLeverett: {
            // No elementary closed form; the integrand is analytic with poles
            // off the real axis, so composite Gauss is exact to roundoff.
            if (u == 0.0) return 0.0;
            std::vector<double> x, w;
            gauss_legendre(32, x, w);
            double sum = 0.0;
            const int panels = 2;
            for (int p = 0; p < panels; ++p) {
                const double a = u * p / panels, b = u * (p + 1) / panels;
                for (std::size_t i = 0; i < x.size(); ++i)
                    sum += (b - a) * w[i] * base_value(a + (b - a) * x[i]);
            }
            return sum;
        }
    }
    return 0.0;
}

double FluxFunction::value(double u) const {
    if (clamped_) {
        if (u < clamp_lo_) return f_lo_ + df_lo_ * (u - clamp_lo_);
        if (u > clamp_hi_) return f_hi_ + df_hi_ * (u - clamp_hi_);
    }
    return base_value(u);
}

double FluxFunction::deriv(double u) const {
    if (clamped_) {
        if (u < clamp_lo_) return df_lo_;
        if (u > clamp_hi_) return df_hi_;
    }
    return base_deriv(u);
}

double FluxFunction::deriv2(double u) const {
    if (clamped_ && (u < clamp_lo_ || u > clamp_hi_)) return 0.0;
    return base_deriv2(u);
}

double FluxFunction::antideriv(double u) const {
    if (clamped_) {
        if (u < clamp_lo_) {
            const double s = u - clamp_lo_;
            return F_lo_ + f_lo_ * s + 0.5 * df_lo_ * s * s;
        }
        if (u > clamp_hi_) {
            const double s = u - clamp_hi_;
            return F_hi_ + f_hi_ * s + 0.5 * df_hi_ * s * s;
        }
    }
    return base_antideriv(u);
}

void FluxFunction::set_clamp(double lo, double hi) {
    if (!(lo < hi)) throw std::invalid_argument("set_clamp: need lo < hi");
    clamped_ = true;
    clamp_lo_ = lo;
    clamp_hi_ = hi;
    f_lo_ = base_value(lo);
    f_hi_ = base_value(hi);
    df_lo_ = base_deriv(lo);
    df_hi_ = base_deriv(hi);
    F_lo_ = base_antideriv(lo);
    F_hi_ = base_antideriv(hi);
}

int FluxFunction::poly_degree() const {
    if (clamped_) return -1;
    switch (pde_) {
        case PdeKind::Advection: return 1;
        case PdeKind::Burgers: return 2;
        case PdeKind::BuckleyLeverett: return -1;
    }
    return -1;
}

bool FluxFunction::is_convex() const {
    // f'' >= 0 for advection and Burgers, also after clamping.
    return pde_ != PdeKind::BuckleyLeverett;
}

std::string FluxFunction::name() const {
    switch (pde_) {
        case PdeKind::Advection: return "advection";
        case PdeKind::Burgers: return "burgers";
        case PdeKind::BuckleyLeverett: return "buckley";
    }
    return "?";
}

std::vector<double> FluxFunction::deriv_kinks() const {
    if (!clamped_) return {};
    return {clamp_lo_, clamp_hi_};
}

double FluxFunction::max_abs_deriv_on(double lo, double hi) const {
    if (lo > hi) std::swap(lo, hi);
    double best = std::max(std::abs(deriv(lo)), std::abs(deriv(hi)));
    std::vector<double> cand;
    if (is_convex()) {
        // f' monotone: endpoints suffice.
    } else {
        scan_roots([&](double u) { return deriv2(u); }, lo, hi, 64, cand);
    }
    for (double k : deriv_kinks())
        if (k > lo && k < hi) cand.push_back(k);
    for (double u : cand) best = std::max(best, std::abs(deriv(u)));
    return best;
}

double spacetime_flux_dot_normal(const FluxFunction& f, double u, double nu_t, double nu_x) {
    return u * nu_t + f.value(u) * nu_x;
}

// ---------------------------------------------------------------------------
// NumericalFlux

NumericalFlux::NumericalFlux(NumericalFluxKind kind, FluxFunction flux)
    : kind_(kind), flux_(std::move(flux)) {
    if (kind == NumericalFluxKind::EngquistOsher && !flux_.is_convex())
        throw std::invalid_argument(
            "NumericalFlux: Engquist-Osher requires a convex flux; use Godunov");
}

namespace {

struct Along {  // g(xi) = ftilde(xi) . nu restricted to one normal
    const FluxFunction* f;
    double nt, nx;
    double g(double xi) const { return xi * nt + f->value(xi) * nx; }
    double gp(double xi) const { return nt + f->deriv(xi) * nx; }
    double gpp(double xi) const { return f->deriv2(xi) * nx; }
    double G(double xi) const { return 0.5 * xi * xi * nt + f->antideriv(xi) * nx; }
};

// Interior critical points of g on (lo, hi).
std::vector<double> critical_points(const Along& al, double lo, double hi) {
    std::vector<double> roots;
    scan_roots([&](double x) { return al.gp(x); }, lo, hi, 64, roots);
    std::vector<double> interior;
    for (double r : roots)
        if (r > lo && r < hi) interior.push_back(r);
    return interior;
}

// max over [lo, hi] of |g'|, with the location tagged 0 = at lo, 1 = at hi,
// 2 = interior/kink.
double max_abs_slope(const Along& al, double lo, double hi, int* where) {
    double best = std::abs(al.gp(lo));
    int loc = 0;
    const double at_hi = std::abs(al.gp(hi));
    if (at_hi > best) {
        best = at_hi;
        loc = 1;
    }
    std::vector<double> cand;
    if (!al.f->is_convex())
        scan_roots([&](double x) { return al.gpp(x); }, lo, hi, 64, cand);
    for (double k : al.f->deriv_kinks())
        if (k > lo && k < hi) cand.push_back(k);
    for (double u : cand) {
        const double v = std::abs(al.gp(u));
        if (v > best) {
            best = v;
            loc = 2;
        }
    }
    if (where) *where = loc;
    return best;
}

// int over [x0, x1] (x0 <= x1) of max(g', 0), via sign-constant subintervals.
double positive_part_integral(const Along& al, double x0, double x1) {
    std::vector<double> cuts{x0};
    std::vector<double> roots;
    scan_roots([&](double x) { return al.gp(x); }, x0, x1, 64, roots);
    for (double r : roots)
        if (r > x0 && r < x1) cuts.push_back(r);
    cuts.push_back(x1);
    std::sort(cuts.begin(), cuts.end());
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i], b = cuts[i + 1];
        if (al.gp(0.5 * (a + b)) > 0.0) sum += al.g(b) - al.g(a);
    }
    return sum;
}

}  // namespace

FluxDerivs NumericalFlux::value_and_derivs(double a, double b, double nu_t, double nu_x) const {
    const Along al{&flux_, nu_t, nu_x};
    FluxDerivs out;
    switch (kind_) {
        case NumericalFluxKind::TemporalUpwind: {
            if (std::abs(nu_x) > kTemporalTol || std::abs(std::abs(nu_t) - 1.0) > kTemporalTol)
                throw std::invalid_argument("TemporalUpwind: normal must be (+-1, 0)");
            // Upwind in time: the trace from the earlier side. With nu_t = +1
            // the owner sits below the facet, with nu_t = -1 the neighbor does.
            if (nu_t > 0.0) {
                out.value = nu_t * a;
                out.da = nu_t;
            } else {
                out.value = nu_t * b;
                out.db = nu_t;
            }
            return out;
        }
        case NumericalFluxKind::Central: {
            out.value = 0.5 * (al.g(a) + al.g(b));
            out.da = 0.5 * al.gp(a);
            out.db = 0.5 * al.gp(b);
            return out;
        }
        case NumericalFluxKind::LocalLaxFriedrichs: {
            const double lo = std::min(a, b), hi = std::max(a, b);
            int where = 0;
            const double lam = max_abs_slope(al, lo, hi, &where);
            out.value = 0.5 * (al.g(a) + al.g(b)) - 0.5 * lam * (b - a);
            // Envelope derivative of lam: nonzero only when the max sits at
            // the differentiated endpoint.
            double dlam_da = 0.0, dlam_db = 0.0;
            const bool a_is_lo = (a <= b);
            if (where == 0) {  // at lo
                const double s = (al.gp(lo) >= 0.0) ? 1.0 : -1.0;
                (a_is_lo ? dlam_da : dlam_db) = s * al.gpp(lo);
            } else if (where == 1) {
                const double s = (al.gp(hi) >= 0.0) ? 1.0 : -1.0;
                (a_is_lo ? dlam_db : dlam_da) = s * al.gpp(hi);
            }
            out.da = 0.5 * al.gp(a) + 0.5 * lam - 0.5 * dlam_da * (b - a);
            out.db = 0.5 * al.gp(b) - 0.5 * lam - 0.5 * dlam_db * (b - a);
            return out;
        }
        case NumericalFluxKind::EngquistOsher: {
            // hhat = g(0) + int_0^a (g')^+ + int_0^b (g')^-
            double val = al.g(0.0);
            if (a >= 0.0)
                val += positive_part_integral(al, 0.0, a);
            else
                val -= positive_part_integral(al, a, 0.0);
            // int_0^b min(g',0) = [g(b) - g(0)] - int_0^b max(g',0)
            double pos_b = (b >= 0.0) ? positive_part_integral(al, 0.0, b)
                                      : -positive_part_integral(al, b, 0.0);
            val += (al.g(b) - al.g(0.0)) - pos_b;
            out.value = val;
            out.da = std::max(al.gp(a), 0.0);
            out.db = std::min(al.gp(b), 0.0);
            return out;
        }
        case NumericalFluxKind::Godunov: {
            if (a == b) {
                out.value = al.g(a);
                out.da = al.gp(a);  // tie-break: attribute to the owner trace
                return out;
            }
            const double lo = std::min(a, b), hi = std::max(a, b);
            const auto crit = critical_points(al, lo, hi);
            const bool minimize = (a < b);
            double best = al.g(a);
            int arg = 0;  // 0 = a, 1 = b, 2 = interior
            const double at_b = al.g(b);
            if (minimize ? (at_b < best) : (at_b > best)) {
                best = at_b;
                arg = 1;
            }
            for (double c : crit) {
                const double v = al.g(c);
                if (minimize ? (v < best) : (v > best)) {
                    best = v;
                    arg = 2;
                }
            }
            out.value = best;
            if (arg == 0)
                out.da = al.gp(a);
            else if (arg == 1)
                out.db = al.gp(b);
            return out;
        }
    }
    return out;
}

double NumericalFlux::value(double a, double b, double nu_t, double nu_x) const {
    return value_and_derivs(a, b, nu_t, nu_x).value;
}

double NumericalFlux::dissipation_integral(double a, double b, double nu_t, double nu_x) const {
    const Along al{&flux_, nu_t, nu_x};
    const double h = value(a, b, nu_t, nu_x);
    return al.G(b) - al.G(a) - h * (b - a);
}

MonotonicityReport check_monotone(const NumericalFlux& flux, double box_lo, double box_hi,
                                  int n_samples) {
    if (n_samples < 2) throw std::invalid_argument("check_monotone: n_samples must be >= 2");
    MonotonicityReport rep;
    std::vector<std::array<double, 2>> normals;
    if (flux.kind() == NumericalFluxKind::TemporalUpwind) {
        normals = {{1.0, 0.0}, {-1.0, 0.0}};
    } else {
        for (double deg : {15.0, 45.0, 75.0, 90.0, 105.0, 135.0, 165.0}) {
            const double th = deg * M_PI / 180.0;
            normals.push_back({std::cos(th), std::sin(th)});
            normals.push_back({-std::cos(th), -std::sin(th)});
        }
    }
    const double step = (box_hi - box_lo) / (n_samples - 1);
    auto at = [&](int i) { return box_lo + i * step; };
    for (const auto& nu : normals) {
        for (int i = 0; i < n_samples; ++i) {
            for (int j = 0; j < n_samples; ++j) {
                const double h0 = flux.value(at(i), at(j), nu[0], nu[1]);
                if (i + 1 < n_samples) {
                    const double da = (flux.value(at(i + 1), at(j), nu[0], nu[1]) - h0) / step;
                    rep.min_da = std::min(rep.min_da, da);
                    if (da < -1e-10) ++rep.violations;
                    ++rep.samples;
                }
                if (j + 1 < n_samples) {
                    const double db = (flux.value(at(i), at(j + 1), nu[0], nu[1]) - h0) / step;
                    rep.max_db = std::max(rep.max_db, db);
                    if (db > 1e-10) ++rep.violations;
                    ++rep.samples;
                }
            }
        }
    }
    rep.pass = (rep.violations == 0);
    return rep;
}

}  // namespace stdg
