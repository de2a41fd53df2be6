#include "stdg/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>

#include "stdg/quadrature.hpp"

namespace stdg {

int solver_quad_order(int degree, const FluxFunction& flux) {
    const int fd = flux.poly_degree();
    if (fd >= 0) return std::max(3 * degree + 2, 2 * degree + fd);
    return 3 * degree + 4;  // non-polynomial flux: elevated, not exact
}

// ---------------------------------------------------------------------------
// Assembly tables

struct SlabAssembly::Impl {
    const SlabMesh* mesh;
    const SimplexBasis* basis;
    FluxFunction flux;
    NumericalFlux spatial;
    NumericalFlux temporal;
    int dim = 0;
    int quad_order = 0;

    QuadratureRule vol;
    Eigen::MatrixXd vol_val, vol_dxi, vol_deta;  // nodes x dim, reference tables

    std::vector<AffineMap> maps;
    std::vector<double> det;    // 2 |kappa|
    std::vector<double> scale;  // 1 / sqrt(det)

    struct FacetData {
        std::vector<double> w;
        std::vector<SpaceTimePoint> phys;
        Eigen::MatrixXd own_val;  // normalized owner basis values, nodes x dim
        Eigen::MatrixXd nei_val;  // normalized neighbor values (internal only)
    };
    std::vector<FacetData> fd;

    Impl(const SlabMesh& m, const SimplexBasis& b, const FluxFunction& f, NumericalFluxKind kind)
        : mesh(&m),
          basis(&b),
          flux(f),
          spatial(kind, f),
          temporal(NumericalFluxKind::TemporalUpwind, f) {
        dim = b.dim();
        quad_order = solver_quad_order(b.degree(), f);
        vol = triangle_rule(quad_order);
        const int nv = static_cast<int>(vol.size());
        vol_val.resize(nv, dim);
        vol_dxi.resize(nv, dim);
        vol_deta.resize(nv, dim);
        for (int n = 0; n < nv; ++n) {
            vol_val.row(n) = b.eval(vol.points[n][0], vol.points[n][1]);
            const Eigen::MatrixXd g = b.eval_ref_grad(vol.points[n][0], vol.points[n][1]);
            vol_dxi.row(n) = g.col(0);
            vol_deta.row(n) = g.col(1);
        }
        const int ne = static_cast<int>(m.elements.size());
        maps.reserve(ne);
        det.resize(ne);
        scale.resize(ne);
        for (int e = 0; e < ne; ++e) {
            maps.push_back(m.element_map(e));
            det[e] = std::abs(maps[e].det);
            scale[e] = 1.0 / std::sqrt(det[e]);
        }
        fd.resize(m.facets.size());
        for (std::size_t i = 0; i < m.facets.size(); ++i) {
            const Facet& f2 = m.facets[i];
            const auto own = facet_quadrature_trace(m, static_cast<int>(i), TraceSide::Owner,
                                                    quad_order);
            FacetData& d = fd[i];
            const int nn = static_cast<int>(own.size());
            d.w.resize(nn);
            d.phys.resize(nn);
            d.own_val.resize(nn, dim);
            for (int n = 0; n < nn; ++n) {
                d.w[n] = own[n].weight;
                d.phys[n] = own[n].phys;
                d.own_val.row(n) = b.eval(own[n].xi, own[n].eta) * scale[f2.owner];
            }
            if (f2.neighbor != -1) {
                const auto nei = facet_quadrature_trace(m, static_cast<int>(i),
                                                        TraceSide::Neighbor, quad_order);
                d.nei_val.resize(nn, dim);
                for (int n = 0; n < nn; ++n)
                    d.nei_val.row(n) = b.eval(nei[n].xi, nei[n].eta) * scale[f2.neighbor];
            }
        }
    }

    // Physical gradient of normalized mode i at volume node n of element e.
    inline void phys_grad(int e, int n, int i, double& gt, double& gx) const {
        const auto g = maps[e].grad_to_physical(vol_dxi(n, i), vol_deta(n, i));
        gt = g[0] * scale[e];
        gx = g[1] * scale[e];
    }

    // Is this boundary temporal facet the slab bottom?
    static bool is_bottom(const Facet& f) { return f.normal_t < 0.0; }
};

SlabAssembly::SlabAssembly(const SlabMesh& mesh, const SimplexBasis& basis,
                           const FluxFunction& flux, NumericalFluxKind num_flux)
    : mesh_(&mesh), impl_(std::make_shared<Impl>(mesh, basis, flux, num_flux)) {}

int SlabAssembly::n_dofs() const {
    return static_cast<int>(mesh_->elements.size()) * impl_->dim;
}

std::vector<double> SlabAssembly::viscosities(const Eigen::MatrixXd& coeffs,
                                              const PointwiseFn& prev,
                                              const ViscosityParams& params,
                                              double h_global) const {
    const Impl& im = *impl_;
    const int ne = static_cast<int>(mesh_->elements.size());
    std::vector<double> divint(ne, 0.0), jumpint(ne, 0.0);
    const SpaceTimeFlux stf(im.flux);
    for (int e = 0; e < ne; ++e) {
        const Eigen::VectorXd c = coeffs.row(e);
        for (std::size_t n = 0; n < im.vol.size(); ++n) {
            double u = 0.0, ut = 0.0, ux = 0.0;
            for (int i = 0; i < im.dim; ++i) {
                u += c[i] * im.vol_val(static_cast<int>(n), i) * im.scale[e];
                double gt, gx;
                im.phys_grad(e, static_cast<int>(n), i, gt, gx);
                ut += c[i] * gt;
                ux += c[i] * gx;
            }
            const double div = ut + im.flux.deriv(u) * ux;
            divint[e] += im.vol.weights[n] * im.det[e] * std::abs(div);
        }
    }
    for (std::size_t fi = 0; fi < mesh_->facets.size(); ++fi) {
        const Facet& f = mesh_->facets[fi];
        const auto& d = im.fd[fi];
        if (f.neighbor != -1) {
            double s = 0.0;
            for (std::size_t n = 0; n < d.w.size(); ++n) {
                const double a = d.own_val.row(n).dot(coeffs.row(f.owner));
                const double b = d.nei_val.row(n).dot(coeffs.row(f.neighbor));
                s += d.w[n] * std::abs(a - b);
            }
            jumpint[f.owner] += s;
            jumpint[f.neighbor] += s;
        } else if (f.kind == FacetKind::TemporalInterface && Impl::is_bottom(f) &&
                   params.include_temporal_jumps) {
            double s = 0.0;
            for (std::size_t n = 0; n < d.w.size(); ++n) {
                const double a = d.own_val.row(n).dot(coeffs.row(f.owner));
                s += d.w[n] * std::abs(a - prev(d.phys[n].x));
            }
            jumpint[f.owner] += s;
        }
        // Slab top: the later slab does not exist yet. Spatial boundary:
        // transmissive exterior, zero jump.
    }
    std::vector<double> eps(ne);
    for (int e = 0; e < ne; ++e) {
        const double h = params.local_h ? mesh_->elements[e].diameter : h_global;
        eps[e] = element_viscosity(divint[e], jumpint[e], mesh_->elements[e].area, h, params);
    }
    return eps;
}

Eigen::VectorXd SlabAssembly::residual(const Eigen::MatrixXd& coeffs, const PointwiseFn& prev,
                                       const std::vector<double>& eps) const {
    const Impl& im = *impl_;
    const int ne = static_cast<int>(mesh_->elements.size());
    Eigen::VectorXd r = Eigen::VectorXd::Zero(n_dofs());

    for (int e = 0; e < ne; ++e) {
        const Eigen::VectorXd c = coeffs.row(e);
        for (std::size_t n = 0; n < im.vol.size(); ++n) {
            const int ni = static_cast<int>(n);
            double u = 0.0, ut = 0.0, ux = 0.0;
            for (int i = 0; i < im.dim; ++i) {
                double gt, gx;
                im.phys_grad(e, ni, i, gt, gx);
                u += c[i] * im.vol_val(ni, i) * im.scale[e];
                ut += c[i] * gt;
                ux += c[i] * gx;
            }
            const double w = im.vol.weights[n] * im.det[e];
            const double div = ut + im.flux.deriv(u) * ux;
            for (int i = 0; i < im.dim; ++i) {
                double gt, gx;
                im.phys_grad(e, ni, i, gt, gx);
                r[e * im.dim + i] += w * (div * im.vol_val(ni, i) * im.scale[e] +
                                          eps[e] * (ut * gt + ux * gx));
            }
        }
    }

    const SpaceTimeFlux stf(im.flux);
    for (std::size_t fi = 0; fi < mesh_->facets.size(); ++fi) {
        const Facet& f = mesh_->facets[fi];
        const auto& d = im.fd[fi];
        if (f.neighbor != -1) {
            const NumericalFlux& nf =
                (f.kind == FacetKind::TemporalInterface) ? im.temporal : im.spatial;
            for (std::size_t n = 0; n < d.w.size(); ++n) {
                const double a = d.own_val.row(n).dot(coeffs.row(f.owner));
                const double b = d.nei_val.row(n).dot(coeffs.row(f.neighbor));
                const double h = nf.value(a, b, f.normal_t, f.normal_x);
                const double ga = stf.dot_normal(a, f.normal_t, f.normal_x);
                const double gb = stf.dot_normal(b, f.normal_t, f.normal_x);
                for (int i = 0; i < im.dim; ++i) {
                    r[f.owner * im.dim + i] += d.w[n] * (h - ga) * d.own_val(static_cast<int>(n), i);
                    r[f.neighbor * im.dim + i] +=
                        d.w[n] * (gb - h) * d.nei_val(static_cast<int>(n), i);
                }
            }
        } else if (f.kind == FacetKind::TemporalInterface && Impl::is_bottom(f)) {
            // Pure temporal upwinding against the previous slab (or u0):
            // hhat - ftilde(u+) . nu = u+ - u- with nu = (-1, 0).
            for (std::size_t n = 0; n < d.w.size(); ++n) {
                const double a = d.own_val.row(n).dot(coeffs.row(f.owner));
                const double p = prev(d.phys[n].x);
                for (int i = 0; i < im.dim; ++i)
                    r[f.owner * im.dim + i] +=
                        d.w[n] * (a - p) * d.own_val(static_cast<int>(n), i);
            }
        }
        // Slab top: upwinding from inside, hhat - ftilde(u) . nu = 0.
        // Spatial boundary: transmissive exterior trace, hhat = ftilde(u) . nu.
    }
    return r;
}

Eigen::VectorXd SlabAssembly::sc_residual(const Eigen::MatrixXd& coeffs,
                                          const std::vector<double>& eps) const {
    const Impl& im = *impl_;
    Eigen::VectorXd r = Eigen::VectorXd::Zero(n_dofs());
    for (int e = 0; e < static_cast<int>(mesh_->elements.size()); ++e) {
        const Eigen::VectorXd c = coeffs.row(e);
        for (std::size_t n = 0; n < im.vol.size(); ++n) {
            const int ni = static_cast<int>(n);
            double ut = 0.0, ux = 0.0;
            for (int i = 0; i < im.dim; ++i) {
                double gt, gx;
                im.phys_grad(e, ni, i, gt, gx);
                ut += c[i] * gt;
                ux += c[i] * gx;
            }
            const double w = im.vol.weights[n] * im.det[e] * eps[e];
            for (int i = 0; i < im.dim; ++i) {
                double gt, gx;
                im.phys_grad(e, ni, i, gt, gx);
                r[e * im.dim + i] += w * (ut * gt + ux * gx);
            }
        }
    }
    return r;
}

Eigen::SparseMatrix<double> SlabAssembly::jacobian(const Eigen::MatrixXd& coeffs,
                                                   const PointwiseFn& prev,
                                                   const std::vector<double>& eps) const {
    const Impl& im = *impl_;
    const int ne = static_cast<int>(mesh_->elements.size());
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(ne) * im.dim * im.dim * 4);

    std::vector<double> gt(im.dim), gx(im.dim);
    for (int e = 0; e < ne; ++e) {
        const Eigen::VectorXd c = coeffs.row(e);
        Eigen::MatrixXd block = Eigen::MatrixXd::Zero(im.dim, im.dim);
        for (std::size_t n = 0; n < im.vol.size(); ++n) {
            const int ni = static_cast<int>(n);
            double u = 0.0, ut = 0.0, ux = 0.0;
            for (int i = 0; i < im.dim; ++i) {
                im.phys_grad(e, ni, i, gt[i], gx[i]);
                u += c[i] * im.vol_val(ni, i) * im.scale[e];
                ut += c[i] * gt[i];
                ux += c[i] * gx[i];
            }
            const double w = im.vol.weights[n] * im.det[e];
            const double fp = im.flux.deriv(u), fpp = im.flux.deriv2(u);
            for (int j = 0; j < im.dim; ++j) {
                const double phij = im.vol_val(ni, j) * im.scale[e];
                const double ddiv = gt[j] + fpp * phij * ux + fp * gx[j];
                for (int i = 0; i < im.dim; ++i) {
                    block(i, j) += w * (ddiv * im.vol_val(ni, i) * im.scale[e] +
                                        eps[e] * (gt[j] * gt[i] + gx[j] * gx[i]));
                }
            }
        }
        for (int i = 0; i < im.dim; ++i)
            for (int j = 0; j < im.dim; ++j)
                trip.emplace_back(e * im.dim + i, e * im.dim + j, block(i, j));
    }

    const SpaceTimeFlux stf(im.flux);
    for (std::size_t fi = 0; fi < mesh_->facets.size(); ++fi) {
        const Facet& f = mesh_->facets[fi];
        const auto& d = im.fd[fi];
        if (f.neighbor != -1) {
            const NumericalFlux& nf =
                (f.kind == FacetKind::TemporalInterface) ? im.temporal : im.spatial;
            for (std::size_t n = 0; n < d.w.size(); ++n) {
                const int ni = static_cast<int>(n);
                const double a = d.own_val.row(ni).dot(coeffs.row(f.owner));
                const double b = d.nei_val.row(ni).dot(coeffs.row(f.neighbor));
                const auto hd = nf.value_and_derivs(a, b, f.normal_t, f.normal_x);
                const double gpa = stf.slope_along(a, f.normal_t, f.normal_x);
                const double gpb = stf.slope_along(b, f.normal_t, f.normal_x);
                for (int i = 0; i < im.dim; ++i) {
                    const double wi_own = d.w[n] * d.own_val(ni, i);
                    const double wi_nei = d.w[n] * d.nei_val(ni, i);
                    for (int j = 0; j < im.dim; ++j) {
                        const double pa = d.own_val(ni, j);
                        const double pb = d.nei_val(ni, j);
                        trip.emplace_back(f.owner * im.dim + i, f.owner * im.dim + j,
                                          wi_own * (hd.da - gpa) * pa);
                        trip.emplace_back(f.owner * im.dim + i, f.neighbor * im.dim + j,
                                          wi_own * hd.db * pb);
                        trip.emplace_back(f.neighbor * im.dim + i, f.owner * im.dim + j,
                                          -wi_nei * hd.da * pa);
                        trip.emplace_back(f.neighbor * im.dim + i, f.neighbor * im.dim + j,
                                          wi_nei * (gpb - hd.db) * pb);
                    }
                }
            }
        } else if (f.kind == FacetKind::TemporalInterface && Impl::is_bottom(f)) {
            for (std::size_t n = 0; n < d.w.size(); ++n) {
                const int ni = static_cast<int>(n);
                for (int i = 0; i < im.dim; ++i)
                    for (int j = 0; j < im.dim; ++j)
                        trip.emplace_back(f.owner * im.dim + i, f.owner * im.dim + j,
                                          d.w[n] * d.own_val(ni, j) * d.own_val(ni, i));
            }
        }
    }

    Eigen::SparseMatrix<double> jac(n_dofs(), n_dofs());
    jac.setFromTriplets(trip.begin(), trip.end());
    return jac;
}

SlabBalance SlabAssembly::balance(const Eigen::MatrixXd& coeffs, const PointwiseFn& prev,
                                  const std::vector<double>& eps) const {
    const Impl& im = *impl_;
    const SpaceTimeFlux stf(im.flux);
    SlabBalance out;

    for (int e = 0; e < static_cast<int>(mesh_->elements.size()); ++e) {
        const Eigen::VectorXd c = coeffs.row(e);
        for (std::size_t n = 0; n < im.vol.size(); ++n) {
            const int ni = static_cast<int>(n);
            double u = 0.0, ut = 0.0, ux = 0.0;
            for (int i = 0; i < im.dim; ++i) {
                double gt, gx;
                im.phys_grad(e, ni, i, gt, gx);
                u += c[i] * im.vol_val(ni, i) * im.scale[e];
                ut += c[i] * gt;
                ux += c[i] * gx;
            }
            out.sc_dissipation += im.vol.weights[n] * im.det[e] * eps[e] * (ut * ut + ux * ux);
            out.sup_abs = std::max(out.sup_abs, std::abs(u));
        }
    }
    // Vertex values for the sup norm.
    for (int e = 0; e < static_cast<int>(mesh_->elements.size()); ++e) {
        const std::array<std::array<double, 2>, 3> refc = {{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}}};
        for (const auto& rc : refc) {
            const double u =
                im.basis->eval(rc[0], rc[1]).dot(coeffs.row(e)) * im.scale[e];
            out.sup_abs = std::max(out.sup_abs, std::abs(u));
        }
    }

    for (std::size_t fi = 0; fi < mesh_->facets.size(); ++fi) {
        const Facet& f = mesh_->facets[fi];
        const auto& d = im.fd[fi];
        if (f.neighbor != -1) {
            if (f.kind == FacetKind::TemporalInterface) {
                // Pure upwinding dissipates half the squared jump.
                for (std::size_t n = 0; n < d.w.size(); ++n) {
                    const double a = d.own_val.row(n).dot(coeffs.row(f.owner));
                    const double b = d.nei_val.row(n).dot(coeffs.row(f.neighbor));
                    out.bottom_jump_halfsq += 0.5 * d.w[n] * (a - b) * (a - b);
                }
                continue;
            }
            double disc = 0.0;
            for (std::size_t n = 0; n < d.w.size(); ++n) {
                const double a = d.own_val.row(n).dot(coeffs.row(f.owner));
                const double b = d.nei_val.row(n).dot(coeffs.row(f.neighbor));
                const double h = im.spatial.value(a, b, f.normal_t, f.normal_x);
                const double diff = stf.antideriv_along(b, f.normal_t, f.normal_x) -
                                    stf.antideriv_along(a, f.normal_t, f.normal_x) -
                                    h * (b - a);
                disc += d.w[n] * diff;
                out.sup_abs = std::max({out.sup_abs, std::abs(a), std::abs(b)});
            }
            out.interface_dissipation += disc;
            out.min_interface_facet = std::min(out.min_interface_facet, disc);
        } else if (f.kind == FacetKind::TemporalInterface) {
            if (Impl::is_bottom(f)) {
                for (std::size_t n = 0; n < d.w.size(); ++n) {
                    const double a = d.own_val.row(n).dot(coeffs.row(f.owner));
                    const double p = prev(d.phys[n].x);
                    out.bottom_jump_halfsq += 0.5 * d.w[n] * (a - p) * (a - p);
                    out.bottom_prev_halfsq += 0.5 * d.w[n] * p * p;
                    out.bottom_prev_mass += d.w[n] * p;
                }
            } else {
                for (std::size_t n = 0; n < d.w.size(); ++n) {
                    const double a = d.own_val.row(n).dot(coeffs.row(f.owner));
                    out.top_halfsq += 0.5 * d.w[n] * a * a;
                    out.top_mass += d.w[n] * a;
                    out.sup_abs = std::max(out.sup_abs, std::abs(a));
                }
            }
        } else {  // spatial boundary, transmissive
            for (std::size_t n = 0; n < d.w.size(); ++n) {
                const double a = d.own_val.row(n).dot(coeffs.row(f.owner));
                const double q_entropy = 0.5 * a * a * f.normal_t +
                                         (a * im.flux.value(a) - im.flux.antideriv(a)) *
                                             f.normal_x;
                out.boundary_entropy_outflux += d.w[n] * q_entropy;
                out.boundary_mass_outflux +=
                    d.w[n] * stf.dot_normal(a, f.normal_t, f.normal_x);
                out.sup_abs = std::max(out.sup_abs, std::abs(a));
            }
        }
    }
    return out;
}

Eigen::MatrixXd SlabAssembly::project_pointwise(const PointwiseFn& fn) const {
    const Impl& im = *impl_;
    const int ne = static_cast<int>(mesh_->elements.size());
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(ne, im.dim);
    for (int e = 0; e < ne; ++e) {
        for (std::size_t n = 0; n < im.vol.size(); ++n) {
            const double w = im.vol.weights[n] * im.det[e];
            const double v = fn(im.maps[e].apply(im.vol.points[n][0], im.vol.points[n][1]).x);
            for (int i = 0; i < im.dim; ++i)
                c(e, i) += w * v * im.vol_val(static_cast<int>(n), i) * im.scale[e];
        }
    }
    return c;
}

double SlabAssembly::divflux_sq_integral(const Eigen::MatrixXd& coeffs) const {
    const Impl& im = *impl_;
    double total = 0.0;
    for (int e = 0; e < static_cast<int>(mesh_->elements.size()); ++e) {
        const Eigen::VectorXd c = coeffs.row(e);
        for (std::size_t n = 0; n < im.vol.size(); ++n) {
            const int ni = static_cast<int>(n);
            double u = 0.0, ut = 0.0, ux = 0.0;
            for (int i = 0; i < im.dim; ++i) {
                double gt, gx;
                im.phys_grad(e, ni, i, gt, gx);
                u += c[i] * im.vol_val(ni, i) * im.scale[e];
                ut += c[i] * gt;
                ux += c[i] * gx;
            }
            const double div = ut + im.flux.deriv(u) * ux;
            total += im.vol.weights[n] * im.det[e] * div * div;
        }
    }
    return total;
}

// ---------------------------------------------------------------------------
// Newton / Picard slab solve

namespace {

double relative_eps_change(const std::vector<double>& a, const std::vector<double>& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num = std::max(num, std::abs(a[i] - b[i]));
        den = std::max({den, std::abs(a[i]), std::abs(b[i])});
    }
    if (den == 0.0) return 0.0;
    return num / den;
}

// One damped Newton solve at frozen viscosity. Returns iteration count.
int newton_solve(const SlabAssembly& asmb, Eigen::MatrixXd& coeffs, const PointwiseFn& prev,
                 const std::vector<double>& eps, const NewtonSettings& ns,
                 std::vector<double>& history) {
    const int dim = coeffs.cols();
    Eigen::VectorXd r = asmb.residual(coeffs, prev, eps);
    double rnorm = r.lpNorm<Eigen::Infinity>();
    history.push_back(rnorm);
    int iters = 0;
    while (rnorm > ns.abs_tol) {
        if (iters >= ns.max_iter)
            throw NonConvergenceError("Newton: max iterations exceeded", history);
        const Eigen::SparseMatrix<double> jac = asmb.jacobian(coeffs, prev, eps);
        Eigen::VectorXd step;
        if (ns.iterative_linear) {
            Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>> krylov;
            krylov.setTolerance(ns.linear_tol);
            krylov.compute(jac);
            step = krylov.solve(-r);
            if (krylov.info() != Eigen::Success)
                throw NonConvergenceError("Newton: Krylov solver failed", history);
        } else {
            Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
            lu.compute(jac);
            if (lu.info() != Eigen::Success)
                throw NonConvergenceError("Newton: singular Jacobian", history);
            step = lu.solve(-r);
        }
        double alpha = 1.0;
        bool accepted = false;
        while (alpha >= ns.min_step) {
            Eigen::MatrixXd trial = coeffs;
            for (int e = 0; e < coeffs.rows(); ++e)
                trial.row(e) += alpha * step.segment(e * dim, dim).transpose();
            const Eigen::VectorXd rt = asmb.residual(trial, prev, eps);
            const double rtnorm = rt.lpNorm<Eigen::Infinity>();
            if (rtnorm < rnorm || rtnorm <= ns.abs_tol) {
                coeffs = trial;
                r = rt;
                rnorm = rtnorm;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        ++iters;
        history.push_back(rnorm);
        if (!accepted)
            throw NonConvergenceError("Newton: backtracking stalled", history);
    }
    return iters;
}

}  // namespace

DGSolution solve_slab(std::shared_ptr<const SlabMesh> mesh, const SimplexBasis& basis,
                      const RunSetup& setup, const PointwiseFn& prev, double h_global,
                      SlabStats* stats) {
    setup.newton.validate();
    setup.viscosity.validate();
    const SlabAssembly asmb(*mesh, basis, setup.flux, setup.num_flux);

    DGSolution sol;
    sol.mesh = mesh;
    sol.degree = basis.degree();
    sol.coeffs = asmb.project_pointwise(prev);

    std::vector<double> history;
    std::vector<double> eps_used;
    double eps_change = 0.0;
    int sweeps = 0;
    for (int s = 0; s < setup.newton.picard_sweeps; ++s) {
        std::vector<double> eps =
            asmb.viscosities(sol.coeffs, prev, setup.viscosity, h_global);
        if (s > 0) {
            eps_change = relative_eps_change(eps, eps_used);
            if (eps_change <= setup.newton.picard_tol) break;
        }
        const int iters = newton_solve(asmb, sol.coeffs, prev, eps, setup.newton, history);
        eps_used = std::move(eps);
        ++sweeps;
        if (stats) stats->newton_iters.push_back(iters);
    }
    sol.viscosity = std::move(eps_used);
    if (stats) {
        stats->t_lo = mesh->t_lo;
        stats->t_hi = mesh->t_hi;
        stats->sweeps = sweeps;
        stats->eps_change = eps_change;
        stats->eps_max = sol.viscosity.empty()
                             ? 0.0
                             : *std::max_element(sol.viscosity.begin(), sol.viscosity.end());
    }
    return sol;
}

PointwiseFn RunState::prev_trace(int slab) const {
    if (slab == 0) return initial_fn();
    auto trace = std::make_shared<SlabTopTrace>(slabs[slab - 1], basis);
    return [trace](double x) { return (*trace)(x); };
}

RunState advance(const RunSetup& setup, double t_final) {
    if (!(t_final > 0.0)) throw std::invalid_argument("advance: T must be positive");
    RunState run;
    run.setup = setup;
    run.setup.t_final = t_final;
    run.basis = std::make_shared<SimplexBasis>(setup.degree);

    // Slab heights: cell width by default, so h shrinks uniformly.
    std::vector<double> times{0.0};
    if (setup.n_slabs > 0) {
        for (int n = 1; n <= setup.n_slabs; ++n)
            times.push_back(t_final * n / setup.n_slabs);
    } else {
        const double dt = (setup.x_hi - setup.x_lo) / setup.n_x;
        double t = 0.0;
        while (t < t_final - 1e-12 * t_final) {
            t = std::min(t + dt, t_final);
            times.push_back(t);
        }
    }

    std::vector<std::shared_ptr<const SlabMesh>> meshes;
    run.h_global = 0.0;
    for (std::size_t n = 0; n + 1 < times.size(); ++n) {
        auto m = std::make_shared<SlabMesh>(build_slab_mesh(
            setup.x_lo, setup.x_hi, times[n], times[n + 1], setup.n_x, setup.pattern));
        run.h_global = std::max(run.h_global, m->h);
        meshes.push_back(std::move(m));
    }

    PointwiseFn prev = run.initial_fn();
    for (std::size_t n = 0; n < meshes.size(); ++n) {
        SlabStats st;
        try {
            run.slabs.push_back(
                solve_slab(meshes[n], *run.basis, run.setup, prev, run.h_global, &st));
            run.stats.push_back(st);
        } catch (const NonConvergenceError&) {
            // Halve the slab once, then give up.
            const double t0 = meshes[n]->t_lo, t1 = meshes[n]->t_hi;
            const double tm = 0.5 * (t0 + t1);
            for (const auto& [lo, hi] : {std::pair{t0, tm}, std::pair{tm, t1}}) {
                auto half = std::make_shared<SlabMesh>(
                    build_slab_mesh(setup.x_lo, setup.x_hi, lo, hi, setup.n_x, setup.pattern));
                SlabStats hst;
                run.slabs.push_back(
                    solve_slab(half, *run.basis, run.setup, prev, run.h_global, &hst));
                run.stats.push_back(hst);
                prev = run.prev_trace(static_cast<int>(run.slabs.size()));
            }
            continue;
        }
        prev = run.prev_trace(static_cast<int>(run.slabs.size()));
    }
    return run;
}

}  // namespace stdg
