#include "stdg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>

#include "stdg/quadrature.hpp"

namespace stdg {

namespace {

constexpr double kNormalTol = 1e-12;

double tri_area(const SpaceTimePoint& a, const SpaceTimePoint& b, const SpaceTimePoint& c) {
    return 0.5 * ((b.t - a.t) * (c.x - a.x) - (c.t - a.t) * (b.x - a.x));
}

void add_element(SlabMesh& mesh, int v0, int v1, int v2) {
    TriElement e;
    e.v = {v0, v1, v2};
    const auto &a = mesh.points[v0], &b = mesh.points[v1], &c = mesh.points[v2];
    double area = tri_area(a, b, c);
    if (area < 0.0) {  // enforce counter-clockwise orientation
        std::swap(e.v[1], e.v[2]);
        area = -area;
    }
    if (!(area > 0.0)) throw std::invalid_argument("build_slab_mesh: collinear vertices");
    e.area = area;
    const double l0 = distance(mesh.points[e.v[0]], mesh.points[e.v[1]]);
    const double l1 = distance(mesh.points[e.v[1]], mesh.points[e.v[2]]);
    const double l2 = distance(mesh.points[e.v[2]], mesh.points[e.v[0]]);
    e.perimeter = l0 + l1 + l2;
    e.diameter = std::max({l0, l1, l2});
    mesh.elements.push_back(e);
}

void build_facets(SlabMesh& mesh) {
    // Local edge k of an element runs from vertex k to vertex (k+1) % 3;
    // for a CCW triangle the outward normal of edge (a -> b) is
    // (b.x - a.x, -(b.t - a.t)) / |e|.
    std::map<std::pair<int, int>, int> edge_to_facet;
    mesh.element_facets.assign(mesh.elements.size(), {-1, -1, -1});
    for (int ei = 0; ei < static_cast<int>(mesh.elements.size()); ++ei) {
        const auto& e = mesh.elements[ei];
        for (int k = 0; k < 3; ++k) {
            const int a = e.v[k], b = e.v[(k + 1) % 3];
            const auto key = std::minmax(a, b);
            auto it = edge_to_facet.find(key);
            if (it == edge_to_facet.end()) {
                Facet f;
                f.v = {a, b};
                f.owner = ei;
                const auto &pa = mesh.points[a], &pb = mesh.points[b];
                f.length = distance(pa, pb);
                f.normal_t = (pb.x - pa.x) / f.length;
                f.normal_x = -(pb.t - pa.t) / f.length;
                mesh.facets.push_back(f);
                const int fid = static_cast<int>(mesh.facets.size()) - 1;
                edge_to_facet.emplace(key, fid);
                mesh.element_facets[ei][k] = fid;
            } else {
                Facet& f = mesh.facets[it->second];
                if (f.neighbor != -1)
                    throw std::runtime_error("build_slab_mesh: facet shared by > 2 elements");
                f.neighbor = ei;
                mesh.element_facets[ei][k] = it->second;
            }
        }
    }
    for (Facet& f : mesh.facets) {
        if (std::abs(std::abs(f.normal_t) - 1.0) < kNormalTol && std::abs(f.normal_x) < kNormalTol)
            f.kind = FacetKind::TemporalInterface;
        else if (f.neighbor != -1)
            f.kind = FacetKind::Internal;
        else
            f.kind = FacetKind::SpatialBoundary;
    }
}

}  // namespace

SlabMesh build_slab_mesh(double x_lo, double x_hi, double t_lo, double t_hi, int n_x,
                         MeshPattern pattern) {
    if (!(x_lo < x_hi) || !(t_lo < t_hi))
        throw std::invalid_argument("build_slab_mesh: invalid bounds");
    if (n_x < 1) throw std::invalid_argument("build_slab_mesh: n_x must be >= 1");

    SlabMesh mesh;
    mesh.t_lo = t_lo;
    mesh.t_hi = t_hi;
    mesh.x_lo = x_lo;
    mesh.x_hi = x_hi;

    const double dx = (x_hi - x_lo) / n_x;
    auto x_of = [&](int i) { return (i == n_x) ? x_hi : x_lo + i * dx; };
    for (int i = 0; i <= n_x; ++i) mesh.points.push_back({t_lo, x_of(i)});
    for (int i = 0; i <= n_x; ++i) mesh.points.push_back({t_hi, x_of(i)});
    const int top = n_x + 1;

    for (int i = 0; i < n_x; ++i) {
        const int bl = i, br = i + 1, tl = top + i, tr = top + i + 1;
        if (pattern == MeshPattern::UniformDiagonal) {
            // diagonal from bottom-left to top-right
            add_element(mesh, bl, br, tr);
            add_element(mesh, bl, tr, tl);
        } else {
            const int c = static_cast<int>(mesh.points.size());
            mesh.points.push_back(
                {0.5 * (t_lo + t_hi), 0.5 * (mesh.points[bl].x + mesh.points[br].x)});
            add_element(mesh, bl, br, c);
            add_element(mesh, br, tr, c);
            add_element(mesh, tr, tl, c);
            add_element(mesh, tl, bl, c);
        }
    }
    build_facets(mesh);
    mesh.h = 0.0;
    for (const auto& e : mesh.elements) mesh.h = std::max(mesh.h, e.diameter);
    return mesh;
}

std::pair<double, double> shape_regularity(const SlabMesh& mesh) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (const auto& e : mesh.elements) {
        const double r = e.diameter * e.perimeter / e.area;
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    return {lo, hi};
}

std::vector<FacetTracePoint> facet_quadrature_trace(const SlabMesh& mesh, int facet_id,
                                                    TraceSide side, int order) {
    const Facet& f = mesh.facets.at(facet_id);
    if (side == TraceSide::Neighbor && f.neighbor == -1)
        throw std::invalid_argument("facet_quadrature_trace: facet has no neighbor");
    const int elem = (side == TraceSide::Owner) ? f.owner : f.neighbor;
    const AffineMap map = mesh.element_map(elem);
    const QuadratureRule rule = segment_rule(order);
    const auto &pa = mesh.points[f.v[0]], &pb = mesh.points[f.v[1]];
    std::vector<FacetTracePoint> out;
    out.reserve(rule.size());
    for (std::size_t n = 0; n < rule.size(); ++n) {
        const double s = rule.points[n][0];
        FacetTracePoint tp;
        tp.phys = {pa.t + s * (pb.t - pa.t), pa.x + s * (pb.x - pa.x)};
        const auto ref = map.invert(tp.phys);
        tp.xi = ref[0];
        tp.eta = ref[1];
        tp.weight = rule.weights[n] * f.length;
        out.push_back(tp);
    }
    return out;
}

void write_mesh(std::ostream& os, const SlabMesh& mesh) {
    char buf[128];
    for (std::size_t i = 0; i < mesh.points.size(); ++i) {
        std::snprintf(buf, sizeof buf, "point %zu %.17g %.17g\n", i, mesh.points[i].t,
                      mesh.points[i].x);
        os << buf;
    }
    for (std::size_t i = 0; i < mesh.elements.size(); ++i) {
        const auto& e = mesh.elements[i];
        std::snprintf(buf, sizeof buf, "tri %zu %d %d %d\n", i, e.v[0], e.v[1], e.v[2]);
        os << buf;
    }
}

}  // namespace stdg
