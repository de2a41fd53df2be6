#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "stdg/geometry.hpp"

namespace stdg {

enum class FacetKind {
    Internal,           // shared by two elements of the slab, not time-orthogonal
    TemporalInterface,  // normal (+-1, 0): slab bottom/top
    SpatialBoundary,    // x = x_lo or x = x_hi
};

struct TriElement {
    std::array<int, 3> v{};  // vertex ids, counter-clockwise
    int slab_index = 0;
    double diameter = 0.0;   // h_kappa: longest edge
    double area = 0.0;
    double perimeter = 0.0;
};

struct Facet {
    std::array<int, 2> v{};
    int owner = -1;
    int neighbor = -1;       // -1 on mesh boundary
    double normal_t = 0.0;   // unit outward normal w.r.t. the owner
    double normal_x = 0.0;
    FacetKind kind = FacetKind::Internal;
    double length = 0.0;
};

enum class MeshPattern { CrissCross, UniformDiagonal };

struct SlabMesh {
    std::vector<SpaceTimePoint> points;
    std::vector<TriElement> elements;
    std::vector<Facet> facets;
    std::vector<std::array<int, 3>> element_facets;  // facet ids per element
    double t_lo = 0.0, t_hi = 0.0;
    double x_lo = 0.0, x_hi = 0.0;
    double h = 0.0;  // max element diameter

    AffineMap element_map(int elem) const {
        const auto& e = elements[elem];
        return make_affine_map(points[e.v[0]], points[e.v[1]], points[e.v[2]]);
    }
};

// Conforming triangulation of the slab [t_lo, t_hi] x [x_lo, x_hi] with n_x
// columns. UniformDiagonal splits each column cell into 2 triangles,
// CrissCross into 4 around the cell centroid.
SlabMesh build_slab_mesh(double x_lo, double x_hi, double t_lo, double t_hi, int n_x,
                         MeshPattern pattern);

// Min/max over elements of h_kappa |boundary kappa| / |kappa|.
std::pair<double, double> shape_regularity(const SlabMesh& mesh);

enum class TraceSide { Owner, Neighbor };

struct FacetTracePoint {
    double xi = 0.0, eta = 0.0;  // element-local reference coordinates
    double weight = 0.0;         // physical arclength weight
    SpaceTimePoint phys;
};

// Quadrature points of a facet, expressed in the local coordinates of the
// element on the requested side. Owner and neighbor points coincide
// physically, enabling two-sided trace evaluation.
std::vector<FacetTracePoint> facet_quadrature_trace(const SlabMesh& mesh, int facet_id,
                                                    TraceSide side, int order);

// Plain-text dump: "point <id> <t> <x>" and "tri <id> <v0> <v1> <v2>" records.
void write_mesh(std::ostream& os, const SlabMesh& mesh);

}  // namespace stdg
