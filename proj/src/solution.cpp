#include "stdg/solution.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

#include "stdg/initial_data.hpp"

namespace stdg {

SlabTopTrace::SlabTopTrace(const DGSolution& sol, std::shared_ptr<const SimplexBasis> basis)
    : sol_(&sol), basis_(std::move(basis)), t_top_(sol.mesh->t_hi) {
    for (const Facet& f : sol.mesh->facets) {
        if (f.kind != FacetKind::TemporalInterface || f.neighbor != -1 || f.normal_t <= 0.0)
            continue;
        const double xa = sol.mesh->points[f.v[0]].x;
        const double xb = sol.mesh->points[f.v[1]].x;
        segments_.push_back({std::min(xa, xb), std::max(xa, xb), f.owner});
    }
    std::sort(segments_.begin(), segments_.end(),
              [](const Segment& a, const Segment& b) { return a.x0 < b.x0; });
    if (segments_.empty()) throw std::runtime_error("SlabTopTrace: mesh has no top facets");
}

double SlabTopTrace::operator()(double x) const {
    // Clamp to the covered range; transmissive extension beyond the ends.
    auto it = std::upper_bound(segments_.begin(), segments_.end(), x,
                               [](double v, const Segment& s) { return v < s.x0; });
    if (it != segments_.begin()) --it;
    return sol_->eval(*basis_, it->elem, {t_top_, x});
}

std::string InitialData::describe() const {
    char buf[128];
    switch (kind) {
        case Kind::Riemann:
            std::snprintf(buf, sizeof buf, "riemann(%g,%g,%g)", a, b, x0);
            break;
        case Kind::Bump:
            std::snprintf(buf, sizeof buf, "bump(%g,%g,%g)", center, width, height);
            break;
        case Kind::Sine:
            std::snprintf(buf, sizeof buf, "sine(%g,%g)", amp, period);
            break;
        case Kind::Constant:
            std::snprintf(buf, sizeof buf, "constant(%g)", value);
            break;
    }
    return buf;
}

}  // namespace stdg
