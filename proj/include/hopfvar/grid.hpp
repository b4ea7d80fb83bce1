#pragma once

#include <memory>
#include <vector>

#include "hopfvar/domain.hpp"

namespace hopfvar {

/// Uniform node-centered grid over the domain's bounding box with equal
/// spacing in both axes. Each masked node carries a quadrature weight:
/// the inside-area fraction of its h-by-h cell, plus the inside fractions
/// of adjacent unmasked cells reassigned to their nearest masked neighbor
/// so that the covered area tiles the domain up to boundary subsampling.
struct Grid {
    PlanarDomain domain;
    cplx origin;
    double spacing = 0;
    int nx = 0, ny = 0;
    std::vector<uint8_t> mask;   // nx*ny, 1 = node strictly inside domain
    std::vector<double> weight;  // nx*ny, quadrature cell-area fraction

    int index(int i, int j) const { return j * nx + i; }
    bool in_range(int i, int j) const { return i >= 0 && i < nx && j >= 0 && j < ny; }
    bool masked(int i, int j) const { return in_range(i, j) && mask[index(i, j)]; }
    cplx node(int i, int j) const {
        return origin + cplx(i * spacing, j * spacing);
    }
    size_t size() const { return static_cast<size_t>(nx) * ny; }
    size_t mask_count() const {
        size_t n = 0;
        for (uint8_t m : mask) n += m;
        return n;
    }
};

using GridPtr = std::shared_ptr<const Grid>;

namespace detail {

inline double inside_fraction(const PlanarDomain& dom, cplx node, double h) {
    // 4x4 midpoint subsamples of the cell centered at the node
    int hits = 0;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            const cplx p = node + cplx(((a + 0.5) / 4.0 - 0.5) * h, ((b + 0.5) / 4.0 - 0.5) * h);
            if (dom.inside(p)) ++hits;
        }
    return hits / 16.0;
}

} // namespace detail

inline GridPtr build_grid(const PlanarDomain& domain, int resolution) {
    if (resolution < 8) throw std::invalid_argument("resolution must be >= 8");
    const BBox box = domain.bounding_box();
    const double h = std::max(box.width(), box.height()) / resolution;

    auto g = std::make_shared<Grid>(Grid{domain, cplx(box.x0, box.y0), h, 0, 0, {}, {}});
    g->nx = static_cast<int>(std::floor(box.width() / h + 1e-9)) + 1;
    g->ny = static_cast<int>(std::floor(box.height() / h + 1e-9)) + 1;
    g->mask.assign(g->size(), 0);
    g->weight.assign(g->size(), 0.0);

    const double safe = h * 0.7071067811865476; // cell half-diagonal
    size_t count = 0;
    for (int j = 0; j < g->ny; ++j)
        for (int i = 0; i < g->nx; ++i) {
            const cplx p = g->node(i, j);
            const double sd = domain.signed_distance(p);
            if (sd > 0.0) {
                g->mask[g->index(i, j)] = 1;
                ++count;
                g->weight[g->index(i, j)] =
                    sd >= safe ? 1.0 : detail::inside_fraction(domain, p, h);
            }
        }
    if (count == 0) throw std::runtime_error("empty domain");

    // Reassign inside slivers under unmasked nodes to the nearest masked
    // neighbor (4-neighbors first, then diagonals).
    static const int di[8] = {1, -1, 0, 0, 1, 1, -1, -1};
    static const int dj[8] = {0, 0, 1, -1, 1, -1, 1, -1};
    for (int j = 0; j < g->ny; ++j)
        for (int i = 0; i < g->nx; ++i) {
            if (g->mask[g->index(i, j)]) continue;
            const cplx p = g->node(i, j);
            if (domain.signed_distance(p) <= -safe) continue;
            const double frac = detail::inside_fraction(domain, p, h);
            if (frac <= 0.0) continue;
            for (int k = 0; k < 8; ++k) {
                if (g->masked(i + di[k], j + dj[k])) {
                    g->weight[g->index(i + di[k], j + dj[k])] += frac;
                    break;
                }
            }
        }
    return g;
}

/// Midpoint-rule integral of a node field (defined on masked nodes).
inline double integrate(const std::vector<double>& field, const Grid& g) {
    if (field.size() != g.size()) throw std::invalid_argument("field size mismatch");
    double sum = 0.0;
    for (size_t k = 0; k < g.size(); ++k)
        if (g.mask[k]) sum += field[k] * g.weight[k];
    return sum * g.spacing * g.spacing;
}

} // namespace hopfvar
