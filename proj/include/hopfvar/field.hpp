#pragma once

#include <functional>

#include "hopfvar/grid.hpp"

namespace hopfvar {

using MapClosure = std::function<cplx(cplx)>;
/// Exact derivative closure: z -> (f_z, f_zbar).
using JetClosure = std::function<void(cplx, cplx&, cplx&)>;

/// Complex field sampled on the masked nodes of a grid. The optional
/// closures are used for exact off-grid resampling (compositions) and,
/// when present, to bypass finite differences entirely.
struct SampledMap {
    GridPtr grid;
    std::vector<cplx> values; // size grid->size(), defined on masked nodes
    MapClosure closure;       // optional
    JetClosure jet_closure;   // optional
};

inline SampledMap sample(GridPtr grid, const MapClosure& f, JetClosure jet = {}) {
    SampledMap m{std::move(grid), {}, f, std::move(jet)};
    m.values.assign(m.grid->size(), cplx(0, 0));
    for (int j = 0; j < m.grid->ny; ++j)
        for (int i = 0; i < m.grid->nx; ++i)
            if (m.grid->masked(i, j)) m.values[m.grid->index(i, j)] = f(m.grid->node(i, j));
    return m;
}

enum class DiffOrder { second, fourth };

enum class NodeStatus : uint8_t {
    absent = 0,   // no jet at this node
    low_order,    // one-sided difference in at least one direction
    central,      // 2nd-order central in both directions
    central4      // 4th-order central in both directions
};

/// Per-node Wirtinger derivatives f_z = (f_x - i f_y)/2, f_zbar = (f_x + i f_y)/2.
struct WirtingerJet {
    GridPtr grid;
    std::vector<cplx> f, fz, fzb;
    std::vector<NodeStatus> status;

    bool has(int k) const { return status[k] != NodeStatus::absent; }
    bool interior(int k) const {
        return status[k] == NodeStatus::central || status[k] == NodeStatus::central4;
    }
};

namespace detail {

// 1-D derivative along one axis. Returns the achieved stencil quality:
// 0 none, 1 one-sided, 2 central 2nd order, 3 central 4th order.
inline int axis_derivative(const Grid& g, const std::vector<cplx>& v, int i, int j, int si,
                           int sj, double h, DiffOrder order, cplx& out) {
    auto val = [&](int s) { return v[g.index(i + s * si, j + s * sj)]; };
    auto ok = [&](int s) { return g.masked(i + s * si, j + s * sj); };
    if (order == DiffOrder::fourth && ok(1) && ok(-1) && ok(2) && ok(-2)) {
        out = (-val(2) + 8.0 * val(1) - 8.0 * val(-1) + val(-2)) / (12.0 * h);
        return 3;
    }
    if (ok(1) && ok(-1)) {
        out = (val(1) - val(-1)) / (2.0 * h);
        return 2;
    }
    if (ok(1) && ok(2)) {
        out = (-3.0 * val(0) + 4.0 * val(1) - val(2)) / (2.0 * h);
        return 1;
    }
    if (ok(-1) && ok(-2)) {
        out = (3.0 * val(0) - 4.0 * val(-1) + val(-2)) / (2.0 * h);
        return 1;
    }
    if (ok(1)) {
        out = (val(1) - val(0)) / h;
        return 1;
    }
    if (ok(-1)) {
        out = (val(0) - val(-1)) / h;
        return 1;
    }
    return 0;
}

} // namespace detail

/// Finite-difference Wirtinger jet (always discrete, independent of any
/// analytic closures the map may carry).
inline WirtingerJet wirtinger(const SampledMap& m, DiffOrder order = DiffOrder::second) {
    const Grid& g = *m.grid;
    WirtingerJet jet{m.grid, {}, {}, {}, {}};
    jet.f.assign(g.size(), cplx(0, 0));
    jet.fz.assign(g.size(), cplx(0, 0));
    jet.fzb.assign(g.size(), cplx(0, 0));
    jet.status.assign(g.size(), NodeStatus::absent);

    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const int k = g.index(i, j);
            if (!g.mask[k]) continue;
            cplx fx, fy;
            const int qx = detail::axis_derivative(g, m.values, i, j, 1, 0, g.spacing, order, fx);
            if (qx == 0) continue; // isolated in x: excluded
            const int qy = detail::axis_derivative(g, m.values, i, j, 0, 1, g.spacing, order, fy);
            if (qy == 0) continue;
            jet.f[k] = m.values[k];
            jet.fz[k] = 0.5 * (fx - cplx(0, 1) * fy);
            jet.fzb[k] = 0.5 * (fx + cplx(0, 1) * fy);
            const int q = std::min(qx, qy);
            jet.status[k] = q == 1 ? NodeStatus::low_order
                                   : (q == 2 ? NodeStatus::central : NodeStatus::central4);
        }
    return jet;
}

/// Jet from the map's exact derivative closure.
inline WirtingerJet exact_jet(const SampledMap& m) {
    if (!m.jet_closure) throw std::invalid_argument("map carries no exact jet closure");
    const Grid& g = *m.grid;
    WirtingerJet jet{m.grid, {}, {}, {}, {}};
    jet.f.assign(g.size(), cplx(0, 0));
    jet.fz.assign(g.size(), cplx(0, 0));
    jet.fzb.assign(g.size(), cplx(0, 0));
    jet.status.assign(g.size(), NodeStatus::absent);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const int k = g.index(i, j);
            if (!g.mask[k]) continue;
            cplx fz, fzb;
            m.jet_closure(g.node(i, j), fz, fzb);
            jet.f[k] = m.values[k];
            jet.fz[k] = fz;
            jet.fzb[k] = fzb;
            jet.status[k] = NodeStatus::central4;
        }
    return jet;
}

namespace detail {

inline double catmull_rom(double pm1, double p0, double p1, double p2, double t) {
    return p0 + 0.5 * t * (p1 - pm1 +
                           t * (2.0 * pm1 - 5.0 * p0 + 4.0 * p1 - p2 +
                                t * (3.0 * (p0 - p1) + p2 - pm1)));
}

} // namespace detail

/// Off-grid evaluation: analytic closure when present, else bicubic
/// (Catmull-Rom) interpolation with bilinear/nearest fallback near the
/// mask boundary.
inline cplx evaluate(const SampledMap& m, cplx w) {
    if (m.closure) return m.closure(w);
    const Grid& g = *m.grid;
    const double fx = (w.real() - g.origin.real()) / g.spacing;
    const double fy = (w.imag() - g.origin.imag()) / g.spacing;
    const int i0 = static_cast<int>(std::floor(fx));
    const int j0 = static_cast<int>(std::floor(fy));
    const double tx = fx - i0, ty = fy - j0;

    bool full = true;
    for (int b = -1; b <= 2 && full; ++b)
        for (int a = -1; a <= 2 && full; ++a)
            if (!g.masked(i0 + a, j0 + b)) full = false;
    if (full) {
        cplx rows[4];
        for (int b = -1; b <= 2; ++b) {
            double re[4], im[4];
            for (int a = -1; a <= 2; ++a) {
                const cplx v = m.values[g.index(i0 + a, j0 + b)];
                re[a + 1] = v.real();
                im[a + 1] = v.imag();
            }
            rows[b + 1] = cplx(detail::catmull_rom(re[0], re[1], re[2], re[3], tx),
                               detail::catmull_rom(im[0], im[1], im[2], im[3], tx));
        }
        double re[4] = {rows[0].real(), rows[1].real(), rows[2].real(), rows[3].real()};
        double im[4] = {rows[0].imag(), rows[1].imag(), rows[2].imag(), rows[3].imag()};
        return cplx(detail::catmull_rom(re[0], re[1], re[2], re[3], ty),
                    detail::catmull_rom(im[0], im[1], im[2], im[3], ty));
    }
    if (g.masked(i0, j0) && g.masked(i0 + 1, j0) && g.masked(i0, j0 + 1) &&
        g.masked(i0 + 1, j0 + 1)) {
        const cplx v00 = m.values[g.index(i0, j0)], v10 = m.values[g.index(i0 + 1, j0)];
        const cplx v01 = m.values[g.index(i0, j0 + 1)], v11 = m.values[g.index(i0 + 1, j0 + 1)];
        return (1 - ty) * ((1 - tx) * v00 + tx * v10) + ty * ((1 - tx) * v01 + tx * v11);
    }
    // nearest masked node within the cell neighborhood
    double best = std::numeric_limits<double>::infinity();
    cplx out(0, 0);
    bool found = false;
    for (int b = -1; b <= 2; ++b)
        for (int a = -1; a <= 2; ++a)
            if (g.masked(i0 + a, j0 + b)) {
                const double d = std::abs(w - g.node(i0 + a, j0 + b));
                if (d < best) {
                    best = d;
                    out = m.values[g.index(i0 + a, j0 + b)];
                    found = true;
                }
            }
    if (!found) throw std::runtime_error("evaluate: point outside sampled region");
    return out;
}

} // namespace hopfvar
