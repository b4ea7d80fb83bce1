#pragma once

#include <algorithm>
#include <map>
#include <set>

#include "hopfvar/expr.hpp"
#include "hopfvar/variation.hpp"

namespace hopfvar {

namespace detail {

// Gauss-Legendre nodes/weights on [-1, 1]
inline const double kGL6x[6] = {-0.9324695142031521, -0.6612093864662645, -0.2386191860831969,
                                0.2386191860831969,  0.6612093864662645,  0.9324695142031521};
inline const double kGL6w[6] = {0.1713244923791704, 0.3607615730481386, 0.4679139345726910,
                                0.4679139345726910, 0.3607615730481386, 0.1713244923791704};
inline const double kGL8x[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                0.7966664774136267,  0.9602898564975363};
inline const double kGL8w[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                0.2223810344533745, 0.1012285362903763};

} // namespace detail

/// Family of oriented open rectangles covering a compact set, with mesh
/// corners at every prescribed zero and per-rectangle square-root branch
/// signs. Shared sides carry opposite orientations for the two neighbors.
struct RectPartition {
    double eps = 0;
    std::vector<double> xs, ys; // global mesh lines, sorted
    struct Cell {
        int ix, iy;
    };
    std::vector<Cell> cells;

    struct Side {
        int a, b;    // cell indices; the stored segment p -> q is ccw for a
        cplx p, q;
    };
    std::vector<Side> sides;
    std::vector<cplx> corners;
    std::vector<int> branch_sign; // +-1 per cell
    std::vector<cplx> zeros;

    double x0(const Cell& c) const { return xs[c.ix]; }
    double x1(const Cell& c) const { return xs[c.ix + 1]; }
    double y0(const Cell& c) const { return ys[c.iy]; }
    double y1(const Cell& c) const { return ys[c.iy + 1]; }
    cplx center(const Cell& c) const {
        return cplx(0.5 * (x0(c) + x1(c)), 0.5 * (y0(c) + y1(c)));
    }
    double diameter(const Cell& c) const {
        return std::hypot(x1(c) - x0(c), y1(c) - y0(c));
    }
    bool corner_is_zero(const Cell& c, int corner_xy) const {
        const cplx pt(corner_xy % 2 ? x1(c) : x0(c), corner_xy / 2 ? y1(c) : y0(c));
        for (const cplx z : zeros)
            if (std::abs(pt - z) < 1e-13) return true;
        return false;
    }
};

namespace detail {

inline std::vector<double> mesh_lines(double lo, double hi, double eps,
                                      const std::vector<double>& cuts) {
    std::vector<double> lines;
    const long k0 = static_cast<long>(std::floor(lo / eps)) - 1;
    const long k1 = static_cast<long>(std::ceil(hi / eps)) + 1;
    for (long k = k0; k <= k1; ++k) lines.push_back(k * eps);
    for (const double c : cuts) lines.push_back(c);
    std::sort(lines.begin(), lines.end());
    std::vector<double> out;
    for (const double v : lines)
        if (out.empty() || v - out.back() > 1e-12 * eps) out.push_back(v);
    return out;
}

inline bool cell_meets_compact(const PlanarDomain& K, double x0, double y0, double x1,
                               double y1) {
    // exact for a compact set that is a single axis-aligned rectangle
    const auto& prims = K.primitives();
    if (prims.size() == 1 && prims[0].op == SetOp::Union &&
        std::holds_alternative<RectShape>(prims[0].shape)) {
        const RectShape& r = std::get<RectShape>(prims[0].shape);
        return x1 >= r.x0 && x0 <= r.x1 && y1 >= r.y0 && y0 <= r.y1;
    }
    // otherwise sample the closed cell
    for (int a = 0; a <= 6; ++a)
        for (int b = 0; b <= 6; ++b) {
            const cplx p(x0 + (x1 - x0) * a / 6.0, y0 + (y1 - y0) * b / 6.0);
            if (K.signed_distance(p) > -1e-12) return true;
        }
    return false;
}

} // namespace detail

/// Epsilon-mesh of Cartesian squares refined by horizontal and vertical cuts
/// through every prescribed zero; the family keeps the open rectangles whose
/// closures intersect K.
inline RectPartition build_partition(const PlanarDomain& omega, const PlanarDomain& K,
                                     const std::vector<cplx>& zeros, double eps) {
    if (eps <= 0) throw std::invalid_argument("eps must be positive");
    const BBox kb = K.bounding_box();

    // sampled estimate of dist(K, boundary of Omega)
    double dist = std::numeric_limits<double>::infinity();
    const double step = eps / 4.0;
    for (double y = kb.y0; y <= kb.y1 + 1e-12; y += step)
        for (double x = kb.x0; x <= kb.x1 + 1e-12; x += step) {
            const cplx p(x, y);
            if (K.signed_distance(p) > -1e-12)
                dist = std::min(dist, omega.boundary_distance(p));
        }
    if (!(dist > 2.0 * eps))
        throw std::invalid_argument("dist(K, boundary) = " + std::to_string(dist) +
                                    " <= 2 eps, partition rejected");
    for (const cplx z : zeros)
        if (K.signed_distance(z) < -1e-12)
            throw std::invalid_argument("prescribed zero lies outside K");

    RectPartition part;
    part.eps = eps;
    part.zeros = zeros;
    std::vector<double> xcuts, ycuts;
    for (const cplx z : zeros) {
        xcuts.push_back(z.real());
        ycuts.push_back(z.imag());
    }
    part.xs = detail::mesh_lines(kb.x0 - 2 * eps, kb.x1 + 2 * eps, eps, xcuts);
    part.ys = detail::mesh_lines(kb.y0 - 2 * eps, kb.y1 + 2 * eps, eps, ycuts);

    std::map<std::pair<int, int>, int> id;
    for (int iy = 0; iy + 1 < static_cast<int>(part.ys.size()); ++iy)
        for (int ix = 0; ix + 1 < static_cast<int>(part.xs.size()); ++ix) {
            const double x0 = part.xs[ix], x1 = part.xs[ix + 1];
            const double y0 = part.ys[iy], y1 = part.ys[iy + 1];
            if (!detail::cell_meets_compact(K, x0, y0, x1, y1)) continue;
            // the closure must lie inside Omega
            for (int a = 0; a <= 2; ++a)
                for (int b = 0; b <= 2; ++b) {
                    const cplx p(x0 + (x1 - x0) * a / 2.0, y0 + (y1 - y0) * b / 2.0);
                    if (!(omega.signed_distance(p) > 0))
                        throw std::invalid_argument(
                            "selected rectangle leaves the domain, partition rejected");
                }
            id[{ix, iy}] = static_cast<int>(part.cells.size());
            part.cells.push_back({ix, iy});
        }
    if (part.cells.empty()) throw std::invalid_argument("empty partition");
    part.branch_sign.assign(part.cells.size(), 1);

    for (size_t c = 0; c < part.cells.size(); ++c) {
        const auto& cell = part.cells[c];
        auto east = id.find({cell.ix + 1, cell.iy});
        if (east != id.end()) {
            // east side of c, ccw for c runs south -> north
            part.sides.push_back({static_cast<int>(c), east->second,
                                  cplx(part.xs[cell.ix + 1], part.ys[cell.iy]),
                                  cplx(part.xs[cell.ix + 1], part.ys[cell.iy + 1])});
        }
        auto north = id.find({cell.ix, cell.iy + 1});
        if (north != id.end()) {
            // north side of c, ccw for c runs east -> west
            part.sides.push_back({static_cast<int>(c), north->second,
                                  cplx(part.xs[cell.ix + 1], part.ys[cell.iy + 1]),
                                  cplx(part.xs[cell.ix], part.ys[cell.iy + 1])});
        }
        part.corners.push_back(cplx(part.xs[cell.ix], part.ys[cell.iy]));
        part.corners.push_back(cplx(part.xs[cell.ix + 1], part.ys[cell.iy]));
        part.corners.push_back(cplx(part.xs[cell.ix], part.ys[cell.iy + 1]));
        part.corners.push_back(cplx(part.xs[cell.ix + 1], part.ys[cell.iy + 1]));
    }
    std::sort(part.corners.begin(), part.corners.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    part.corners.erase(std::unique(part.corners.begin(), part.corners.end()),
                       part.corners.end());
    return part;
}

/// Holomorphic data for the 2-valued square root: evaluator plus derivative.
struct HolomorphicFn {
    MapClosure eval;
    MapClosure deriv;
};

inline HolomorphicFn holomorphic_from_expression(const std::string& src) {
    Expression e = parse_expression(src);
    Expression d = e.derivative();
    return {[e](cplx z) { return e(z); }, [d](cplx z) { return d(z); }};
}

/// Per-rectangle continuous branches A_alpha = sign * sqrt(H), realized by
/// continuation from the rectangle center along axis-parallel legs.
class BranchAssignment {
public:
    BranchAssignment(const RectPartition& part, HolomorphicFn H)
        : part_(&part), H_(std::move(H)) {
        center_root_.resize(part.cells.size());
        for (size_t c = 0; c < part.cells.size(); ++c) {
            const cplx ctr = part.center(part.cells[c]);
            cplx r = std::sqrt(H_.eval(ctr));
            if (r.real() < 0 || (r.real() == 0 && r.imag() < 0)) r = -r;
            center_root_[c] = double(part.branch_sign[c]) * r;
            // monodromy check: x-first and y-first continuation to each corner
            // must agree, otherwise H vanishes inside the rectangle
            const auto& cell = part.cells[c];
            const cplx corners[4] = {cplx(part.x0(cell), part.y0(cell)),
                                     cplx(part.x1(cell), part.y0(cell)),
                                     cplx(part.x0(cell), part.y1(cell)),
                                     cplx(part.x1(cell), part.y1(cell))};
            for (int k = 0; k < 4; ++k) {
                if (part.corner_is_zero(cell, k)) continue;
                const cplx via_x = continue_to(c, corners[k], true);
                const cplx via_y = continue_to(c, corners[k], false);
                if (std::abs(via_x - via_y) > 1e-6 * (std::abs(via_x) + 1e-30))
                    throw std::invalid_argument(
                        "branch monodromy detected: H vanishes inside a rectangle");
            }
        }
    }

    /// Branch value A_alpha(p) for p in the closure of cell c.
    cplx value(size_t c, cplx p) const { return continue_to(c, p, true); }
    cplx derivative(size_t c, cplx p) const {
        const cplx a = value(c, p);
        return H_.deriv(p) / (2.0 * a);
    }
    const HolomorphicFn& H() const { return H_; }

private:
    cplx continue_to(size_t c, cplx target, bool x_first) const {
        const cplx ctr = part_->center(part_->cells[c]);
        const cplx mid = x_first ? cplx(target.real(), ctr.imag())
                                 : cplx(ctr.real(), target.imag());
        cplx root = center_root_[c];
        root = walk(ctr, mid, root);
        root = walk(mid, target, root);
        return root;
    }
    cplx walk(cplx from, cplx to, cplx root) const {
        const double len = std::abs(to - from);
        if (len == 0) return root;
        const int n = 2 + static_cast<int>(len / (0.125 * part_->eps));
        for (int s = 1; s <= n; ++s) {
            const cplx p = from + (to - from) * (double(s) / n);
            cplx r = std::sqrt(H_.eval(p));
            if (std::abs(r) == 0.0) {
                if (s == n) return cplx(0, 0); // zero exactly at a corner endpoint
                continue;
            }
            if (std::real(r * std::conj(root)) < 0) r = -r;
            root = r;
        }
        return root;
    }

    const RectPartition* part_;
    HolomorphicFn H_;
    std::vector<cplx> center_root_;
};

namespace detail {

// d(f)(z) for f = A eta: (f_z, f_zb)
inline void two_valued_jet(const BranchAssignment& br, size_t c, const TestFunction& eta,
                           cplx p, cplx& f, cplx& fz, cplx& fzb) {
    const cplx A = br.value(c, p);
    const cplx Ap = br.derivative(c, p);
    const cplx e = eta.eta(p);
    f = A * e;
    fz = Ap * e + A * eta.eta_z(p);
    fzb = A * eta.eta_zb(p);
}

// tensor GL6 over [x0,x1]x[y0,y1]
template <typename F>
double gl6_panel(double x0, double y0, double x1, double y1, F&& f) {
    const double hx = 0.5 * (x1 - x0), hy = 0.5 * (y1 - y0);
    const double cx = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1);
    double sum = 0;
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b)
            sum += kGL6w[a] * kGL6w[b] * f(cplx(cx + hx * kGL6x[a], cy + hy * kGL6x[b]));
    return sum * hx * hy;
}

// composite panels with dyadic grading toward zero corners
template <typename F>
double integrate_cell(const RectPartition& part, const RectPartition::Cell& cell, F&& f) {
    struct Box {
        double x0, y0, x1, y1;
        int depth;
    };
    std::vector<Box> work;
    std::vector<cplx> zero_corners;
    for (const cplx z : part.zeros)
        if (std::abs(z.real() - part.x0(cell)) < 1e-13 ||
            std::abs(z.real() - part.x1(cell)) < 1e-13 ||
            std::abs(z.imag() - part.y0(cell)) < 1e-13 ||
            std::abs(z.imag() - part.y1(cell)) < 1e-13) {
            if (z.real() >= part.x0(cell) - 1e-13 && z.real() <= part.x1(cell) + 1e-13 &&
                z.imag() >= part.y0(cell) - 1e-13 && z.imag() <= part.y1(cell) + 1e-13)
                zero_corners.push_back(z);
        }
    work.push_back({part.x0(cell), part.y0(cell), part.x1(cell), part.y1(cell), 0});
    double total = 0;
    while (!work.empty()) {
        const Box box = work.back();
        work.pop_back();
        bool touches_zero = false;
        for (const cplx z : zero_corners)
            if (z.real() >= box.x0 - 1e-13 && z.real() <= box.x1 + 1e-13 &&
                z.imag() >= box.y0 - 1e-13 && z.imag() <= box.y1 + 1e-13)
                touches_zero = true;
        if (touches_zero && box.depth < 5) {
            const double mx = 0.5 * (box.x0 + box.x1), my = 0.5 * (box.y0 + box.y1);
            work.push_back({box.x0, box.y0, mx, my, box.depth + 1});
            work.push_back({mx, box.y0, box.x1, my, box.depth + 1});
            work.push_back({box.x0, my, mx, box.y1, box.depth + 1});
            work.push_back({mx, my, box.x1, box.y1, box.depth + 1});
            continue;
        }
        // 2x2 panels per box for the smooth part
        const double mx = 0.5 * (box.x0 + box.x1), my = 0.5 * (box.y0 + box.y1);
        total += gl6_panel(box.x0, box.y0, mx, my, f);
        total += gl6_panel(mx, box.y0, box.x1, my, f);
        total += gl6_panel(box.x0, my, mx, box.y1, f);
        total += gl6_panel(mx, my, box.x1, box.y1, f);
    }
    return total;
}

} // namespace detail

struct JacobianSumReport {
    double sum = 0;          // sum over cells of Int J_f
    double scale = 0;        // sum over cells of Int |f_z|^2
    double max_side_residual = 0;
    std::vector<double> side_residuals;
};

/// Cancellation check: the per-rectangle Jacobian integrals of
/// f^alpha = A_alpha * eta sum to zero; shared-side boundary integrals of
/// omega = conj(f) df cancel pairwise.
inline JacobianSumReport jacobian_sum_check(const RectPartition& part,
                                            const BranchAssignment& br,
                                            const TestFunction& eta) {
    JacobianSumReport rep;
    for (size_t c = 0; c < part.cells.size(); ++c) {
        rep.sum += detail::integrate_cell(part, part.cells[c], [&](cplx p) {
            cplx f, fz, fzb;
            detail::two_valued_jet(br, c, eta, p, f, fz, fzb);
            return std::norm(fz) - std::norm(fzb);
        });
        rep.scale += detail::integrate_cell(part, part.cells[c], [&](cplx p) {
            cplx f, fz, fzb;
            detail::two_valued_jet(br, c, eta, p, f, fz, fzb);
            return std::norm(fz);
        });
    }
    for (const auto& side : part.sides) {
        auto line_integral = [&](size_t cell, cplx p, cplx q) {
            const cplx seg = q - p;
            cplx acc(0, 0);
            for (int k = 0; k < 8; ++k) {
                const cplx pt = p + seg * (0.5 * (detail::kGL8x[k] + 1.0));
                cplx f, fz, fzb;
                detail::two_valued_jet(br, cell, eta, pt, f, fz, fzb);
                acc += detail::kGL8w[k] * std::conj(f) * (fz * seg + fzb * std::conj(seg));
            }
            return 0.5 * acc;
        };
        const cplx iab = line_integral(side.a, side.p, side.q);
        const cplx iba = line_integral(side.b, side.q, side.p);
        const double res = std::abs(iab + iba);
        rep.side_residuals.push_back(res);
        rep.max_side_residual = std::max(rep.max_side_residual, res);
    }
    return rep;
}

/// Both sides of the equivalent sum-of-squares identity.
inline std::pair<double, double> sum_of_squares_identity(const RectPartition& part,
                                                         const BranchAssignment& br,
                                                         const TestFunction& eta) {
    double lhs = 0, rhs = 0;
    for (size_t c = 0; c < part.cells.size(); ++c) {
        lhs += detail::integrate_cell(part, part.cells[c], [&](cplx p) {
            cplx f, fz, fzb;
            detail::two_valued_jet(br, c, eta, p, f, fz, fzb);
            return std::norm(fz);
        });
        rhs += detail::integrate_cell(part, part.cells[c], [&](cplx p) {
            cplx f, fz, fzb;
            detail::two_valued_jet(br, c, eta, p, f, fz, fzb);
            return std::norm(fzb);
        });
    }
    return {lhs, rhs};
}

/// Branch-free realization of the boundary 1-form
/// omega = (|eta|^2 conj(H) dH + 2 |H|^2 conj(eta) deta) / (2|H|),
/// integrated over an oriented segment. Used as a cross-check of the
/// per-rectangle conj(f) df evaluation.
inline cplx omega_segment_integral(const HolomorphicFn& H, const TestFunction& eta, cplx p,
                                   cplx q) {
    const cplx seg = q - p;
    cplx acc(0, 0);
    for (int k = 0; k < 8; ++k) {
        const cplx pt = p + seg * (0.5 * (detail::kGL8x[k] + 1.0));
        const cplx Hv = H.eval(pt), Hd = H.deriv(pt);
        const double Habs = std::abs(Hv);
        if (Habs == 0.0) continue;
        const cplx e = eta.eta(pt);
        const cplx de = eta.eta_z(pt) * seg + eta.eta_zb(pt) * std::conj(seg);
        const cplx omega = (std::norm(e) * std::conj(Hv) * (Hd * seg) +
                            2.0 * Habs * Habs * std::conj(e) * de) /
                           (2.0 * Habs);
        acc += detail::kGL8w[k] * omega;
    }
    return 0.5 * acc;
}

} // namespace hopfvar
