#pragma once

#include <optional>

#include "hopfvar/domain.hpp"
#include "hopfvar/expr.hpp"
#include "hopfvar/field.hpp"

namespace hopfvar {

struct CriticalPoint {
    cplx position;
    int order = 1;
};

/// Analytic quadratic differential H(z) dz (x) dz given by a rational
/// expression with listed zeros and poles. Queries closer than
/// exclusion_radius to a zero or pole are out of contract.
struct QuadDifferential {
    MapClosure eval;
    MapClosure deriv; // dH/dz
    std::vector<CriticalPoint> zeros, poles;
    double exclusion_radius = 1e-2;
    std::string expression;

    double clearance(cplx z) const {
        double d = std::numeric_limits<double>::infinity();
        for (const auto& c : zeros) d = std::min(d, std::abs(z - c.position));
        for (const auto& c : poles) d = std::min(d, std::abs(z - c.position));
        return d;
    }
    bool excluded(cplx z) const { return clearance(z) <= exclusion_radius; }
};

inline QuadDifferential from_expression(const std::string& src,
                                        std::vector<CriticalPoint> zeros = {},
                                        std::vector<CriticalPoint> poles = {},
                                        double exclusion = 1e-2) {
    Expression e = parse_expression(src);
    Expression d = e.derivative();
    return {[e](cplx z) { return e(z); }, [d](cplx z) { return d(z); }, std::move(zeros),
            std::move(poles), exclusion, src};
}

// ---- built-in differentials -------------------------------------------------

inline QuadDifferential leminiscate_differential() {
    return from_expression("(z/(1 - z^2))^2", {{cplx(0, 0), 2}},
                           {{cplx(1, 0), 2}, {cplx(-1, 0), 2}});
}

inline QuadDifferential four_pole_differential() {
    return from_expression("(5/(z - 2) + 5/(z + 2) + 7/(z - 4) + 7/(z + 4))^2",
                           {{cplx(0, 0), 2}, {cplx(3, 0), 2}, {cplx(-3, 0), 2}},
                           {{cplx(2, 0), 2}, {cplx(-2, 0), 2}, {cplx(4, 0), 2},
                            {cplx(-4, 0), 2}});
}

/// H(z) = n z^{n-2} (z^n - n + 1) / (z^n + 1)^2 = sum 1/(z - a_k)^2 over the
/// n-th roots a_k of -1.
inline QuadDifferential hyperelliptic_differential(int n) {
    if (n < 2) throw std::invalid_argument("hyperelliptic family needs n >= 2");
    std::string src = std::to_string(n) + "*z^" + std::to_string(n - 2) + "*(z^" +
                      std::to_string(n) + " - " + std::to_string(n - 1) + ")/((z^" +
                      std::to_string(n) + " + 1)^2)";
    std::vector<CriticalPoint> zeros, poles;
    if (n > 2) zeros.push_back({cplx(0, 0), n - 2});
    const double ring = std::pow(double(n - 1), 1.0 / n);
    for (int k = 0; k < n; ++k) {
        zeros.push_back({std::polar(ring, 2.0 * kPi * k / n), 1});
        poles.push_back({std::polar(1.0, (2.0 * k + 1.0) * kPi / n), 2});
    }
    return from_expression(src, std::move(zeros), std::move(poles));
}

inline QuadDifferential constant_differential() { return from_expression("1"); }

struct CatalogEntry {
    std::string name;
    std::string expression;
    QuadDifferential qd;
};

/// The three families used throughout: leminiscate, four-pole, hyperelliptic.
inline std::vector<CatalogEntry> builtin_differentials(int hyperelliptic_n = 4) {
    std::vector<CatalogEntry> out;
    QuadDifferential l = leminiscate_differential();
    QuadDifferential f = four_pole_differential();
    QuadDifferential h = hyperelliptic_differential(hyperelliptic_n);
    out.push_back({"leminiscate", l.expression, std::move(l)});
    out.push_back({"four-pole", f.expression, std::move(f)});
    out.push_back({"hyperelliptic:" + std::to_string(hyperelliptic_n), h.expression,
                   std::move(h)});
    return out;
}

/// Closed vertical trajectory of the leminiscate differential around +1,
/// z(t) = sqrt(1 + r^2 exp(4it)), t in [-pi/4, pi/4].
inline cplx leminiscate_trajectory(double r, double t) {
    return std::sqrt(cplx(1.0, 0) + r * r * std::polar(1.0, 4.0 * t));
}
inline cplx leminiscate_trajectory_velocity(double r, double t) {
    const cplx e = r * r * std::polar(1.0, 4.0 * t);
    return 2.0 * cplx(0, 1) * e / leminiscate_trajectory(r, t);
}

// ---- vertical trajectory tracing --------------------------------------------

enum class TrajectoryKind { closed, crosscut, hit_critical, escaped, step_limit };

inline const char* to_string(TrajectoryKind k) {
    switch (k) {
        case TrajectoryKind::closed: return "closed";
        case TrajectoryKind::crosscut: return "crosscut";
        case TrajectoryKind::hit_critical: return "hit_critical";
        case TrajectoryKind::escaped: return "escaped";
        case TrajectoryKind::step_limit: return "step_limit";
    }
    return "?";
}

struct Trajectory {
    std::vector<cplx> points;
    TrajectoryKind kind = TrajectoryKind::step_limit;
    double h_length = 0;
};

struct TraceOptions {
    double arc_step_max = 1e-2;
    double arc_step_min = 1e-4;
    double closure_tol = 1e-5;
    double angle_tol = 1e-3;
    double step_tol = 1e-12; // per-step position error target (step doubling)
    long step_limit = 1000000;
    double safety_factor = 4.0; // escape radius in units of the domain box size
};

namespace detail {

// unit vertical direction exp(i (pi - arg H)/2), sign-aligned with ref
inline cplx vertical_dir(const QuadDifferential& qd, cplx z, cplx ref) {
    const cplx H = qd.eval(z);
    cplx v = std::polar(1.0, 0.5 * (kPi - std::arg(H)));
    if (std::real(v * std::conj(ref)) < 0) v = -v;
    return v;
}

enum class HalfEnd { boundary, critical, escaped, steps, closed };

struct HalfTrace {
    std::vector<cplx> points;
    HalfEnd end = HalfEnd::steps;
};

inline HalfTrace trace_half(const QuadDifferential& qd, const PlanarDomain& domain, cplx seed,
                            cplx dir0, const TraceOptions& opts, bool detect_closure) {
    HalfTrace out;
    out.points.push_back(seed);
    cplx p = seed;
    cplx ref = dir0;
    const BBox box = domain.bounding_box();
    const cplx box_center(0.5 * (box.x0 + box.x1), 0.5 * (box.y0 + box.y1));
    const double escape = opts.safety_factor * std::max(box.width(), box.height());
    const double min_closed_arc = std::max(0.002, 10.0 * opts.closure_tol);
    double arc = 0;

    auto rk4 = [&qd](cplx from, cplx dir_ref, double h) {
        const cplx k1 = vertical_dir(qd, from, dir_ref);
        const cplx k2 = vertical_dir(qd, from + 0.5 * h * k1, dir_ref);
        const cplx k3 = vertical_dir(qd, from + 0.5 * h * k2, dir_ref);
        const cplx k4 = vertical_dir(qd, from + h * k3, dir_ref);
        return from + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    };

    for (long step = 0; step < opts.step_limit; ++step) {
        const double gmag = std::abs(qd.deriv(p) / qd.eval(p));
        double h = std::clamp(opts.arc_step_max / (1.0 + gmag), opts.arc_step_min,
                              opts.arc_step_max);
        cplx pn, tangent;
        for (;;) {
            // step doubling: one full step vs two half steps
            const cplx full = rk4(p, ref, h);
            const cplx mid = rk4(p, ref, 0.5 * h);
            const cplx halves = rk4(mid, vertical_dir(qd, mid, ref), 0.5 * h);
            const double err = std::abs(full - halves);
            pn = halves;
            tangent = vertical_dir(qd, pn, ref);
            const bool branch_ok = std::real(tangent * std::conj(ref)) >= 0.0;
            if ((err <= opts.step_tol && branch_ok) || h <= opts.arc_step_min) break;
            h = branch_ok ? std::max(opts.arc_step_min,
                                     0.9 * h * std::pow(opts.step_tol / err, 0.2))
                          : 0.5 * h;
        }
        if (std::real(tangent * std::conj(ref)) < 0.0) {
            out.end = HalfEnd::critical;
            return out;
        }

        if (qd.clearance(pn) <= qd.exclusion_radius ||
            qd.clearance(p + 0.5 * (pn - p)) <= qd.exclusion_radius) {
            out.points.push_back(pn);
            out.end = HalfEnd::critical;
            return out;
        }
        if (std::abs(pn - box_center) > escape) {
            out.points.push_back(pn);
            out.end = HalfEnd::escaped;
            return out;
        }
        if (!domain.inside(pn)) {
            // bisect the exit point onto the boundary
            cplx lo = p, hi = pn;
            for (int it = 0; it < 50; ++it) {
                const cplx mid = 0.5 * (lo + hi);
                (domain.inside(mid) ? lo : hi) = mid;
            }
            out.points.push_back(0.5 * (lo + hi));
            out.end = HalfEnd::boundary;
            return out;
        }
        if (detect_closure && arc > min_closed_arc) {
            // distance from the seed to the segment [p, pn]
            const cplx e = pn - p;
            const double len2 = std::norm(e);
            const double t = len2 > 0
                                 ? std::clamp(((seed.real() - p.real()) * e.real() +
                                               (seed.imag() - p.imag()) * e.imag()) /
                                                  len2,
                                              0.0, 1.0)
                                 : 0.0;
            const cplx foot = p + t * e;
            if (std::abs(foot - seed) < opts.closure_tol &&
                std::real(tangent * std::conj(dir0)) > 0.0) {
                // close onto the seed itself (an on-curve point); keep the
                // splice chord long so the closing secant stays tangent-true
                if (out.points.size() >= 2 && std::abs(seed - p) < 0.5 * std::abs(e))
                    out.points.pop_back();
                out.points.push_back(seed);
                out.end = HalfEnd::closed;
                return out;
            }
        }
        arc += std::abs(pn - p);
        p = pn;
        ref = tangent;
        out.points.push_back(p);
    }
    out.end = HalfEnd::steps;
    return out;
}

} // namespace detail

/// Composite Simpson quadrature of sqrt|H| along a polyline.
inline double h_length_of(const QuadDifferential& qd, const std::vector<cplx>& path) {
    double total = 0;
    for (size_t k = 0; k + 1 < path.size(); ++k) {
        const cplx a = path[k], b = path[k + 1];
        const double len = std::abs(b - a);
        if (len == 0) continue;
        const double fa = std::sqrt(std::abs(qd.eval(a)));
        const double fm = std::sqrt(std::abs(qd.eval(0.5 * (a + b))));
        const double fb = std::sqrt(std::abs(qd.eval(b)));
        total += len / 6.0 * (fa + 4.0 * fm + fb);
    }
    return total;
}

/// Trace the vertical trajectory through `seed`. Both branch directions are
/// integrated; a loop detected on the forward branch closes the trajectory.
inline Trajectory trace_vertical(const QuadDifferential& qd, cplx seed,
                                 const PlanarDomain& domain, TraceOptions opts = {}) {
    if (!domain.inside(seed)) throw std::invalid_argument("seed outside domain");
    if (qd.clearance(seed) <= qd.exclusion_radius)
        throw std::invalid_argument("seed inside an exclusion ball");

    const cplx dir0 = detail::vertical_dir(qd, seed, cplx(1, 0));
    detail::HalfTrace fwd = detail::trace_half(qd, domain, seed, dir0, opts, true);

    Trajectory traj;
    if (fwd.end == detail::HalfEnd::closed) {
        traj.points = std::move(fwd.points);
        traj.kind = TrajectoryKind::closed;
        traj.h_length = h_length_of(qd, traj.points);
        return traj;
    }
    detail::HalfTrace bwd = detail::trace_half(qd, domain, seed, -dir0, opts, false);
    traj.points.assign(bwd.points.rbegin(), bwd.points.rend());
    traj.points.insert(traj.points.end(), fwd.points.begin() + 1, fwd.points.end());

    using detail::HalfEnd;
    auto either = [&](HalfEnd e) { return fwd.end == e || bwd.end == e; };
    if (either(HalfEnd::steps))
        traj.kind = TrajectoryKind::step_limit;
    else if (either(HalfEnd::escaped))
        traj.kind = TrajectoryKind::escaped;
    else if (fwd.end == HalfEnd::boundary && bwd.end == HalfEnd::boundary)
        traj.kind = TrajectoryKind::crosscut;
    else
        traj.kind = TrajectoryKind::hit_critical;
    traj.h_length = h_length_of(qd, traj.points);
    return traj;
}

/// Max deviation of arg(H(z) zdot^2) from pi along a polyline, in radians.
inline double verticality_residual(const QuadDifferential& qd, const std::vector<cplx>& path) {
    double worst = 0;
    for (size_t k = 0; k + 1 < path.size(); ++k) {
        const cplx a = path[k], b = path[k + 1];
        if (a == b) continue;
        const cplx t = (b - a) / std::abs(b - a);
        const cplx H = qd.eval(0.5 * (a + b));
        worst = std::max(worst, std::abs(wrap_angle(std::arg(H * t * t) - kPi)));
    }
    return worst;
}

namespace detail {

inline cplx continue_root(cplx H, cplx prev) {
    cplx s = std::sqrt(H);
    if (std::real(s * std::conj(prev)) < 0) s = -s;
    return s;
}

inline cplx seed_root(cplx H) {
    cplx s = std::sqrt(H);
    if (s.real() < 0 || (s.real() == 0 && s.imag() < 0)) s = -s;
    return s;
}

} // namespace detail

/// Integral of the continued branch of sqrt(H) along a polyline; the branch is
/// seeded positive-real-part at the first point (pure-imaginary roots are
/// normalized to positive imaginary part). Returns cumulative values at each
/// polyline vertex; `root` carries the branch across calls.
inline std::vector<cplx> sqrt_integral_along(const QuadDifferential& qd,
                                             const std::vector<cplx>& path, cplx& root,
                                             bool seed_branch) {
    if (path.empty()) throw std::invalid_argument("empty path");
    std::vector<cplx> cumulative(path.size(), cplx(0, 0));
    if (qd.excluded(path[0])) throw std::invalid_argument("path enters an exclusion ball");
    if (seed_branch) root = detail::seed_root(qd.eval(path[0]));

    cplx acc(0, 0);
    for (size_t k = 0; k + 1 < path.size(); ++k) {
        const cplx a = path[k], b = path[k + 1];
        const double len = std::abs(b - a);
        if (len == 0) {
            cumulative[k + 1] = acc;
            continue;
        }
        // clearance pre-scan so singular evaluations never drive the panel count
        const int scan = 2 + static_cast<int>(len / (0.5 * qd.exclusion_radius));
        for (int s = 0; s <= scan; ++s)
            if (qd.excluded(a + (b - a) * (double(s) / scan)))
                throw std::invalid_argument("path enters an exclusion ball");
        // subdivide so the branch rotates slowly within each Simpson panel
        double gmid = std::abs(qd.deriv(0.5 * (a + b)) / qd.eval(0.5 * (a + b)));
        if (!std::isfinite(gmid)) gmid = 1.0 / qd.exclusion_radius;
        const int nsub =
            1 + static_cast<int>(std::min(len * (1.0 + gmid) / 0.05, 100000.0));
        cplx prev_pt = a;
        cplx r0 = detail::continue_root(qd.eval(a), root);
        for (int s = 1; s <= nsub; ++s) {
            const cplx pt = a + (b - a) * (double(s) / nsub);
            const cplx mid = 0.5 * (prev_pt + pt);
            if (qd.excluded(mid) || qd.excluded(pt))
                throw std::invalid_argument("path enters an exclusion ball");
            const cplx rm = detail::continue_root(qd.eval(mid), r0);
            const cplx r1 = detail::continue_root(qd.eval(pt), rm);
            acc += (pt - prev_pt) / 6.0 * (r0 + 4.0 * rm + r1);
            prev_pt = pt;
            r0 = r1;
        }
        root = r0;
        cumulative[k + 1] = acc;
    }
    return cumulative;
}

/// Distinguished parameter Phi(target) = Int sqrt(H) dz along `path` from its
/// first point (the base) to its last (the target).
inline cplx distinguished_parameter(const QuadDifferential& qd, const std::vector<cplx>& path) {
    cplx root;
    return sqrt_integral_along(qd, path, root, true).back();
}

struct CircularRing {
    Trajectory trajectory;
    std::vector<cplx> phi;   // conformal image of each trajectory vertex
    double modulus = 0;      // mean |phi|
    double modulus_spread = 0; // max relative deviation of |phi| on the ring
};

struct CircularMapResult {
    double ell = 0; // H-length of the base trajectory
    std::vector<CircularRing> rings;
};

/// Conformal map Phi(z) = exp((2 pi / ell) Int sqrt(H) dz) of a circular
/// configuration domain, sampled along closed trajectories through the given
/// ring seeds. Straight connectors base -> ring seed carry the branch; they
/// must not cross the supplied horizontal cut.
inline CircularMapResult circular_map(const QuadDifferential& qd, cplx base_seed,
                                      const std::vector<cplx>& ring_seeds,
                                      const PlanarDomain& domain,
                                      const std::vector<cplx>& cut = {},
                                      TraceOptions opts = {}) {
    Trajectory base = trace_vertical(qd, base_seed, domain, opts);
    if (base.kind != TrajectoryKind::closed)
        throw std::invalid_argument("circular_map needs a closed seed trajectory");
    CircularMapResult out;
    out.ell = base.h_length;

    auto crosses_cut = [&](cplx a, cplx b) {
        for (size_t k = 0; k + 1 < cut.size(); ++k) {
            const cplx c = cut[k], d = cut[k + 1];
            const auto orient = [](cplx p, cplx q, cplx r) {
                return (q.real() - p.real()) * (r.imag() - p.imag()) -
                       (q.imag() - p.imag()) * (r.real() - p.real());
            };
            const double o1 = orient(a, b, c), o2 = orient(a, b, d);
            const double o3 = orient(c, d, a), o4 = orient(c, d, b);
            if (((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0))) return true;
        }
        return false;
    };

    for (const cplx rs : ring_seeds) {
        Trajectory traj = rs == base_seed ? base : trace_vertical(qd, rs, domain, opts);
        if (traj.kind != TrajectoryKind::closed)
            throw std::invalid_argument("ring seed is not on a closed trajectory");
        if (crosses_cut(base_seed, traj.points.front()))
            throw std::invalid_argument("connector crosses the cut");

        cplx root;
        const std::vector<cplx> connector = {base_seed, traj.points.front()};
        const cplx I_conn = sqrt_integral_along(qd, connector, root, true).back();
        const std::vector<cplx> cums = sqrt_integral_along(qd, traj.points, root, false);

        CircularRing ring;
        ring.phi.reserve(traj.points.size());
        double mean = 0;
        for (const cplx c : cums) {
            const cplx phi = std::exp(2.0 * kPi / out.ell * (I_conn + c));
            ring.phi.push_back(phi);
            mean += std::abs(phi);
        }
        mean /= double(ring.phi.size());
        double spread = 0;
        for (const cplx phi : ring.phi)
            spread = std::max(spread, std::abs(std::abs(phi) - mean) / mean);
        ring.trajectory = std::move(traj);
        ring.modulus = mean;
        ring.modulus_spread = spread;
        out.rings.push_back(std::move(ring));
    }
    return out;
}

/// Trajectories emanating from each zero: a zero of order m sprouts m + 2
/// vertical rays. Seeds sit just outside the exclusion ball along those rays.
inline std::vector<Trajectory> critical_graph(const QuadDifferential& qd,
                                              const PlanarDomain& domain,
                                              TraceOptions opts = {}) {
    std::vector<Trajectory> out;
    for (const auto& zero : qd.zeros) {
        const int m = zero.order;
        const double probe = 2.0 * qd.exclusion_radius;
        const cplx lead = qd.eval(zero.position + probe) /
                          std::pow(cplx(probe, 0), m); // leading coefficient estimate
        for (int k = 0; k < m + 2; ++k) {
            const double theta = (kPi - std::arg(lead) + 2.0 * kPi * k) / (m + 2);
            const cplx seed = zero.position + 1.6 * qd.exclusion_radius * std::polar(1.0, theta);
            if (!domain.inside(seed) || qd.excluded(seed)) continue;
            out.push_back(trace_vertical(qd, seed, domain, opts));
        }
    }
    return out;
}

// ---- configuration classification and length-area ---------------------------

struct StrebelDecomposition {
    std::vector<cplx> seeds;
    std::vector<Trajectory> trajectories;
    int closed_count = 0, crosscut_count = 0, critical_count = 0, inconclusive_count = 0;
    bool strebel_type = false; // every sampled seed closed or crosscut
};

inline StrebelDecomposition classify_configuration(const QuadDifferential& qd,
                                                   const PlanarDomain& domain,
                                                   const std::vector<cplx>& seeds,
                                                   TraceOptions opts = {}) {
    StrebelDecomposition out;
    out.seeds = seeds;
    bool all_good = true;
    for (const cplx s : seeds) {
        Trajectory t = trace_vertical(qd, s, domain, opts);
        switch (t.kind) {
            case TrajectoryKind::closed: ++out.closed_count; break;
            case TrajectoryKind::crosscut: ++out.crosscut_count; break;
            case TrajectoryKind::hit_critical:
                ++out.critical_count;
                all_good = false;
                break;
            default:
                ++out.inconclusive_count;
                all_good = false;
                break;
        }
        out.trajectories.push_back(std::move(t));
    }
    out.strebel_type = all_good && !seeds.empty();
    return out;
}

struct LengthAreaLine {
    double lhs = 0, rhs = 0, margin = 0;
    bool pass = false;
};

struct LengthAreaReport {
    std::vector<LengthAreaLine> lines;
    bool lines_pass = false;
    int witness = -1; // first failing line, if any
    bool area_checked = false;
    double area_lhs = 0, area_rhs = 0, area_margin = 0;
    bool area_pass = false;
};

/// Per-trajectory line inequality Int |F| sqrt|H| <= Int |G| sqrt|H|, then the
/// area inequality Int |F||H| <= Int |G||H| over the grid.
inline LengthAreaReport length_area_check(const QuadDifferential& qd,
                                          const std::vector<Trajectory>& lines, const Grid& grid,
                                          const MapClosure& F, const MapClosure& G,
                                          double slack = 1e-6) {
    LengthAreaReport rep;
    rep.lines_pass = true;
    auto weighted_length = [&](const std::vector<cplx>& path, const MapClosure& W) {
        double total = 0;
        for (size_t k = 0; k + 1 < path.size(); ++k) {
            const cplx a = path[k], b = path[k + 1];
            const double len = std::abs(b - a);
            if (len == 0) continue;
            auto f = [&](cplx z) { return std::abs(W(z)) * std::sqrt(std::abs(qd.eval(z))); };
            total += len / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
        }
        return total;
    };
    for (size_t k = 0; k < lines.size(); ++k) {
        LengthAreaLine line;
        line.lhs = weighted_length(lines[k].points, F);
        line.rhs = weighted_length(lines[k].points, G);
        line.margin = line.rhs - line.lhs;
        line.pass = line.rhs >= line.lhs * (1.0 - slack);
        if (!line.pass && rep.witness < 0) rep.witness = static_cast<int>(k);
        rep.lines_pass = rep.lines_pass && line.pass;
        rep.lines.push_back(line);
    }
    if (!rep.lines_pass) return rep; // area check skipped, witness recorded

    double af = 0, ag = 0;
    const double h2 = grid.spacing * grid.spacing;
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
            const int k = grid.index(i, j);
            if (!grid.mask[k]) continue;
            const cplx p = grid.node(i, j);
            const double Habs = std::abs(qd.eval(p));
            af += std::abs(F(p)) * Habs * grid.weight[k] * h2;
            ag += std::abs(G(p)) * Habs * grid.weight[k] * h2;
        }
    rep.area_checked = true;
    rep.area_lhs = af;
    rep.area_rhs = ag;
    rep.area_margin = ag - af;
    rep.area_pass = ag >= af * (1.0 - slack);
    return rep;
}

} // namespace hopfvar
