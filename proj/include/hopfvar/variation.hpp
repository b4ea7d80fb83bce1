#pragma once

#include <random>

#include "hopfvar/energy.hpp"

namespace hopfvar {

/// Compactly supported change-of-variables direction with exact analytic
/// derivatives. The closures vanish identically outside `support`, whose
/// closure must lie strictly inside the working domain.
struct TestFunction {
    MapClosure eta, eta_z, eta_zb;
    PlanarDomain support;
};

enum class BumpFactor { one, z, conj_z, phase, conj_z_over_abs };

/// C^2 polynomial bump (1 - |xi-a|^2/r^2)^3 on a disk, times an optional
/// analytic factor, so that eta_xi and eta_xibar are exact.
inline TestFunction poly_bump(cplx center, double radius, cplx amplitude,
                              BumpFactor factor = BumpFactor::one, double phase = 0.0) {
    const double r2 = radius * radius;
    auto b = [=](cplx z) -> cplx {
        const double q = std::norm(z - center) / r2;
        if (q >= 1.0) return 0.0;
        const double s = 1.0 - q;
        return amplitude * (s * s * s);
    };
    auto bz = [=](cplx z) -> cplx {
        const double q = std::norm(z - center) / r2;
        if (q >= 1.0) return 0.0;
        const double s = 1.0 - q;
        return amplitude * (-3.0 * s * s * std::conj(z - center) / r2);
    };
    auto bzb = [=](cplx z) -> cplx {
        const double q = std::norm(z - center) / r2;
        if (q >= 1.0) return 0.0;
        const double s = 1.0 - q;
        return amplitude * (-3.0 * s * s * (z - center) / r2);
    };

    MapClosure m, mz, mzb;
    switch (factor) {
        case BumpFactor::one:
            m = [](cplx) { return cplx(1, 0); };
            mz = [](cplx) { return cplx(0, 0); };
            mzb = [](cplx) { return cplx(0, 0); };
            break;
        case BumpFactor::z:
            m = [](cplx z) { return z; };
            mz = [](cplx) { return cplx(1, 0); };
            mzb = [](cplx) { return cplx(0, 0); };
            break;
        case BumpFactor::conj_z:
            m = [](cplx z) { return std::conj(z); };
            mz = [](cplx) { return cplx(0, 0); };
            mzb = [](cplx) { return cplx(1, 0); };
            break;
        case BumpFactor::phase: {
            const cplx ph = std::polar(1.0, phase);
            m = [ph](cplx) { return ph; };
            mz = [](cplx) { return cplx(0, 0); };
            mzb = [](cplx) { return cplx(0, 0); };
            break;
        }
        case BumpFactor::conj_z_over_abs:
            m = [](cplx z) { return std::conj(z) / std::abs(z); };
            mz = [](cplx z) {
                const double az = std::abs(z);
                return -std::conj(z) * std::conj(z) / (2.0 * az * az * az);
            };
            mzb = [](cplx z) { return cplx(0.5 / std::abs(z), 0); };
            break;
    }
    // short-circuit outside the support so singular factors are never touched
    auto outside = [center, r2](cplx z) { return std::norm(z - center) >= r2; };
    TestFunction tf{
        [=](cplx z) { return outside(z) ? cplx(0, 0) : b(z) * m(z); },
        [=](cplx z) { return outside(z) ? cplx(0, 0) : bz(z) * m(z) + b(z) * mz(z); },
        [=](cplx z) { return outside(z) ? cplx(0, 0) : bzb(z) * m(z) + b(z) * mzb(z); },
        PlanarDomain::disk(center, radius)};
    return tf;
}

struct BatteryOptions {
    double boundary_margin = 0.05;
    double radius_min = 0.08;
    double radius_cap = 0.45;
    double amplitude_min = 0.6, amplitude_max = 1.6;
    bool allow_conj_over_abs = false; // singular factor, kept out of random batteries
};

/// Seeded battery of bump test functions supported strictly inside `dom`.
inline std::vector<TestFunction> random_battery(const PlanarDomain& dom, int count, uint64_t seed,
                                                BatteryOptions opts = {}) {
    std::mt19937_64 rng(seed);
    const BBox box = dom.bounding_box();
    std::uniform_real_distribution<double> ux(box.x0, box.x1), uy(box.y0, box.y1);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::vector<TestFunction> out;
    int guard = 0;
    while (static_cast<int>(out.size()) < count) {
        if (++guard > 100000) throw std::runtime_error("battery sampling stalled");
        const cplx c(ux(rng), uy(rng));
        const double dist = dom.boundary_distance(c);
        const double avail = dist - opts.boundary_margin;
        if (avail < opts.radius_min) continue;
        const double radius = std::min(opts.radius_cap, avail * (0.55 + 0.4 * u01(rng)));
        if (radius < opts.radius_min) continue;
        const double amp = opts.amplitude_min + (opts.amplitude_max - opts.amplitude_min) * u01(rng);
        const double phase = 2.0 * kPi * u01(rng);
        const int kind = static_cast<int>(u01(rng) * 4.0) % 4;
        const BumpFactor f = kind == 0   ? BumpFactor::one
                             : kind == 1 ? BumpFactor::z
                             : kind == 2 ? BumpFactor::conj_z
                                         : BumpFactor::phase;
        out.push_back(poly_bump(c, radius, amp, f, phase));
    }
    return out;
}

/// Largest eps such that |1 +- eps*eta_z|^2 - eps^2 |eta_zb|^2 stays positive
/// at every masked node for both signs, found by bisection to 1e-6 relative.
/// Returns `cap` for eta == 0 on the grid.
inline double eps_max(const TestFunction& eta, const Grid& g, double cap = 1e6) {
    std::vector<cplx> az, bz;
    az.reserve(g.mask_count());
    bz.reserve(g.mask_count());
    double m = 0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            if (g.masked(i, j)) {
                const cplx p = g.node(i, j);
                az.push_back(eta.eta_z(p));
                bz.push_back(eta.eta_zb(p));
                m = std::max(m, std::abs(az.back()) + std::abs(bz.back()));
            }
    if (m < 1e-14) return cap;

    auto positive = [&](double e) {
        for (size_t k = 0; k < az.size(); ++k) {
            const double nb = e * e * std::norm(bz[k]);
            if (std::norm(1.0 + e * az[k]) - nb <= 0.0) return false;
            if (std::norm(1.0 - e * az[k]) - nb <= 0.0) return false;
        }
        return true;
    };

    double lo = 0.5 / m; // always admissible: eps*(|a|+|b|) < 1
    double hi = lo;
    while (positive(hi)) {
        lo = hi;
        hi *= 2.0;
        if (hi >= cap) return cap;
    }
    while ((hi - lo) > 1e-6 * lo) {
        const double mid = 0.5 * (lo + hi);
        (positive(mid) ? lo : hi) = mid;
    }
    // guard against non-monotone positivity: shrink if any interior sample fails
    for (int t = 1; t <= 32; ++t) {
        const double e = lo * t / 32.0;
        if (!positive(e)) return e * (1.0 - 1e-6);
    }
    return lo;
}

struct InnerVariation {
    TestFunction eta;
    double epsilon = 0;
};

/// Inner variation by forward composition: H(z) = h(z + eps*eta(z)).
/// Values at nodes come from the analytic closure when present, otherwise
/// bicubic interpolation of the samples. Nodes outside the support keep the
/// original samples bit-for-bit.
inline SampledMap compose(const SampledMap& m, const InnerVariation& var) {
    const Grid& g = *m.grid;
    const double eps = var.epsilon;
    const TestFunction& eta = var.eta;

    for (size_t k = 0; k < g.size(); ++k)
        if (g.mask[k]) {
            const cplx p = g.node(static_cast<int>(k) % g.nx, static_cast<int>(k) / g.nx);
            const cplx a = eta.eta_z(p), b = eta.eta_zb(p);
            if (std::norm(1.0 + eps * a) - eps * eps * std::norm(b) <= 0.0)
                throw std::invalid_argument("epsilon exceeds the admissible range");
        }

    SampledMap out;
    out.grid = m.grid;
    out.values.assign(g.size(), cplx(0, 0));
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const int k = g.index(i, j);
            if (!g.mask[k]) continue;
            const cplx p = g.node(i, j);
            const cplx shift = eta.eta(p);
            if (shift == cplx(0, 0) && eps != 0.0) {
                out.values[k] = m.values[k];
                continue;
            }
            const cplx target = p + eps * shift;
            if (!g.domain.inside(target))
                throw std::logic_error("composed evaluation point left the domain");
            out.values[k] = eps == 0.0 ? m.values[k] : evaluate(m, target);
        }
    if (m.closure) {
        const MapClosure base = m.closure;
        const MapClosure e = eta.eta;
        out.closure = [base, e, eps](cplx w) { return base(w + eps * e(w)); };
    }
    if (m.jet_closure) {
        const JetClosure bj = m.jet_closure;
        const MapClosure e = eta.eta, ez = eta.eta_z, ezb = eta.eta_zb;
        out.jet_closure = [bj, e, ez, ezb, eps](cplx w, cplx& fz, cplx& fzb) {
            const cplx pz = 1.0 + eps * ez(w), pzb = eps * ezb(w);
            cplx hz, hzb;
            bj(w + eps * e(w), hz, hzb);
            fz = hz * pz + hzb * std::conj(pzb);
            fzb = hz * pzb + hzb * std::conj(pz);
        };
    }
    return out;
}

/// Change of variables z = z(xi) handed to the exact energy-difference
/// formula; derivatives are with respect to xi.
struct Diffeo {
    MapClosure z, z_xi, z_xib;
};

inline Diffeo shift_diffeo(const TestFunction& eta, double eps) {
    const MapClosure e = eta.eta, ez = eta.eta_z, ezb = eta.eta_zb;
    return Diffeo{[e, eps](cplx xi) { return xi + eps * e(xi); },
                  [ez, eps](cplx xi) { return 1.0 + eps * ez(xi); },
                  [ezb, eps](cplx xi) { return eps * ezb(xi); }};
}

/// Solve z(xi) = w for xi (damped Newton on the real 2x2 system).
inline cplx diffeo_invert(const Diffeo& d, cplx w) {
    cplx xi = w;
    for (int it = 0; it < 80; ++it) {
        const cplx F = d.z(xi) - w;
        if (std::abs(F) < 1e-14) return xi;
        const cplx a = d.z_xi(xi), b = d.z_xib(xi);
        const double J = std::norm(a) - std::norm(b);
        if (J <= 0) throw std::runtime_error("diffeo inversion hit a degenerate Jacobian");
        const cplx step = (std::conj(a) * F - b * std::conj(F)) / J;
        xi -= step;
    }
    if (std::abs(d.z(xi) - w) > 1e-10)
        throw std::runtime_error("diffeo inversion did not converge");
    return xi;
}

/// h composed with the inverse change of variables, H(w) = h(z^{-1}(w)).
inline SampledMap compose_inverse(const SampledMap& m, const Diffeo& d) {
    const Grid& g = *m.grid;
    SampledMap out;
    out.grid = m.grid;
    out.values.assign(g.size(), cplx(0, 0));
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const int k = g.index(i, j);
            if (!g.mask[k]) continue;
            const cplx w = g.node(i, j);
            const cplx xi = diffeo_invert(d, w);
            out.values[k] = xi == w ? m.values[k] : evaluate(m, xi);
        }
    if (m.closure) {
        const MapClosure base = m.closure;
        const Diffeo dd = d;
        out.closure = [base, dd](cplx w) { return base(diffeo_invert(dd, w)); };
    }
    return out;
}

/// Right-hand side of the exact change-of-variables energy identity:
///   2 Int D |z_xib|^2 / J  -  4 Re Int Hopf * z_xib * conj(z_xi) / J,
/// J = |z_xi|^2 - |z_xib|^2 > 0 required at every node.
inline double energy_difference_exact(const WirtingerJet& jet, const Diffeo& d) {
    const Grid& g = *jet.grid;
    const double h2 = g.spacing * g.spacing;
    double total = 0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const int k = g.index(i, j);
            if (!jet.has(k)) continue;
            const cplx p = g.node(i, j);
            const cplx a = d.z_xi(p), b = d.z_xib(p);
            const double J = std::norm(a) - std::norm(b);
            if (J <= 0) throw std::invalid_argument("Jacobian condition violated at a node");
            if (b == cplx(0, 0)) continue;
            const double D = std::norm(jet.fz[k]) + std::norm(jet.fzb[k]);
            const cplx hopf = jet.fz[k] * std::conj(jet.fzb[k]);
            total += (2.0 * D * std::norm(b) - 4.0 * std::real(hopf * b * std::conj(a))) / J *
                     g.weight[k] * h2;
        }
    return total;
}

inline double energy_difference_exact(const SampledMap& m, const Diffeo& d,
                                      DiffOrder order = DiffOrder::second) {
    return energy_difference_exact(wirtinger(m, order), d);
}

enum class JetMode { fd2, fd4, exact };

inline WirtingerJet make_jet(const SampledMap& m, JetMode mode) {
    switch (mode) {
        case JetMode::fd4: return wirtinger(m, DiffOrder::fourth);
        case JetMode::exact: return exact_jet(m);
        default: return wirtinger(m, DiffOrder::second);
    }
}

/// Least-squares cubic fit E(eps) ~ c0 + c1 eps + c2 eps^2 + c3 eps^3.
struct CubicFit {
    double c0 = 0, c1 = 0, c2 = 0, c3 = 0;
    double max_residual = 0;
};

inline CubicFit fit_cubic(const std::vector<double>& eps, const std::vector<double>& val) {
    if (eps.size() < 4) throw std::invalid_argument("cubic fit needs at least 4 samples");
    if (eps.size() != val.size()) throw std::invalid_argument("size mismatch");
    double s = 0;
    for (double e : eps) s = std::max(s, std::abs(e));
    if (s == 0) throw std::invalid_argument("cubic fit needs a nonzero epsilon range");

    long double A[4][4] = {};
    long double rhs[4] = {};
    for (size_t k = 0; k < eps.size(); ++k) {
        const long double t = eps[k] / s;
        long double pw[4] = {1.0L, t, t * t, t * t * t};
        for (int r = 0; r < 4; ++r) {
            rhs[r] += pw[r] * val[k];
            for (int c = 0; c < 4; ++c) A[r][c] += pw[r] * pw[c];
        }
    }
    // Gaussian elimination with partial pivoting
    int perm[4] = {0, 1, 2, 3};
    for (int col = 0; col < 4; ++col) {
        int piv = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::abs((double)A[perm[r]][col]) > std::abs((double)A[perm[piv]][col])) piv = r;
        std::swap(perm[col], perm[piv]);
        for (int r = col + 1; r < 4; ++r) {
            const long double f = A[perm[r]][col] / A[perm[col]][col];
            for (int c = col; c < 4; ++c) A[perm[r]][c] -= f * A[perm[col]][c];
            rhs[perm[r]] -= f * rhs[perm[col]];
        }
    }
    long double x[4];
    for (int r = 3; r >= 0; --r) {
        long double acc = rhs[perm[r]];
        for (int c = r + 1; c < 4; ++c) acc -= A[perm[r]][c] * x[c];
        x[r] = acc / A[perm[r]][r];
    }
    CubicFit fit;
    fit.c0 = static_cast<double>(x[0]);
    fit.c1 = static_cast<double>(x[1] / s);
    fit.c2 = static_cast<double>(x[2] / (s * s));
    fit.c3 = static_cast<double>(x[3] / (s * s * s));
    for (size_t k = 0; k < eps.size(); ++k) {
        const double e = eps[k];
        const double model = fit.c0 + e * (fit.c1 + e * (fit.c2 + e * fit.c3));
        fit.max_residual = std::max(fit.max_residual, std::abs(model - val[k]));
    }
    return fit;
}

/// Default sweep: 0 and +-{1,2,3,4} * eps_max/40.
inline std::vector<double> default_epsilons(double epsmax) {
    std::vector<double> out;
    for (int k = -4; k <= 4; ++k) out.push_back(k * epsmax / 40.0);
    return out;
}

struct VariationSweep {
    std::vector<double> epsilons, energies;
    CubicFit fit;
    double first_variation = 0;  // 4 Re Int Hopf * eta_zb
    double second_variation = 0; // 4 (1/2 Int D |eta_zb|^2 + Re Int Hopf eta_z eta_zb)
    double eps_scale = 0;        // max |eps| of the sweep
};

inline VariationSweep variation_sweep(const SampledMap& m, const TestFunction& eta,
                                      const std::vector<double>& epsilons,
                                      JetMode mode = JetMode::fd2) {
    VariationSweep sw;
    sw.epsilons = epsilons;
    for (const double e : epsilons) {
        const SampledMap composed = compose(m, {eta, e});
        sw.energies.push_back(dirichlet_energy(make_jet(composed, mode)).energy);
        sw.eps_scale = std::max(sw.eps_scale, std::abs(e));
    }
    sw.fit = fit_cubic(sw.epsilons, sw.energies);

    const WirtingerJet jet = make_jet(m, mode);
    const Grid& g = *jet.grid;
    const double h2 = g.spacing * g.spacing;
    double fv = 0, sv_a = 0, sv_b = 0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const int k = g.index(i, j);
            if (!jet.has(k)) continue;
            const cplx p = g.node(i, j);
            const cplx ezb = eta.eta_zb(p);
            if (ezb == cplx(0, 0) && eta.eta_z(p) == cplx(0, 0)) continue;
            const cplx hopf = jet.fz[k] * std::conj(jet.fzb[k]);
            const double w = g.weight[k] * h2;
            fv += std::real(hopf * ezb) * w;
            sv_a += (std::norm(jet.fz[k]) + std::norm(jet.fzb[k])) * std::norm(ezb) * w;
            sv_b += std::real(hopf * eta.eta_z(p) * ezb) * w;
        }
    sw.first_variation = 4.0 * fv;
    sw.second_variation = 4.0 * (0.5 * sv_a + sv_b);
    return sw;
}

struct SecondVariationValue {
    double value = 0; // 1/2 Int D |eta_zb|^2 + Re Int Hopf eta_z eta_zb
    double scale = 0; // 1/2 Int D |eta_zb|^2 + |Re Int Hopf eta_z eta_zb|
    double ratio = 0;
};

inline SecondVariationValue second_variation_value(const WirtingerJet& jet,
                                                   const TestFunction& eta) {
    const Grid& g = *jet.grid;
    const double h2 = g.spacing * g.spacing;
    double a = 0, b = 0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const int k = g.index(i, j);
            if (!jet.has(k)) continue;
            const cplx p = g.node(i, j);
            const cplx ezb = eta.eta_zb(p);
            const cplx ez = eta.eta_z(p);
            if (ezb == cplx(0, 0) && ez == cplx(0, 0)) continue;
            const double w = g.weight[k] * h2;
            a += 0.5 * (std::norm(jet.fz[k]) + std::norm(jet.fzb[k])) * std::norm(ezb) * w;
            b += std::real(jet.fz[k] * std::conj(jet.fzb[k]) * ez * ezb) * w;
        }
    SecondVariationValue v;
    v.value = a + b;
    v.scale = a + std::abs(b);
    v.ratio = v.scale > 0 ? v.value / v.scale : 0.0;
    return v;
}

inline std::vector<SecondVariationValue> check_second_variation(
    const SampledMap& m, const std::vector<TestFunction>& etas, JetMode mode = JetMode::fd2) {
    const WirtingerJet jet = make_jet(m, mode);
    std::vector<SecondVariationValue> out;
    out.reserve(etas.size());
    for (const TestFunction& eta : etas) out.push_back(second_variation_value(jet, eta));
    return out;
}

struct HolomorphicInequalityValue {
    double lhs = 0;   // Int |H| |eta_zb|^2
    double rhs = 0;   // |Int H eta_z eta_zb|
    double margin = 0;
};

/// Int |H||eta_zb|^2 >= |Int H eta_z eta_zb| for holomorphic H; both
/// integrals by grid quadrature against the test function's exact derivatives.
inline std::vector<HolomorphicInequalityValue> check_holomorphic_inequality(
    const MapClosure& H, const std::vector<TestFunction>& etas, const Grid& g) {
    const double h2 = g.spacing * g.spacing;
    std::vector<HolomorphicInequalityValue> out;
    for (const TestFunction& eta : etas) {
        double lhs = 0;
        cplx rhs(0, 0);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const int k = g.index(i, j);
                if (!g.mask[k]) continue;
                const cplx p = g.node(i, j);
                const cplx ezb = eta.eta_zb(p);
                const cplx ez = eta.eta_z(p);
                if (ezb == cplx(0, 0) && ez == cplx(0, 0)) continue;
                const cplx Hv = H(p);
                const double w = g.weight[k] * h2;
                lhs += std::abs(Hv) * std::norm(ezb) * w;
                rhs += Hv * ez * ezb * w;
            }
        HolomorphicInequalityValue v;
        v.lhs = lhs;
        v.rhs = std::abs(rhs);
        v.margin = (v.lhs - v.rhs) / std::max(v.lhs, 1e-300);
        out.push_back(v);
    }
    return out;
}

struct StrictIncreaseReport {
    double min_margin = std::numeric_limits<double>::infinity();
    bool all_increase = false;
    double jacobian_nonzero_fraction = 0;
};

/// For a Hopf-harmonic map with J != 0 a.e., every nontrivial small inner
/// variation must strictly increase the energy.
inline StrictIncreaseReport check_strict_increase(const SampledMap& m,
                                                  const std::vector<TestFunction>& etas,
                                                  const std::vector<double>& epsilons,
                                                  JetMode mode = JetMode::fd2) {
    const WirtingerJet jet = make_jet(m, mode);
    const Grid& g = *jet.grid;
    const EnergyReport base = dirichlet_energy(jet);
    double area = 0;
    for (size_t k = 0; k < g.size(); ++k)
        if (g.mask[k]) area += g.weight[k];
    area *= g.spacing * g.spacing;
    const double jfloor = 1e-9 * base.energy / area;
    size_t nonzero = 0, total = 0;
    for (size_t k = 0; k < g.size(); ++k) {
        if (!jet.has(k)) continue;
        ++total;
        if (std::abs(std::norm(jet.fz[k]) - std::norm(jet.fzb[k])) > jfloor) ++nonzero;
    }
    StrictIncreaseReport rep;
    rep.jacobian_nonzero_fraction = total ? static_cast<double>(nonzero) / total : 0.0;
    if (rep.jacobian_nonzero_fraction < 0.99)
        throw std::invalid_argument("map does not satisfy J != 0 a.e. on the grid");

    rep.all_increase = true;
    for (const TestFunction& eta : etas)
        for (const double e : epsilons) {
            if (e == 0.0) continue;
            const double energy = dirichlet_energy(make_jet(compose(m, {eta, e}), mode)).energy;
            const double margin = energy - base.energy;
            rep.min_margin = std::min(rep.min_margin, margin);
            if (margin <= 0) rep.all_increase = false;
        }
    return rep;
}

struct CriticalDirectionResult {
    cplx c{1, 0};
    double defect = 0;
};

/// Best unimodular constant for the equality condition Hopf*eta = c|Hopf|*conj(eta),
/// minimizing the L1 defect over arg c (coarse scan + golden section to 1e-4 rad).
inline CriticalDirectionResult critical_direction(const SampledMap& m, const TestFunction& eta,
                                                  JetMode mode = JetMode::fd2) {
    const WirtingerJet jet = make_jet(m, mode);
    const Grid& g = *jet.grid;
    const double h2 = g.spacing * g.spacing;
    const EnergyReport er = dirichlet_energy(jet);
    if (er.hopf_l1 <= 1e-12 * er.energy) return {cplx(1, 0), 0.0};

    std::vector<cplx> A, B;
    std::vector<double> W;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const int k = g.index(i, j);
            if (!jet.has(k)) continue;
            const cplx p = g.node(i, j);
            const cplx ev = eta.eta(p);
            if (ev == cplx(0, 0)) continue;
            const cplx hopf = jet.fz[k] * std::conj(jet.fzb[k]);
            A.push_back(hopf * ev);
            B.push_back(std::abs(hopf) * std::conj(ev));
            W.push_back(g.weight[k] * h2);
        }
    auto defect = [&](double theta) {
        const cplx c = std::polar(1.0, theta);
        double d = 0;
        for (size_t k = 0; k < A.size(); ++k) d += std::abs(A[k] - c * B[k]) * W[k];
        return d;
    };
    double best_theta = 0, best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 64; ++k) {
        const double th = 2.0 * kPi * k / 64.0;
        const double d = defect(th);
        if (d < best) {
            best = d;
            best_theta = th;
        }
    }
    double lo = best_theta - 2.0 * kPi / 64.0, hi = best_theta + 2.0 * kPi / 64.0;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = defect(x1), f2 = defect(x2);
    while (hi - lo > 1e-4) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = defect(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = defect(x2);
        }
    }
    const double theta = 0.5 * (lo + hi);
    return {std::polar(1.0, theta), defect(theta)};
}

} // namespace hopfvar
