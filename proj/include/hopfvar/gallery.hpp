#pragma once

#include <map>

#include "hopfvar/energy.hpp"

namespace hopfvar {

enum class JacobianSign { zero = 0, positive = 1, negative = -1, mixed = 2 };

/// A constructed map with analytic closures and its expected record, used as
/// a fixture across the verification suites.
struct GalleryEntry {
    std::string name;
    PlanarDomain domain;
    MapClosure map;
    JetClosure jet;            // exact Wirtinger derivatives
    MapClosure hopf_closure;   // null when no closed form is recorded
    double energy_value = 0;
    bool energy_is_bound = false; // true: energy_value is an upper bound
    JacobianSign jacobian_sign = JacobianSign::mixed;
    bool hopf_harmonic = false;

    GalleryEntry(std::string n, PlanarDomain d) : name(std::move(n)), domain(std::move(d)) {}

    SampledMap make(int resolution) const {
        return sample(build_grid(domain, resolution), map, jet);
    }
};

/// h(z) = z / |z| on the annulus r_inner < |z| < 1. Hopf product -1/(4 z^2),
/// energy pi log(1/r_inner), Jacobian identically zero.
inline GalleryEntry radial_squeeze(double r_inner) {
    if (!(r_inner > 0 && r_inner < 1)) throw std::invalid_argument("need 0 < r_inner < 1");
    GalleryEntry e("radial_squeeze", PlanarDomain::annulus(cplx(0, 0), r_inner, 1.0));
    e.map = [](cplx z) { return z / std::abs(z); };
    e.jet = [](cplx z, cplx& fz, cplx& fzb) {
        const double a = std::abs(z);
        fz = cplx(0.5 / a, 0);
        fzb = -z * z / (2.0 * a * a * a);
    };
    e.hopf_closure = [](cplx z) { return -1.0 / (4.0 * z * z); };
    e.energy_value = kPi * std::log(1.0 / r_inner);
    e.jacobian_sign = JacobianSign::zero;
    e.hopf_harmonic = true;
    return e;
}

/// g(z) = (z + r/conj(z)) / (1 + r): the harmonic map with the same boundary
/// values as the radial squeeze, energy 2 pi (1 - r)/(1 + r).
inline GalleryEntry harmonic_competitor(double r_inner) {
    if (!(r_inner > 0 && r_inner < 1)) throw std::invalid_argument("need 0 < r_inner < 1");
    const double r = r_inner;
    GalleryEntry e("harmonic_competitor", PlanarDomain::annulus(cplx(0, 0), r, 1.0));
    e.map = [r](cplx z) { return (z + r / std::conj(z)) / (1.0 + r); };
    e.jet = [r](cplx z, cplx& fz, cplx& fzb) {
        fz = cplx(1.0 / (1.0 + r), 0);
        fzb = -r / ((1.0 + r) * std::conj(z) * std::conj(z));
    };
    e.hopf_closure = [r](cplx z) { return -r / ((1.0 + r) * (1.0 + r) * z * z); };
    e.energy_value = 2.0 * kPi * (1.0 - r) / (1.0 + r);
    e.jacobian_sign = JacobianSign::mixed; // flips sign at |z| = sqrt(r)
    e.hopf_harmonic = true;
    return e;
}

/// h(z) = z + a conj(z)^2 on the unit disk: 1-jet (1, 2 a conj(z)), Hopf
/// product 2 conj(a) z, J = 1 - 4|a|^2 |z|^2 > 0 for |a| < 1/2.
inline GalleryEntry perturbed_harmonic(cplx a) {
    if (!(std::abs(a) < 0.5)) throw std::invalid_argument("need |a| < 1/2");
    GalleryEntry e("perturbed_harmonic", PlanarDomain::disk(cplx(0, 0), 1.0));
    e.map = [a](cplx z) { return z + a * std::conj(z) * std::conj(z); };
    e.jet = [a](cplx z, cplx& fz, cplx& fzb) {
        fz = cplx(1, 0);
        fzb = 2.0 * a * std::conj(z);
    };
    e.hopf_closure = [a](cplx z) { return 2.0 * std::conj(a) * z; };
    e.energy_value = kPi + 2.0 * kPi * std::norm(a);
    e.jacobian_sign = JacobianSign::positive;
    e.hopf_harmonic = true;
    return e;
}

// ---- reflections about concentric circles ------------------------------------

namespace concentric {

inline double outer_radius(int n) { return 1.0 / (double(n) * n); } // r_n = n^-2
inline double switch_radius(int n) {
    return std::sqrt(1.0 / (double(n) * (n + 1.0) * (n + 1.0) * (n + 1.0))); // rho_n
}

/// Index n of the annulus r_{n+1} <= |z| < r_n, or n_max + 1 for the inner disk.
inline int annulus_index(double t, int n_max) {
    if (t <= outer_radius(n_max + 1)) return n_max + 1;
    int n = std::max(1, static_cast<int>(std::floor(1.0 / std::sqrt(t))));
    while (t >= outer_radius(n) && n > 1) --n;
    while (t < outer_radius(n + 1)) ++n;
    return std::min(n, n_max + 1);
}

/// Exact Dirichlet energy of the map restricted to annulus A_n.
inline double annulus_energy(int n) {
    // antiholomorphic part n conj(z) on rho_n <= |z| <= r_n, holomorphic part
    // 1/((n+1)^3 z) on r_{n+1} <= |z| <= rho_n
    const double rn = outer_radius(n), rn1 = outer_radius(n + 1), rho = switch_radius(n);
    const double outer = kPi * double(n) * n * (rn * rn - rho * rho);
    const double c = std::pow(double(n) + 1.0, 3.0);
    const double inner = kPi / (c * c) * (1.0 / (rn1 * rn1) - 1.0 / (rho * rho));
    return outer + inner;
}

inline double truncated_energy(int n_max) {
    double total = 0;
    for (int n = 1; n <= n_max; ++n) total += annulus_energy(n);
    return total;
}

} // namespace concentric

/// Piecewise reflection map about concentric circles, truncated at n_max with
/// the inner disk sent to 0. Hopf product vanishes identically; finite total
/// energy below pi^3/3.
inline GalleryEntry concentric_reflections(int n_max) {
    if (n_max < 2) throw std::invalid_argument("need n_max >= 2");
    GalleryEntry e("concentric_reflections", PlanarDomain::disk(cplx(0, 0), 1.0));
    e.map = [n_max](cplx z) -> cplx {
        const double t = std::abs(z);
        if (t == 0.0) return {0, 0};
        const int n = concentric::annulus_index(t, n_max);
        if (n > n_max) return {0, 0};
        if (t >= concentric::switch_radius(n)) return double(n) * std::conj(z);
        return 1.0 / (std::pow(double(n) + 1.0, 3.0) * z);
    };
    e.jet = [n_max](cplx z, cplx& fz, cplx& fzb) {
        const double t = std::abs(z);
        fz = fzb = {0, 0};
        if (t == 0.0) return;
        const int n = concentric::annulus_index(t, n_max);
        if (n > n_max) return;
        if (t >= concentric::switch_radius(n))
            fzb = cplx(double(n), 0);
        else
            fz = -1.0 / (std::pow(double(n) + 1.0, 3.0) * z * z);
    };
    e.hopf_closure = [](cplx) { return cplx(0, 0); };
    e.energy_value = kPi * kPi * kPi / 3.0;
    e.energy_is_bound = true;
    e.jacobian_sign = JacobianSign::mixed;
    e.hopf_harmonic = true;
    return e;
}

// ---- nowhere holomorphic singular Hopf harmonic -------------------------------

/// Sign function chi = +-1 on [-1, 1] whose sign sets both meet every dyadic
/// interval of width 2^-depth with positive measure: at level l, every dyadic
/// interval of width 2^-l donates a centered sub-interval (fraction 4^-l) to
/// its minority sign.
struct WellDistributedSigns {
    std::vector<double> breakpoints; // ascending, first = -1, last = 1
    std::vector<int> signs;          // sign on [breakpoints[k], breakpoints[k+1])
    int depth = 0;

    int sign_at(double x) const {
        if (x < breakpoints.front() || x >= breakpoints.back()) return 0;
        size_t lo = 0, hi = breakpoints.size() - 1;
        while (lo + 1 < hi) {
            const size_t mid = (lo + hi) / 2;
            (breakpoints[mid] <= x ? lo : hi) = mid;
        }
        return signs[lo];
    }
    double measure(double a, double b, int sign) const {
        double total = 0;
        for (size_t k = 0; k + 1 < breakpoints.size(); ++k) {
            if (signs[k] != sign) continue;
            const double lo = std::max(a, breakpoints[k]);
            const double hi = std::min(b, breakpoints[k + 1]);
            if (hi > lo) total += hi - lo;
        }
        return total;
    }
    /// u(x) = Int_0^x chi
    double integral_from_zero(double x) const {
        double acc = 0;
        const double a = std::min(0.0, x), b = std::max(0.0, x);
        for (size_t k = 0; k + 1 < breakpoints.size(); ++k) {
            const double lo = std::max(a, breakpoints[k]);
            const double hi = std::min(b, breakpoints[k + 1]);
            if (hi > lo) acc += signs[k] * (hi - lo);
        }
        return x >= 0 ? acc : -acc;
    }
};

inline WellDistributedSigns well_distributed_signs(int depth) {
    if (depth < 2) throw std::invalid_argument("need depth >= 2");
    std::map<double, int> runs; // start -> sign on [start, next)
    runs[-1.0] = 1;
    runs[1.0] = 0; // sentinel

    auto sign_at = [&](double x) {
        auto it = runs.upper_bound(x);
        --it;
        return it->second;
    };
    auto set_range = [&](double a, double b, int s) {
        const int after = sign_at(b);
        auto it = runs.lower_bound(a);
        while (it != runs.end() && it->first < b) it = runs.erase(it);
        runs[a] = s;
        runs[b] = after;
    };
    auto measure = [&](double a, double b, int s) {
        double total = 0;
        auto it = runs.upper_bound(a);
        --it;
        for (; it != runs.end() && it->first < b; ++it) {
            auto next = std::next(it);
            const double hi = std::min(b, next == runs.end() ? 1.0 : next->first);
            const double lo = std::max(a, it->first);
            if (it->second == s && hi > lo) total += hi - lo;
        }
        return total;
    };

    for (int level = 1; level <= depth; ++level) {
        const double w = std::pow(2.0, -level);
        const double donate = w * std::pow(4.0, -level);
        const long cells = static_cast<long>(std::llround(2.0 / w));
        for (long k = 0; k < cells; ++k) {
            const double a = -1.0 + k * w, b = a + w;
            const double plus = measure(a, b, 1);
            const double minus = (b - a) - plus;
            const int minority = plus < minus ? 1 : -1;
            const double mid = 0.5 * (a + b);
            set_range(mid - 0.5 * donate, mid + 0.5 * donate, minority);
        }
    }

    WellDistributedSigns out;
    out.depth = depth;
    for (auto it = runs.begin(); it != runs.end(); ++it) {
        out.breakpoints.push_back(it->first);
        if (std::next(it) != runs.end()) out.signs.push_back(it->second);
    }
    return out;
}

/// h(z) = u(x) + i y with u' = chi = +-1 on a well-distributed pair of sign
/// sets: the Hopf product vanishes at every differentiability point yet h is
/// holomorphic or antiholomorphic on no open set. |Dh|^2 == 1, J = chi.
inline GalleryEntry nowhere_holomorphic(int depth) {
    auto signs = std::make_shared<WellDistributedSigns>(well_distributed_signs(depth));
    GalleryEntry e("nowhere_holomorphic", PlanarDomain::disk(cplx(0, 0), 1.0));
    e.map = [signs](cplx z) {
        return cplx(signs->integral_from_zero(z.real()), z.imag());
    };
    e.jet = [signs](cplx z, cplx& fz, cplx& fzb) {
        const double chi = signs->sign_at(z.real());
        fz = cplx(0.5 * (chi + 1.0), 0);
        fzb = cplx(0.5 * (chi - 1.0), 0);
    };
    e.hopf_closure = [](cplx) { return cplx(0, 0); };
    e.energy_value = kPi; // |Dh|^2 == 1 on the unit disk
    e.jacobian_sign = JacobianSign::mixed;
    e.hopf_harmonic = true;
    return e;
}

inline std::vector<GalleryEntry> gallery_default() {
    std::vector<GalleryEntry> out;
    out.push_back(radial_squeeze(0.5));
    out.push_back(harmonic_competitor(0.5));
    out.push_back(perturbed_harmonic(cplx(0.15, 0)));
    out.push_back(concentric_reflections(20));
    out.push_back(nowhere_holomorphic(4));
    return out;
}

} // namespace hopfvar
