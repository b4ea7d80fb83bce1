#pragma once

#include <complex>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace hopfvar {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

inline double sq(double x) { return x * x; }

/// Wrap an angle to (-pi, pi].
inline double wrap_angle(double a) {
    a = std::fmod(a, 2.0 * kPi);
    if (a <= -kPi) a += 2.0 * kPi;
    if (a > kPi) a -= 2.0 * kPi;
    return a;
}

struct BBox {
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;

    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    bool contains(cplx p) const {
        return p.real() >= x0 && p.real() <= x1 && p.imag() >= y0 && p.imag() <= y1;
    }
    BBox merged(const BBox& o) const {
        return {std::min(x0, o.x0), std::min(y0, o.y0), std::max(x1, o.x1), std::max(y1, o.y1)};
    }
};

} // namespace hopfvar
