#pragma once

#include <algorithm>
#include <limits>
#include <variant>
#include <vector>

#include "hopfvar/common.hpp"

namespace hopfvar {

// Primitive regions. Signed distance is positive inside; for composed shapes
// the value is an inside-consistent lower bound on the true boundary distance.
struct Disk {
    cplx center;
    double radius;
    double sdf(cplx p) const { return radius - std::abs(p - center); }
    BBox bbox() const {
        return {center.real() - radius, center.imag() - radius,
                center.real() + radius, center.imag() + radius};
    }
};

struct Annulus {
    cplx center;
    double r_inner, r_outer;
    double sdf(cplx p) const {
        const double d = std::abs(p - center);
        return std::min(d - r_inner, r_outer - d);
    }
    BBox bbox() const {
        return {center.real() - r_outer, center.imag() - r_outer,
                center.real() + r_outer, center.imag() + r_outer};
    }
};

struct RectShape {
    double x0, y0, x1, y1;
    double sdf(cplx p) const {
        return std::min(std::min(p.real() - x0, x1 - p.real()),
                        std::min(p.imag() - y0, y1 - p.imag()));
    }
    BBox bbox() const { return {x0, y0, x1, y1}; }
};

struct PolygonShape {
    std::vector<cplx> vertices; // closed implicitly (last connects to first)

    bool contains(cplx p) const {
        // even-odd crossing rule
        bool in = false;
        const size_t n = vertices.size();
        for (size_t i = 0, j = n - 1; i < n; j = i++) {
            const cplx a = vertices[i], b = vertices[j];
            if ((a.imag() > p.imag()) != (b.imag() > p.imag())) {
                const double x = a.real() + (p.imag() - a.imag()) / (b.imag() - a.imag()) *
                                                (b.real() - a.real());
                if (p.real() < x) in = !in;
            }
        }
        return in;
    }
    double edge_distance(cplx p) const {
        double best = std::numeric_limits<double>::infinity();
        const size_t n = vertices.size();
        for (size_t i = 0, j = n - 1; i < n; j = i++) {
            const cplx a = vertices[j], e = vertices[i] - a;
            const double len2 = std::norm(e);
            const double dot = (p.real() - a.real()) * e.real() + (p.imag() - a.imag()) * e.imag();
            const double t = len2 > 0 ? std::clamp(dot / len2, 0.0, 1.0) : 0.0;
            best = std::min(best, std::abs(p - (a + t * e)));
        }
        return best;
    }
    double sdf(cplx p) const { return contains(p) ? edge_distance(p) : -edge_distance(p); }
    BBox bbox() const {
        BBox b{vertices[0].real(), vertices[0].imag(), vertices[0].real(), vertices[0].imag()};
        for (const cplx& v : vertices) {
            b.x0 = std::min(b.x0, v.real());
            b.y0 = std::min(b.y0, v.imag());
            b.x1 = std::max(b.x1, v.real());
            b.y1 = std::max(b.y1, v.imag());
        }
        return b;
    }
};

using Shape = std::variant<Disk, Annulus, RectShape, PolygonShape>;

enum class SetOp { Union, Difference };

/// Boolean-composable planar region built from disks, annuli, axis-aligned
/// rectangles and polygons. inside(p) <=> boundary_distance(p) > 0.
class PlanarDomain {
public:
    struct Primitive {
        SetOp op;
        Shape shape;
    };

    static PlanarDomain disk(cplx center, double radius) {
        return PlanarDomain(Disk{center, radius});
    }
    static PlanarDomain annulus(cplx center, double r_inner, double r_outer) {
        return PlanarDomain(Annulus{center, r_inner, r_outer});
    }
    static PlanarDomain rect(double x0, double y0, double x1, double y1) {
        return PlanarDomain(RectShape{x0, y0, x1, y1});
    }
    static PlanarDomain polygon(std::vector<cplx> vertices) {
        if (vertices.size() < 3) throw std::invalid_argument("polygon needs >= 3 vertices");
        return PlanarDomain(PolygonShape{std::move(vertices)});
    }

    PlanarDomain& add(Shape s) {
        prims_.push_back({SetOp::Union, std::move(s)});
        return *this;
    }
    PlanarDomain& subtract(Shape s) {
        prims_.push_back({SetOp::Difference, std::move(s)});
        return *this;
    }

    /// Signed distance bound: positive inside, negative outside.
    double signed_distance(cplx p) const {
        double d = -std::numeric_limits<double>::infinity();
        for (const Primitive& pr : prims_) {
            const double s = std::visit([&](const auto& sh) { return sh.sdf(p); }, pr.shape);
            d = pr.op == SetOp::Union ? std::max(d, s) : std::min(d, -s);
        }
        return d;
    }
    bool inside(cplx p) const { return signed_distance(p) > 0.0; }
    double boundary_distance(cplx p) const { return signed_distance(p); }

    BBox bounding_box() const {
        BBox b = std::visit([](const auto& sh) { return sh.bbox(); }, prims_.front().shape);
        for (const Primitive& pr : prims_)
            b = b.merged(std::visit([](const auto& sh) { return sh.bbox(); }, pr.shape));
        return b;
    }

    const std::vector<Primitive>& primitives() const { return prims_; }

private:
    explicit PlanarDomain(Shape s) { prims_.push_back({SetOp::Union, std::move(s)}); }
    std::vector<Primitive> prims_;
};

} // namespace hopfvar
