#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "hopfvar/energy.hpp"
#include "hopfvar/gallery.hpp"
#include "hopfvar/quaddiff.hpp"
#include "hopfvar/rect_partition.hpp"
#include "hopfvar/variation.hpp"

namespace hopfvar {

using json = nlohmann::ordered_json;

namespace io {

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    out << text;
}

// ---- CSV ---------------------------------------------------------------------

inline void write_field_csv(const std::filesystem::path& path, const SampledMap& m) {
    const Grid& g = *m.grid;
    std::string out = "i,j,x,y,re,im\n";
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            if (!g.masked(i, j)) continue;
            const cplx p = g.node(i, j);
            const cplx v = m.values[g.index(i, j)];
            out += std::to_string(i) + "," + std::to_string(j) + "," + fmt(p.real()) + "," +
                   fmt(p.imag()) + "," + fmt(v.real()) + "," + fmt(v.imag()) + "\n";
        }
    write_text(path, out);
}

inline void write_hopf_csv(const std::filesystem::path& path, const HopfField& hf) {
    const Grid& g = *hf.grid;
    std::string out = "i,j,x,y,re,im\n";
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const int k = g.index(i, j);
            if (!hf.defined[k]) continue;
            const cplx p = g.node(i, j);
            out += std::to_string(i) + "," + std::to_string(j) + "," + fmt(p.real()) + "," +
                   fmt(p.imag()) + "," + fmt(hf.values[k].real()) + "," +
                   fmt(hf.values[k].imag()) + "\n";
        }
    write_text(path, out);
}

inline void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& t) {
    std::string out = "x,y\n";
    for (const cplx p : t.points) out += fmt(p.real()) + "," + fmt(p.imag()) + "\n";
    write_text(path, out);
}

inline void write_sweep_csv(const std::filesystem::path& path, const VariationSweep& sw) {
    std::string out = "epsilon,energy\n";
    for (size_t k = 0; k < sw.epsilons.size(); ++k)
        out += fmt(sw.epsilons[k]) + "," + fmt(sw.energies[k]) + "\n";
    write_text(path, out);
}

// ---- JSON --------------------------------------------------------------------

inline json grid_json(const Grid& g) {
    return json{{"origin", {g.origin.real(), g.origin.imag()}},
                {"spacing", g.spacing},
                {"nx", g.nx},
                {"ny", g.ny},
                {"mask_count", g.mask_count()}};
}

inline json energy_json(const EnergyReport& r) {
    return json{{"energy", r.energy},
                {"jacobian_integral", r.jacobian_integral},
                {"hopf_l1", r.hopf_l1}};
}

inline json sweep_json(const VariationSweep& sw) {
    const double c1_threshold = 1e-2 * std::max(sw.fit.c2, 0.0) * sw.eps_scale;
    return json{{"epsilons", sw.epsilons},
                {"energies", sw.energies},
                {"fit", {{"c0", sw.fit.c0},
                         {"c1", sw.fit.c1},
                         {"c2", sw.fit.c2},
                         {"c3", sw.fit.c3},
                         {"max_residual", sw.fit.max_residual}}},
                {"first_variation", sw.first_variation},
                {"second_variation", sw.second_variation},
                {"eps_scale", sw.eps_scale},
                {"verdicts",
                 {{"first_variation_negligible", std::abs(sw.fit.c1) <= c1_threshold},
                  {"second_variation_nonnegative",
                   sw.fit.c2 >= -1e-3 * std::abs(sw.fit.c0)}}}};
}

inline json partition_json(const RectPartition& part) {
    json rects = json::array();
    for (size_t c = 0; c < part.cells.size(); ++c) {
        const auto& cell = part.cells[c];
        rects.push_back({{"x0", part.x0(cell)},
                         {"y0", part.y0(cell)},
                         {"x1", part.x1(cell)},
                         {"y1", part.y1(cell)},
                         {"branch_sign", part.branch_sign[c]}});
    }
    json sides = json::array();
    for (const auto& s : part.sides)
        sides.push_back({{"a", s.a},
                         {"b", s.b},
                         {"p", {s.p.real(), s.p.imag()}},
                         {"q", {s.q.real(), s.q.imag()}}});
    json corners = json::array();
    for (const cplx c : part.corners) corners.push_back({c.real(), c.imag()});
    json zeros = json::array();
    for (const cplx z : part.zeros) zeros.push_back({z.real(), z.imag()});
    return json{{"eps", part.eps},
                {"rectangles", rects},
                {"sides", sides},
                {"corners", corners},
                {"zeros", zeros}};
}

inline json second_variation_report_json(const std::vector<SecondVariationValue>& values) {
    json out = json::array();
    for (const auto& v : values)
        out.push_back({{"value", v.value}, {"scale", v.scale}, {"ratio", v.ratio}});
    return out;
}

inline json inequality_report_json(const std::vector<HolomorphicInequalityValue>& values) {
    json out = json::array();
    for (const auto& v : values)
        out.push_back({{"lhs", v.lhs}, {"rhs", v.rhs}, {"margin", v.margin}});
    return out;
}

inline json catalog_json(const std::vector<CatalogEntry>& entries) {
    json out = json::array();
    for (const auto& e : entries) {
        json zeros = json::array(), poles = json::array();
        for (const auto& z : e.qd.zeros)
            zeros.push_back({{"position", {z.position.real(), z.position.imag()}},
                             {"order", z.order}});
        for (const auto& p : e.qd.poles)
            poles.push_back({{"position", {p.position.real(), p.position.imag()}},
                             {"order", p.order}});
        out.push_back({{"name", e.name},
                       {"expression", e.expression},
                       {"zeros", zeros},
                       {"poles", poles}});
    }
    return out;
}

inline json gallery_json(const std::vector<GalleryEntry>& entries) {
    json out = json::array();
    for (const auto& e : entries) {
        const char* jsign = e.jacobian_sign == JacobianSign::zero       ? "zero"
                            : e.jacobian_sign == JacobianSign::positive ? "positive"
                            : e.jacobian_sign == JacobianSign::negative ? "negative"
                                                                        : "mixed";
        out.push_back({{"name", e.name},
                       {"energy", e.energy_value},
                       {"energy_is_bound", e.energy_is_bound},
                       {"jacobian_sign", jsign},
                       {"hopf_harmonic", e.hopf_harmonic},
                       {"has_hopf_closure", static_cast<bool>(e.hopf_closure)}});
    }
    return out;
}

// ---- SVG ---------------------------------------------------------------------

/// Minimal SVG 1.1 canvas in mathematical orientation (y up).
class SvgCanvas {
public:
    SvgCanvas(BBox view, int width_px = 900) : view_(view) {
        const double aspect = view.height() / view.width();
        w_ = width_px;
        h_ = static_cast<int>(width_px * aspect);
        scale_ = (w_ - 2.0 * pad_) / view.width();
    }

    void polyline(const std::vector<cplx>& pts, const std::string& stroke, double width_px,
                  bool closed = false, const std::string& dash = "") {
        if (pts.size() < 2) return;
        std::string d = "M ";
        for (size_t k = 0; k < pts.size(); ++k) {
            if (k == 1) d += "L ";
            d += fmt(px(pts[k]).real()) + " " + fmt(px(pts[k]).imag()) + " ";
        }
        if (closed) d += "Z";
        body_ += "<path d=\"" + d + "\" fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" +
                 fmt(width_px) + "\"" + (dash.empty() ? "" : " stroke-dasharray=\"" + dash + "\"") +
                 "/>\n";
    }
    void circle(cplx center, double radius, const std::string& stroke, double width_px,
                const std::string& fill = "none", const std::string& dash = "") {
        const cplx c = px(center);
        body_ += "<circle cx=\"" + fmt(c.real()) + "\" cy=\"" + fmt(c.imag()) + "\" r=\"" +
                 fmt(radius * scale_) + "\" fill=\"" + fill + "\" stroke=\"" + stroke +
                 "\" stroke-width=\"" + fmt(width_px) + "\"" +
                 (dash.empty() ? "" : " stroke-dasharray=\"" + dash + "\"") + "/>\n";
    }
    void dot(cplx center, double radius_px, const std::string& fill) {
        const cplx c = px(center);
        body_ += "<circle cx=\"" + fmt(c.real()) + "\" cy=\"" + fmt(c.imag()) + "\" r=\"" +
                 fmt(radius_px) + "\" fill=\"" + fill + "\"/>\n";
    }
    void cross(cplx center, double size_px, const std::string& stroke) {
        const cplx c = px(center);
        body_ += "<path d=\"M " + fmt(c.real() - size_px) + " " + fmt(c.imag() - size_px) +
                 " L " + fmt(c.real() + size_px) + " " + fmt(c.imag() + size_px) + " M " +
                 fmt(c.real() - size_px) + " " + fmt(c.imag() + size_px) + " L " +
                 fmt(c.real() + size_px) + " " + fmt(c.imag() - size_px) + "\" stroke=\"" +
                 stroke + "\" stroke-width=\"1.5\"/>\n";
    }
    void rect(double x0, double y0, double x1, double y1, const std::string& stroke,
              const std::string& fill = "none", double opacity = 1.0) {
        const cplx a = px(cplx(x0, y1)); // top-left in pixel space
        body_ += "<rect x=\"" + fmt(a.real()) + "\" y=\"" + fmt(a.imag()) + "\" width=\"" +
                 fmt((x1 - x0) * scale_) + "\" height=\"" + fmt((y1 - y0) * scale_) +
                 "\" stroke=\"" + stroke + "\" fill=\"" + fill + "\" fill-opacity=\"" +
                 fmt(opacity) + "\" stroke-width=\"1\"/>\n";
    }
    void text(cplx pos, const std::string& s) {
        const cplx c = px(pos);
        body_ += "<text x=\"" + fmt(c.real()) + "\" y=\"" + fmt(c.imag()) +
                 "\" font-size=\"12\" font-family=\"sans-serif\">" + s + "</text>\n";
    }

    void save(const std::filesystem::path& path) const {
        std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://"
                          "www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
                          std::to_string(w_) + "\" height=\"" + std::to_string(h_) + "\">\n" +
                          "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" + body_ +
                          "</svg>\n";
        write_text(path, out);
    }

private:
    cplx px(cplx p) const {
        return cplx(pad_ + (p.real() - view_.x0) * scale_,
                    pad_ + (view_.y1 - p.imag()) * scale_);
    }
    BBox view_;
    int w_ = 0, h_ = 0;
    double pad_ = 20.0, scale_ = 1.0;
    std::string body_;
};

inline void draw_domain(SvgCanvas& svg, const PlanarDomain& dom) {
    for (const auto& prim : dom.primitives()) {
        const bool diff = prim.op == SetOp::Difference;
        const std::string color = diff ? "#c0392b" : "#2c3e50";
        const std::string dash = diff ? "5,4" : "";
        if (std::holds_alternative<Disk>(prim.shape)) {
            const auto& d = std::get<Disk>(prim.shape);
            svg.circle(d.center, d.radius, color, 1.2, "none", dash);
        } else if (std::holds_alternative<Annulus>(prim.shape)) {
            const auto& a = std::get<Annulus>(prim.shape);
            svg.circle(a.center, a.r_inner, color, 1.2, "none", dash);
            svg.circle(a.center, a.r_outer, color, 1.2, "none", dash);
        } else if (std::holds_alternative<RectShape>(prim.shape)) {
            const auto& r = std::get<RectShape>(prim.shape);
            svg.rect(r.x0, r.y0, r.x1, r.y1, color);
        } else {
            const auto& p = std::get<PolygonShape>(prim.shape);
            svg.polyline(p.vertices, color, 1.2, true, dash);
        }
    }
}

inline void write_domain_svg(const std::filesystem::path& path, const PlanarDomain& dom) {
    SvgCanvas svg(dom.bounding_box());
    draw_domain(svg, dom);
    svg.save(path);
}

/// Layered trajectory plot: domain outline, critical graph, trajectories
/// colored by kind, zeros as dots, poles as crosses.
inline void write_trajectories_svg(const std::filesystem::path& path,
                                   const QuadDifferential& qd, const PlanarDomain& dom,
                                   const std::vector<Trajectory>& trajectories,
                                   const std::vector<Trajectory>& graph = {}) {
    SvgCanvas svg(dom.bounding_box());
    draw_domain(svg, dom);
    for (const auto& t : graph) svg.polyline(t.points, "#bbbbbb", 0.8);
    for (const auto& t : trajectories) {
        const char* color = t.kind == TrajectoryKind::closed     ? "#1f77b4"
                            : t.kind == TrajectoryKind::crosscut ? "#2ca02c"
                            : t.kind == TrajectoryKind::hit_critical ? "#ff7f0e"
                                                                     : "#7f7f7f";
        svg.polyline(t.points, color, 1.4, t.kind == TrajectoryKind::closed);
    }
    for (const auto& z : qd.zeros) svg.dot(z.position, 3.5, "#111111");
    for (const auto& p : qd.poles) svg.cross(p.position, 4.0, "#c0392b");
    svg.save(path);
}

/// Partition overlay: rectangles tinted by branch sign, zeros marked.
inline void write_partition_svg(const std::filesystem::path& path, const RectPartition& part) {
    BBox view{part.xs.front(), part.ys.front(), part.xs.back(), part.ys.back()};
    SvgCanvas svg(view);
    for (size_t c = 0; c < part.cells.size(); ++c) {
        const auto& cell = part.cells[c];
        svg.rect(part.x0(cell), part.y0(cell), part.x1(cell), part.y1(cell), "#555555",
                 part.branch_sign[c] > 0 ? "#aed6f1" : "#f5b7b1", 0.55);
    }
    for (const cplx z : part.zeros) svg.dot(z, 3.5, "#111111");
    svg.save(path);
}

} // namespace io

} // namespace hopfvar
