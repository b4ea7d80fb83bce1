#include <catch2/catch_amalgamated.hpp>

#include "hopfvar/quaddiff.hpp"
#include "oracles.hpp"

using namespace hopfvar;

namespace {

double winding_number(const std::vector<cplx>& loop, cplx around) {
    double total = 0;
    for (size_t k = 0; k + 1 < loop.size(); ++k) {
        const cplx a = loop[k] - around, b = loop[k + 1] - around;
        total += std::arg(b / a);
    }
    return total / (2.0 * kPi);
}

double distance_to_polyline(cplx p, const std::vector<cplx>& path) {
    double best = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k + 1 < path.size(); ++k) {
        const cplx a = path[k], e = path[k + 1] - a;
        const double len2 = std::norm(e);
        const double dot = (p.real() - a.real()) * e.real() + (p.imag() - a.imag()) * e.imag();
        const double t = len2 > 0 ? std::clamp(dot / len2, 0.0, 1.0) : 0.0;
        best = std::min(best, std::abs(p - (a + t * e)));
    }
    return best;
}

double sup_distance_to_lemniscate_loop(const std::vector<cplx>& pts, double r) {
    auto curve = [r](double t) { return leminiscate_trajectory(r, t); };
    double worst = 0;
    for (const cplx p : pts)
        worst = std::max(worst, oracles::distance_to_curve(curve, -kPi / 4, kPi / 4, p, 2048));
    return worst;
}

} // namespace

TEST_CASE("builtin differential values and singularities", "[quaddiff]") {
    auto lem = leminiscate_differential();
    REQUIRE(std::abs(lem.eval(cplx(2, 0)) - cplx(4.0 / 9.0, 0)) < 1e-14);
    REQUIRE(lem.zeros.size() == 1);
    REQUIRE(lem.zeros[0].order == 2);
    REQUIRE(lem.poles.size() == 2);

    // four-pole: roots of the bracketed sum found independently by Newton
    auto bracket = [](cplx z) {
        return 5.0 / (z - 2.0) + 5.0 / (z + 2.0) + 7.0 / (z - 4.0) + 7.0 / (z + 4.0);
    };
    for (const cplx start : {cplx(0.2, 0.1), cplx(2.7, -0.1), cplx(-3.3, 0.05)}) {
        const cplx root = oracles::newton_root(bracket, start);
        double best = 1e9;
        for (const auto& zb : four_pole_differential().zeros)
            best = std::min(best, std::abs(root - zb.position));
        REQUIRE(best < 1e-8);
    }

    // hyperelliptic n = 4: critical circle radius 3^(1/4); partial fractions agree
    auto h4 = hyperelliptic_differential(4);
    bool found = false;
    for (const auto& zc : h4.zeros)
        if (std::abs(std::abs(zc.position) - std::pow(3.0, 0.25)) < 1e-12 && zc.order == 1)
            found = true;
    REQUIRE(found);
    for (const cplx z : {cplx(0.4, 0.3), cplx(-0.2, 0.9), cplx(1.5, -0.7)}) {
        cplx sum(0, 0);
        for (int k = 0; k < 4; ++k) {
            const cplx a = std::polar(1.0, (2.0 * k + 1.0) * kPi / 4.0);
            sum += 1.0 / ((z - a) * (z - a));
        }
        REQUIRE(std::abs(h4.eval(z) - sum) < 1e-11 * (1.0 + std::abs(sum)));
    }
    REQUIRE_THROWS_AS(hyperelliptic_differential(1), std::invalid_argument);
}

TEST_CASE("constant differential traces vertical chords", "[trace]") {
    auto qd = constant_differential();
    auto dom = PlanarDomain::disk(cplx(0, 0), 1.0);
    auto traj = trace_vertical(qd, cplx(0.3, 0.1), dom);
    REQUIRE(traj.kind == TrajectoryKind::crosscut);
    for (const cplx p : traj.points) REQUIRE(std::abs(p.real() - 0.3) < 1e-9);
    const double expected = 2.0 * std::sqrt(1.0 - 0.09);
    REQUIRE(std::abs(traj.h_length - expected) < 1e-6);
    REQUIRE(verticality_residual(qd, traj.points) < 1e-12);
}

TEST_CASE("lemniscate loops close and match the analytic parametrization", "[trace]") {
    auto qd = leminiscate_differential();
    auto dom = PlanarDomain::disk(cplx(0, 0), 3.0);
    const double r = 0.5;
    auto traj = trace_vertical(qd, cplx(std::sqrt(1.0 + r * r), 0), dom);
    REQUIRE(traj.kind == TrajectoryKind::closed);
    REQUIRE(std::abs(traj.points.front() - traj.points.back()) < 1e-5);
    REQUIRE(sup_distance_to_lemniscate_loop(traj.points, r) < 1e-4);
    REQUIRE(std::abs(traj.h_length - kPi) < 1e-3);
    REQUIRE(std::abs(winding_number(traj.points, cplx(1, 0))) == Catch::Approx(1.0).margin(0.01));
    REQUIRE(verticality_residual(qd, traj.points) < 1e-3);
}

TEST_CASE("offset seed encircles both poles", "[trace]") {
    auto qd = leminiscate_differential();
    auto dom = PlanarDomain::disk(cplx(0, 0), 4.0);
    auto traj = trace_vertical(qd, cplx(std::sqrt(2.0) + 1e-3, 0), dom);
    REQUIRE(traj.kind == TrajectoryKind::closed);
    REQUIRE(std::abs(winding_number(traj.points, cplx(1, 0))) == Catch::Approx(1.0).margin(0.01));
    REQUIRE(std::abs(winding_number(traj.points, cplx(-1, 0))) == Catch::Approx(1.0).margin(0.01));
    REQUIRE(std::abs(traj.h_length - 2.0 * kPi) < 2e-3);
}

TEST_CASE("analytic parametrization satisfies H zdot^2 = -4", "[trace]") {
    auto qd = leminiscate_differential();
    for (const double r : {0.3, 0.5, 0.8, 1.0 - 1e-3})
        for (int k = -8; k <= 8; ++k) {
            const double t = k * kPi / 36.0;
            const cplx z = leminiscate_trajectory(r, t);
            const cplx v = leminiscate_trajectory_velocity(r, t);
            REQUIRE(std::abs(qd.eval(z) * v * v + 4.0) < 1e-6);
        }
}

TEST_CASE("closed trajectory length is constant across nested seeds", "[trace]") {
    auto qd = leminiscate_differential();
    auto dom = PlanarDomain::disk(cplx(0, 0), 3.0);
    for (const double r : {0.3, 0.6, 0.9}) {
        auto traj = trace_vertical(qd, cplx(std::sqrt(1.0 + r * r), 0), dom);
        REQUIRE(traj.kind == TrajectoryKind::closed);
        REQUIRE(std::abs(traj.h_length - kPi) < 1e-3);
    }
}

TEST_CASE("symmetry z -> -z reflects trajectories around the other pole", "[trace]") {
    auto qd = leminiscate_differential();
    auto dom = PlanarDomain::disk(cplx(0, 0), 3.0);
    const double r = 0.5;
    auto left = trace_vertical(qd, cplx(-std::sqrt(1.0 + r * r), 0), dom);
    REQUIRE(left.kind == TrajectoryKind::closed);
    std::vector<cplx> reflected;
    reflected.reserve(left.points.size());
    for (const cplx p : left.points) reflected.push_back(-p);
    REQUIRE(sup_distance_to_lemniscate_loop(reflected, r) < 1e-4);
    REQUIRE(std::abs(left.h_length - kPi) < 1e-3);
}

TEST_CASE("crosscut reversibility", "[trace]") {
    auto qd = leminiscate_differential();
    auto dom = PlanarDomain::disk(cplx(0, 0), 1.8);
    const cplx seed(0, 1.6);
    auto traj = trace_vertical(qd, seed, dom);
    REQUIRE(traj.kind == TrajectoryKind::crosscut);
    // re-trace from an interior point of the same trajectory; it must pass
    // within 10 * closure_tol of the original seed
    const cplx reseed = traj.points[traj.points.size() / 3];
    auto again = trace_vertical(qd, reseed, dom);
    REQUIRE(distance_to_polyline(seed, again.points) < 1e-4);
}

TEST_CASE("h_length is stable under polyline resampling", "[trace]") {
    auto qd = leminiscate_differential();
    auto dom = PlanarDomain::disk(cplx(0, 0), 3.0);
    auto traj = trace_vertical(qd, cplx(std::sqrt(1.25), 0), dom);
    std::vector<cplx> half;
    for (size_t k = 0; k < traj.points.size(); k += 2) half.push_back(traj.points[k]);
    half.push_back(traj.points.back());
    const double full_len = h_length_of(qd, traj.points);
    const double half_len = h_length_of(qd, half);
    // chord-shortening model: the deficit of a chord across turn angle a is
    // about len * a^2 / 24, so the half-density polyline may differ by at most
    // the summed model (with slack factor 4)
    double pred = 1e-12;
    for (size_t k = 0; k + 2 < half.size(); ++k) {
        const cplx e1 = half[k + 1] - half[k], e2 = half[k + 2] - half[k + 1];
        if (e1 == cplx(0, 0) || e2 == cplx(0, 0)) continue;
        const double a = std::abs(std::arg(e2 / e1));
        pred += std::abs(e1) * a * a / 6.0;
    }
    REQUIRE(std::abs(full_len - half_len) < pred);
}

TEST_CASE("seed validation", "[trace]") {
    auto qd = leminiscate_differential();
    auto dom = PlanarDomain::disk(cplx(0, 0), 3.0);
    REQUIRE_THROWS_AS(trace_vertical(qd, cplx(1.0005, 0), dom), std::invalid_argument);
    REQUIRE_THROWS_AS(trace_vertical(qd, cplx(5, 0), dom), std::invalid_argument);
}

TEST_CASE("step limit is reported as inconclusive", "[trace]") {
    auto qd = constant_differential();
    auto dom = PlanarDomain::disk(cplx(0, 0), 1.0);
    TraceOptions opts;
    opts.step_limit = 5;
    auto traj = trace_vertical(qd, cplx(0, 0), dom, opts);
    REQUIRE(traj.kind == TrajectoryKind::step_limit);
}

TEST_CASE("distinguished parameter", "[distinguished]") {
    // constant differential: Phi(w) = w
    auto one = constant_differential();
    const cplx w(0.4, 0.7);
    REQUIRE(std::abs(distinguished_parameter(one, {cplx(0, 0), w}) - w) < 1e-12);

    // H = z along [1, 4]: Int sqrt(z) dz = (2/3)(4^{3/2} - 1) = 14/3
    auto hz = from_expression("z");
    std::vector<cplx> path;
    for (int k = 0; k <= 64; ++k) path.push_back(cplx(1.0 + 3.0 * k / 64.0, 0));
    REQUIRE(std::abs(distinguished_parameter(hz, path) - cplx(14.0 / 3.0, 0)) < 1e-9);

    // the image of a vertical trajectory arc is a vertical straight segment
    auto lem = leminiscate_differential();
    auto dom = PlanarDomain::disk(cplx(0, 0), 3.0);
    auto traj = trace_vertical(lem, cplx(std::sqrt(1.25), 0), dom);
    const size_t quarter = traj.points.size() / 4;
    std::vector<cplx> arc(traj.points.begin(), traj.points.begin() + quarter);
    cplx root;
    auto cums = sqrt_integral_along(lem, arc, root, true);
    double re_span = 0;
    for (const cplx c : cums) re_span = std::max(re_span, std::abs(c.real()));
    REQUIRE(re_span < 1e-3);

    REQUIRE_THROWS_AS(distinguished_parameter(lem, {cplx(0.5, 0), cplx(1.5, 0)}),
                      std::invalid_argument);
}

TEST_CASE("circular map around the lemniscate pole", "[circular]") {
    auto qd = leminiscate_differential();
    auto dom = PlanarDomain::disk(cplx(0, 0), 3.0);
    const cplx base(std::sqrt(1.0 + 0.3 * 0.3), 0);
    const std::vector<cplx> rings = {base, cplx(std::sqrt(1.0 + 0.6 * 0.6), 0)};
    // horizontal cut: the inner real segment left of the pole
    const std::vector<cplx> cut = {cplx(0.02, 0), cplx(0.999, 0)};
    auto res = circular_map(qd, base, rings, dom, cut);
    REQUIRE(res.ell == Catch::Approx(kPi).margin(1e-3));
    REQUIRE(res.rings.size() == 2);
    for (const auto& ring : res.rings) REQUIRE(ring.modulus_spread < 1e-3);
    REQUIRE(res.rings[0].modulus < res.rings[1].modulus);

    // rejected when the seed trajectory is not closed
    auto small_dom = PlanarDomain::disk(cplx(1.05, 0), 0.02);
    REQUIRE_THROWS_AS(circular_map(qd, cplx(1.044, 0), {cplx(1.044, 0)}, small_dom),
                      std::invalid_argument);
}

TEST_CASE("circular map of 1/z^2 is linear in z", "[circular]") {
    auto qd = from_expression("z^-2", {}, {{cplx(0, 0), 2}});
    auto dom = PlanarDomain::annulus(cplx(0, 0), 0.5, 1.0);
    const cplx base(0.75, 0);
    auto res = circular_map(qd, base, {base}, dom);
    REQUIRE(res.ell == Catch::Approx(2.0 * kPi).margin(1e-3));
    const auto& ring = res.rings[0];
    const cplx ratio0 = ring.phi[0] / ring.trajectory.points[0];
    for (size_t k = 0; k < ring.phi.size(); ++k) {
        const cplx ratio = ring.phi[k] / ring.trajectory.points[k];
        REQUIRE(std::abs(ratio - ratio0) < 2e-3 * std::abs(ratio0));
    }
}

TEST_CASE("configuration classification", "[strebel]") {
    // constant differential on a disk: every trajectory is a crosscut
    auto one = constant_differential();
    auto disk = PlanarDomain::disk(cplx(0, 0), 1.0);
    std::vector<cplx> seeds = {cplx(0.3, 0.1), cplx(-0.4, 0.2), cplx(0.0, -0.5)};
    auto dec = classify_configuration(one, disk, seeds);
    REQUIRE(dec.strebel_type);
    REQUIRE(dec.crosscut_count == 3);
    REQUIRE(dec.closed_count == 0);

    // lemniscate on a truncating disk: closed loops inside, crosscuts through it
    auto lem = leminiscate_differential();
    auto mid = PlanarDomain::disk(cplx(0, 0), 1.8);
    std::vector<cplx> mix = {cplx(std::sqrt(1.25), 0), cplx(-std::sqrt(1.25), 0),
                             cplx(std::sqrt(2.0) + 0.1, 0), cplx(0, 1.6), cplx(0, -1.6)};
    auto dm = classify_configuration(lem, mid, mix);
    REQUIRE(dm.strebel_type);
    REQUIRE(dm.closed_count == 3);
    REQUIRE(dm.crosscut_count == 2);

    // step-limited runs are inconclusive, not Strebel evidence
    TraceOptions tiny;
    tiny.step_limit = 4;
    auto dt = classify_configuration(one, disk, seeds, tiny);
    REQUIRE_FALSE(dt.strebel_type);
    REQUIRE(dt.inconclusive_count == 3);
}

TEST_CASE("pole-punctured disk mixes rings and strips", "[strebel]") {
    // off-center holes near the poles clip some loops transversally, turning
    // them into crosscuts with both endpoints on the inner boundary circles
    auto qd = leminiscate_differential();
    auto dom = PlanarDomain::disk(cplx(0, 0), 1.8)
                   .subtract(Disk{cplx(1.06, 0), 0.05})
                   .subtract(Disk{cplx(-1.06, 0), 0.05});
    std::vector<cplx> seeds = {cplx(std::sqrt(1.0 + 0.3025), 0),   // closed ring around +1
                               cplx(std::sqrt(2.0) + 0.1, 0),      // closed around both
                               leminiscate_trajectory(0.4, kPi / 8), // clipped by the hole
                               cplx(0, 1.6)};                      // clipped by the outer rim
    auto dec = classify_configuration(qd, dom, seeds);
    REQUIRE(dec.strebel_type);
    REQUIRE(dec.closed_count == 2);
    REQUIRE(dec.crosscut_count == 2);
}

TEST_CASE("four-pole differential on a large disk is Strebel type", "[strebel]") {
    auto qd = four_pole_differential();
    auto dom = PlanarDomain::disk(cplx(0, 0), 6.0);
    std::vector<cplx> seeds = {cplx(2.0, 1.2), cplx(-2.0, 1.2), cplx(0.0, 2.5),
                               cplx(4.0, 1.5),  cplx(-4.0, -1.5)};
    auto dec = classify_configuration(qd, dom, seeds);
    REQUIRE(dec.strebel_type);
    REQUIRE(dec.closed_count + dec.crosscut_count == static_cast<int>(seeds.size()));
}

TEST_CASE("length-area comparison for simple weights", "[lengtharea]") {
    auto qd = leminiscate_differential();
    auto dom = PlanarDomain::disk(cplx(0, 0), 3.0);
    std::vector<Trajectory> lines;
    for (const double r : {0.3, 0.5, 0.7})
        lines.push_back(trace_vertical(qd, cplx(std::sqrt(1.0 + r * r), 0), dom));

    auto ring_dom = PlanarDomain::annulus(cplx(1, 0), 0.05, 0.5);
    auto grid = build_grid(ring_dom, 128);

    auto one = [](cplx) { return cplx(1, 0); };
    auto two = [](cplx) { return cplx(2, 0); };
    auto eq = length_area_check(qd, lines, *grid, one, one);
    REQUIRE(eq.lines_pass);
    REQUIRE(eq.area_checked);
    REQUIRE(eq.area_pass);
    REQUIRE(std::abs(eq.area_margin) < 1e-12 * eq.area_lhs);

    auto twice = length_area_check(qd, lines, *grid, one, two);
    REQUIRE(twice.lines_pass);
    REQUIRE(twice.area_pass);
    REQUIRE(twice.area_rhs == Catch::Approx(2.0 * twice.area_lhs).epsilon(1e-12));
    for (const auto& line : twice.lines)
        REQUIRE(line.rhs == Catch::Approx(2.0 * line.lhs).epsilon(1e-12));

    // a failing line inequality skips the area stage and reports the witness
    auto bad = length_area_check(qd, lines, *grid, two, one);
    REQUIRE_FALSE(bad.lines_pass);
    REQUIRE(bad.witness == 0);
    REQUIRE_FALSE(bad.area_checked);
}
