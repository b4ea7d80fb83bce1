#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "hopfvar/rect_partition.hpp"

using namespace hopfvar;

namespace {

const PlanarDomain kDisk = PlanarDomain::disk(cplx(0, 0), 1.0);
const PlanarDomain kSquare = PlanarDomain::rect(-0.4, -0.4, 0.4, 0.4);

} // namespace

TEST_CASE("pure eps-mesh selection over a square", "[partition]") {
    auto part = build_partition(kDisk, kSquare, {}, 0.2);
    // closures meeting [-0.4,0.4]^2 on the 0.2-mesh: 6 intervals per axis
    REQUIRE(part.cells.size() == 36);
    for (const auto& cell : part.cells) REQUIRE(part.diameter(cell) <= std::sqrt(2.0) * 0.2 + 1e-12);
}

TEST_CASE("zero at the origin is already a mesh corner", "[partition]") {
    auto part = build_partition(kDisk, kSquare, {cplx(0, 0)}, 0.2);
    REQUIRE(part.cells.size() == 36);
    bool corner = false;
    for (const cplx c : part.corners)
        if (std::abs(c) < 1e-13) corner = true;
    REQUIRE(corner);
    for (const auto& cell : part.cells) {
        const bool strictly_inside = part.x0(cell) < 0 && part.x1(cell) > 0 &&
                                     part.y0(cell) < 0 && part.y1(cell) > 0;
        REQUIRE_FALSE(strictly_inside);
    }
}

TEST_CASE("off-mesh zero refines the mesh by two cuts", "[partition]") {
    const cplx zero(0.05, 0.05);
    auto part = build_partition(kDisk, kSquare, {zero}, 0.2);
    // independent combinatorial count: each axis gains one cut inside [-0.6, 0.6]
    REQUIRE(part.cells.size() == 49);
    bool corner = false;
    for (const cplx c : part.corners)
        if (std::abs(c - zero) < 1e-13) corner = true;
    REQUIRE(corner);
    for (const auto& cell : part.cells) {
        const bool strictly_inside = part.x0(cell) < zero.real() && part.x1(cell) > zero.real() &&
                                     part.y0(cell) < zero.imag() && part.y1(cell) > zero.imag();
        REQUIRE_FALSE(strictly_inside);
    }
}

TEST_CASE("distance precondition is enforced", "[partition]") {
    auto big = PlanarDomain::rect(-0.9, -0.9, 0.9, 0.9);
    REQUIRE_THROWS_AS(build_partition(kDisk, big, {}, 0.2), std::invalid_argument);
    REQUIRE_THROWS_AS(build_partition(kDisk, kSquare, {cplx(3, 3)}, 0.2),
                      std::invalid_argument);
}

TEST_CASE("coverage and disjointness of the family", "[partition]") {
    auto part = build_partition(kDisk, kSquare, {cplx(0.05, 0.05)}, 0.2);
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-0.4, 0.4);
    for (int t = 0; t < 500; ++t) {
        const cplx p(u(rng), u(rng));
        int containing_closures = 0, containing_open = 0;
        for (const auto& cell : part.cells) {
            if (p.real() >= part.x0(cell) && p.real() <= part.x1(cell) &&
                p.imag() >= part.y0(cell) && p.imag() <= part.y1(cell))
                ++containing_closures;
            if (p.real() > part.x0(cell) && p.real() < part.x1(cell) &&
                p.imag() > part.y0(cell) && p.imag() < part.y1(cell))
                ++containing_open;
        }
        REQUIRE(containing_closures >= 1);
        REQUIRE(containing_open <= 1);
    }
}

TEST_CASE("shared sides carry opposite orientations", "[partition]") {
    auto part = build_partition(kDisk, kSquare, {}, 0.2);
    // the stored segment is ccw for cell a; traversed q -> p it is ccw for b.
    // ccw for an axis-aligned rectangle: interior lies to the left of the side.
    for (const auto& side : part.sides) {
        const auto& ca = part.cells[side.a];
        const auto& cb = part.cells[side.b];
        const cplx mid = 0.5 * (side.p + side.q);
        const cplx dir = (side.q - side.p) / std::abs(side.q - side.p);
        const cplx left = mid + cplx(0, 1) * dir * 1e-6;
        const cplx right = mid - cplx(0, 1) * dir * 1e-6;
        auto contains = [&](const RectPartition::Cell& c, cplx p) {
            return p.real() > part.x0(c) && p.real() < part.x1(c) && p.imag() > part.y0(c) &&
                   p.imag() < part.y1(c);
        };
        REQUIRE(contains(ca, left));
        REQUIRE(contains(cb, right));
    }
    // every interior side appears exactly once
    std::set<std::pair<int, int>> seen;
    for (const auto& side : part.sides) {
        auto key = std::minmax(side.a, side.b);
        REQUIRE_FALSE(seen.count({key.first, key.second}));
        seen.insert({key.first, key.second});
    }
}

TEST_CASE("branch assignment: constant and squared differentials", "[branches]") {
    auto part = build_partition(kDisk, kSquare, {cplx(0, 0)}, 0.2);

    BranchAssignment one(part, holomorphic_from_expression("1"));
    for (size_t c = 0; c < part.cells.size(); ++c) {
        const cplx v = one.value(c, part.center(part.cells[c]));
        REQUIRE(std::abs(std::abs(v) - 1.0) < 1e-14);
    }

    // H = z^2 has the global branches +-z; each cell must match one of them
    BranchAssignment zsq(part, holomorphic_from_expression("z^2"));
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0, 1);
    for (size_t c = 0; c < part.cells.size(); ++c) {
        const auto& cell = part.cells[c];
        const cplx ctr = part.center(cell);
        const double sign = std::real(zsq.value(c, ctr) / ctr) > 0 ? 1.0 : -1.0;
        for (int t = 0; t < 12; ++t) {
            const cplx p(part.x0(cell) + u(rng) * (part.x1(cell) - part.x0(cell)),
                         part.y0(cell) + u(rng) * (part.y1(cell) - part.y0(cell)));
            REQUIRE(std::abs(zsq.value(c, p) - sign * p) < 1e-9 * (1.0 + std::abs(p)));
        }
    }

    // H = z admits per-rectangle branches since no rectangle meets the origin
    BranchAssignment hz(part, holomorphic_from_expression("z"));
    for (size_t c = 0; c < part.cells.size(); ++c) {
        const cplx p = part.center(part.cells[c]);
        const cplx v = hz.value(c, p);
        REQUIRE(std::abs(v * v - p) < 1e-10 * (1.0 + std::abs(p)));
    }
}

TEST_CASE("monodromy detection rejects an unlisted interior zero", "[branches]") {
    // H vanishes at 0.1 + 0.03i, strictly inside the cell [0,0.2]x[0,0.2]
    // when that zero is not declared as a mesh cut
    auto part = build_partition(kDisk, kSquare, {}, 0.2);
    REQUIRE_THROWS_AS(BranchAssignment(part, holomorphic_from_expression("z - 0.1 - 0.03i")),
                      std::invalid_argument);
}

TEST_CASE("jacobian sum cancellation", "[jacobian]") {
    auto eta = poly_bump(cplx(0.05, -0.1), 0.27, cplx(1.0, 0.4), BumpFactor::z);

    // H == 1: f = +-eta globally, the sum is Int J_eta = 0
    auto part = build_partition(kDisk, kSquare, {}, 0.2);
    BranchAssignment one(part, holomorphic_from_expression("1"));
    auto rep1 = jacobian_sum_check(part, one, eta);
    REQUIRE(std::abs(rep1.sum) < 1e-6 * rep1.scale);
    REQUIRE(rep1.max_side_residual < 1e-13);

    // H = z^2 with the zero as a corner
    auto partz = build_partition(kDisk, kSquare, {cplx(0, 0)}, 0.2);
    BranchAssignment zsq(partz, holomorphic_from_expression("z^2"));
    auto rep2 = jacobian_sum_check(partz, zsq, eta);
    REQUIRE(std::abs(rep2.sum) < 1e-3 * rep2.scale);
    REQUIRE(rep2.max_side_residual < 1e-12);

    // eta == 0 gives exactly zero
    auto zero = poly_bump(cplx(0, 0), 0.2, 0.0);
    auto rep0 = jacobian_sum_check(partz, zsq, zero);
    REQUIRE(rep0.sum == 0.0);
}

TEST_CASE("branch sign flips leave the jacobian sum invariant", "[jacobian]") {
    auto eta = poly_bump(cplx(-0.05, 0.1), 0.25, 1.0, BumpFactor::conj_z);
    auto part = build_partition(kDisk, kSquare, {cplx(0, 0)}, 0.2);
    BranchAssignment base(part, holomorphic_from_expression("z^2"));
    const double s0 = jacobian_sum_check(part, base, eta).sum;

    RectPartition flipped = part;
    std::mt19937_64 rng(31);
    for (int& s : flipped.branch_sign)
        if (rng() & 1) s = -s;
    BranchAssignment alt(flipped, holomorphic_from_expression("z^2"));
    const double s1 = jacobian_sum_check(flipped, alt, eta).sum;
    REQUIRE(std::abs(s0 - s1) <= 1e-12 * (std::abs(s0) + 1e-12));
}

TEST_CASE("sum of squares identity", "[jacobian]") {
    auto eta = poly_bump(cplx(0.08, 0.02), 0.27, cplx(0.9, -0.5));
    auto part = build_partition(kDisk, kSquare, {cplx(0, 0)}, 0.2);

    BranchAssignment zsq(part, holomorphic_from_expression("z^2"));
    auto [lhs, rhs] = sum_of_squares_identity(part, zsq, eta);
    REQUIRE(std::abs(lhs - rhs) < 1e-3 * lhs);

    // zero test function
    auto zero = poly_bump(cplx(0, 0), 0.2, 0.0);
    auto [l0, r0] = sum_of_squares_identity(part, zsq, zero);
    REQUIRE(l0 == 0.0);
    REQUIRE(r0 == 0.0);

    // lemniscate differential restricted to K (poles +-1 far outside)
    BranchAssignment lem(part, holomorphic_from_expression("(z/(1 - z^2))^2"));
    auto [ll, lr] = sum_of_squares_identity(part, lem, eta);
    REQUIRE(std::abs(ll - lr) < 1e-3 * ll);
}

TEST_CASE("refinement stability of the cancellation", "[jacobian]") {
    auto eta = poly_bump(cplx(0.0, 0.0), 0.3, cplx(1.1, 0.2), BumpFactor::z);
    for (const double eps : {0.2, 0.1}) {
        auto part = build_partition(kDisk, kSquare, {cplx(0, 0)}, eps);
        BranchAssignment br(part, holomorphic_from_expression("z^2"));
        auto rep = jacobian_sum_check(part, br, eta);
        REQUIRE(std::abs(rep.sum) < 1e-3 * rep.scale);
    }
}

TEST_CASE("omega form agrees with the per-rectangle boundary integrand", "[jacobian]") {
    auto eta = poly_bump(cplx(0.05, 0.05), 0.3, cplx(0.7, 0.7));
    auto part = build_partition(kDisk, kSquare, {cplx(0, 0)}, 0.2);
    HolomorphicFn H = holomorphic_from_expression("z^2");
    BranchAssignment br(part, H);
    for (size_t k = 0; k < std::min<size_t>(part.sides.size(), 20); ++k) {
        const auto& side = part.sides[k];
        // branch-based conj(f) df over the side
        const cplx seg = side.q - side.p;
        cplx branch_val(0, 0);
        for (int n = 0; n < 8; ++n) {
            const cplx pt = side.p + seg * (0.5 * (detail::kGL8x[n] + 1.0));
            cplx f, fz, fzb;
            detail::two_valued_jet(br, side.a, eta, pt, f, fz, fzb);
            branch_val += detail::kGL8w[n] * std::conj(f) * (fz * seg + fzb * std::conj(seg));
        }
        branch_val *= 0.5;
        const cplx omega_val = omega_segment_integral(H, eta, side.p, side.q);
        REQUIRE(std::abs(branch_val - omega_val) < 1e-10 * (1.0 + std::abs(omega_val)));
    }
}
