#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "schwarzlab/weierstrass.hpp"

#include <cmath>
#include <random>

using swz::AnalyticModel;
using swz::ArcSide;
using swz::BivariateModel;
using swz::BoundaryArc;
using swz::CaseLabel;
using swz::cx;
using swz::MatchTable;
using swz::MonicPoly;
using swz::MonicPolyPencil;
using swz::Path;
using namespace swz::weier;

namespace {

BivariateModel psi_w2_minus_z(double zr = 1.0, double wr = 2.0) {
    return BivariateModel::from_function_dw(
        0.0, zr, 0.0, wr, [](cx z, cx w) { return w * w - z; },
        [](cx, cx w) { return 2.0 * w; });
}

std::vector<cx> circle_grid(cx c, double r, int n) {
    std::vector<cx> g(n);
    for (int i = 0; i < n; ++i) g[i] = c + r * std::exp(cx(0.0, 2.0 * swz::pi * i / n));
    return g;
}

Path polar_loop(cx c, double r, int segs = 16) {
    std::vector<cx> pts;
    for (int j = 0; j <= segs; ++j) {
        pts.push_back(c + r * std::exp(cx(0.0, 2.0 * swz::pi * j / segs)));
    }
    pts.back() = pts.front();
    return Path{std::move(pts), true};
}

Path concat(const Path& a, const Path& b) {
    std::vector<cx> pts = a.pts;
    for (size_t i = 1; i < b.pts.size(); ++i) pts.push_back(b.pts[i]);
    return Path{std::move(pts), true};
}

}  // namespace

TEST_CASE("BivariateModel derivative agrees with its finite difference") {
    BivariateModel psi = BivariateModel::from_function_dw(
        0.0, 1.0, 0.0, 1.5, [](cx, cx w) { return std::exp(w) - 1.0; },
        [](cx, cx w) { return std::exp(w); });
    BivariateModel fd = BivariateModel::from_function(
        0.0, 1.0, 0.0, 1.5, [](cx, cx w) { return std::exp(w) - 1.0; });

    std::mt19937 gen(42);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (int t = 0; t < 20; ++t) {
        cx z(u(gen), u(gen)), w(u(gen), u(gen));
        cx exact = std::exp(w);
        CHECK(std::abs(psi.dw(z, w) - exact) <= 1e-6 * std::abs(exact));
        CHECK(std::abs(fd.dw(z, w) - exact) <= 1e-6 * std::abs(exact));
    }
}

TEST_CASE("order_in_w finds the vanishing order at the study point") {
    CHECK(order_in_w(psi_w2_minus_z()) == 2);

    BivariateModel lin = BivariateModel::from_function(0.0, 1.0, 0.0, 2.0,
                                                       [](cx z, cx w) { return w - z; });
    CHECK(order_in_w(lin) == 1);

    BivariateModel expm1 = BivariateModel::from_function(
        0.0, 1.0, 0.0, 1.5, [](cx, cx w) { return std::exp(w) - 1.0; });
    CHECK(order_in_w(expm1) == 1);
}

TEST_CASE("weierstrass_prepare recovers the polynomial factor of w^2 - z") {
    std::vector<cx> grid = circle_grid(0.0, 0.04, 128);
    auto [pencil, c] = weierstrass_prepare(psi_w2_minus_z(), grid, 0.3);
    REQUIRE(pencil.degree() == 2);

    // exact preparation: P = w^2 - z, so a1 = 0 and a0 = -z
    double e1 = 0.0, e0 = 0.0;
    for (size_t i = 0; i < grid.size(); ++i) {
        e1 = std::max(e1, std::abs(pencil.coefficient_samples()[i][1]));
        e0 = std::max(e0, std::abs(pencil.coefficient_samples()[i][0] + grid[i]));
    }
    CHECK(e1 <= 1e-8);
    CHECK(e0 <= 1e-8);

    // cofactor is identically 1
    std::mt19937 gen(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double ce = 0.0;
    for (int t = 0; t < 30; ++t) {
        cx z = 0.03 * cx(u(gen), u(gen));
        cx w = 0.25 * cx(u(gen), u(gen));
        ce = std::max(ce, std::abs(c(z, w) - 1.0));
    }
    CHECK(ce <= 1e-6);

    SUBCASE("roots of the prepared slices are roots of the input") {
        BivariateModel psi = psi_w2_minus_z();
        double worst = 0.0;
        for (size_t i = 0; i < grid.size(); i += 9) {
            for (cx w : swz::core::monic_roots(pencil.slice(grid[i]))) {
                worst = std::max(worst, std::abs(psi(grid[i], w)));
            }
        }
        CHECK(worst <= 1e-7);
    }

    SUBCASE("coefficient samples interpolate held-out nodes") {
        std::vector<cx> g2;
        std::vector<std::vector<cx>> c2;
        for (size_t i = 0; i < grid.size(); ++i) {
            if (i == 17) continue;
            g2.push_back(grid[i]);
            c2.push_back(pencil.coefficient_samples()[i]);
        }
        MonicPolyPencil thin = MonicPolyPencil::from_nodes(g2, c2, 0.3);
        MonicPoly at17 = thin.slice(grid[17]);
        CHECK(std::abs(at17.a[0] - pencil.coefficient_samples()[17][0]) <= 1e-6);
        CHECK(std::abs(at17.a[1] - pencil.coefficient_samples()[17][1]) <= 1e-6);
    }
}

TEST_CASE("weierstrass_prepare splits off an invertible cofactor") {
    BivariateModel psi = BivariateModel::from_function(
        0.0, 0.3, 0.0, 3.0, [](cx z, cx w) { return (w - z) * (2.0 + w); });
    std::vector<cx> grid = circle_grid(0.0, 0.1, 96);
    auto [pencil, c] = weierstrass_prepare(psi, grid, 0.5);
    REQUIRE(pencil.degree() == 1);

    double e0 = 0.0;
    for (size_t i = 0; i < grid.size(); ++i) {
        e0 = std::max(e0, std::abs(pencil.coefficient_samples()[i][0] + grid[i]));
    }
    CHECK(e0 <= 1e-8);

    std::mt19937 gen(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double ce = 0.0;
    for (int t = 0; t < 30; ++t) {
        cx z = 0.08 * cx(u(gen), u(gen));
        cx w = 0.4 * cx(u(gen), u(gen));
        ce = std::max(ce, std::abs(c(z, w) - (2.0 + w)));
    }
    CHECK(ce <= 1e-8);
}

TEST_CASE("weierstrass_prepare handles a removable cofactor singularity") {
    BivariateModel psi = BivariateModel::from_function(
        0.0, 1.0, 0.0, 1.5, [](cx, cx w) { return std::exp(w) - 1.0; });
    std::vector<cx> grid = circle_grid(0.0, 0.05, 64);
    auto [pencil, c] = weierstrass_prepare(psi, grid, 0.8);
    REQUIRE(pencil.degree() == 1);
    // c = (e^w - 1)/w continued across w = 0 with c(0,0) = 1
    CHECK(std::abs(c(cx(0.0, 0.0), cx(0.0, 0.0)) - 1.0) <= 1e-6);
    CHECK(std::abs(c(cx(0.01, 0.0), cx(0.3, 0.1)) -
                   (std::exp(cx(0.3, 0.1)) - 1.0) / cx(0.3, 0.1)) <= 1e-8);
}

TEST_CASE("weierstrass_prepare refuses a grid with varying root count") {
    // off-centre grid: some nodes have both square roots inside |w| < 0.3,
    // others have them outside
    std::vector<cx> grid = circle_grid(0.06, 0.05, 48);
    CHECK_THROWS_AS(weierstrass_prepare(psi_w2_minus_z(), grid, 0.3), swz::resolution_error);
}

TEST_CASE("discriminant_field locates branch points") {
    SUBCASE("w^2 - z: discriminant 4z with one cluster at the origin") {
        std::vector<cx> grid = circle_grid(0.0, 0.2, 64);
        std::vector<std::vector<cx>> coeff;
        for (cx z : grid) coeff.push_back({-z, 0.0});
        MonicPolyPencil pencil = MonicPolyPencil::from_nodes(grid, coeff, 0.8);
        auto field = discriminant_field(pencil);
        REQUIRE_FALSE(field.identically_zero);
        for (size_t i = 0; i < grid.size(); ++i) {
            CHECK(std::abs(field.values[i] - 4.0 * grid[i]) <= 1e-10);
        }
        REQUIRE(field.clusters.size() == 1);
        CHECK(std::abs(field.clusters[0].center) <= 1e-6);
        CHECK(field.clusters[0].count == 1);
    }

    SUBCASE("w^2 - 1/4 has constant discriminant and no clusters") {
        std::vector<cx> grid = circle_grid(0.0, 0.2, 64);
        std::vector<std::vector<cx>> coeff;
        for (size_t i = 0; i < grid.size(); ++i) coeff.push_back({cx(-0.25, 0.0), 0.0});
        auto field = discriminant_field(MonicPolyPencil::from_nodes(grid, coeff, 0.8));
        CHECK_FALSE(field.identically_zero);
        CHECK(field.clusters.empty());
        CHECK(std::abs(field.values[0] - 1.0) <= 1e-12);
    }

    SUBCASE("w^2 - (z^2 - 1) clusters at both branch points") {
        std::vector<cx> grid = circle_grid(0.0, 1.5, 96);
        std::vector<std::vector<cx>> coeff;
        for (cx z : grid) coeff.push_back({1.0 - z * z, 0.0});
        auto field = discriminant_field(MonicPolyPencil::from_nodes(grid, coeff, 3.0));
        REQUIRE(field.clusters.size() == 2);
        double d1 = 1e9, d2 = 1e9;
        for (const auto& cl : field.clusters) {
            d1 = std::min(d1, std::abs(cl.center - 1.0));
            d2 = std::min(d2, std::abs(cl.center + 1.0));
        }
        CHECK(d1 <= 1e-6);
        CHECK(d2 <= 1e-6);
    }

    SUBCASE("the zero pencil raises the identically-zero flag") {
        std::vector<cx> grid = circle_grid(0.0, 0.2, 32);
        std::vector<std::vector<cx>> coeff(grid.size(), {cx(0.0, 0.0), cx(0.0, 0.0)});
        auto field = discriminant_field(MonicPolyPencil::from_nodes(grid, coeff, 0.8));
        CHECK(field.identically_zero);
    }
}

TEST_CASE("squarefree_part strips repeated factors") {
    SUBCASE("(w - z0)^2 collapses to w - z0") {
        cx z0(0.4, -0.2);
        MonicPoly p{{z0 * z0, -2.0 * z0}};
        MonicPoly q = squarefree_part(p);
        REQUIRE(q.degree() == 1);
        CHECK(std::abs(q.a[0] + z0) <= 1e-9);
    }

    SUBCASE("w^2 - z at fixed z is already square-free") {
        MonicPoly p{{cx(-0.3, 0.1), 0.0}};
        MonicPoly q = squarefree_part(p);
        REQUIRE(q.degree() == 2);
        CHECK(std::abs(q.a[0] - p.a[0]) <= 1e-12);
        CHECK(std::abs(q.a[1]) <= 1e-12);
    }

    SUBCASE("w^3 collapses to w") {
        MonicPoly p{{0.0, 0.0, 0.0}};
        MonicPoly q = squarefree_part(p);
        REQUIRE(q.degree() == 1);
        CHECK(std::abs(q.a[0]) <= 1e-12);
    }

    SUBCASE("the output divides the input") {
        // p = (w - r1)^2 (w - r2): square-free part has the two distinct roots
        cx r1(0.3, 0.2), r2(-0.5, 0.1);
        // expand (w^2 - 2 r1 w + r1^2)(w - r2)
        MonicPoly p{{-r1 * r1 * r2, r1 * r1 + 2.0 * r1 * r2, -2.0 * r1 - r2}};
        MonicPoly q = squarefree_part(p);
        REQUIRE(q.degree() == 2);
        // roots of q are r1 and r2
        auto roots = swz::core::monic_roots(q);
        double m1 = std::min(std::abs(roots[0] - r1), std::abs(roots[1] - r1));
        double m2 = std::min(std::abs(roots[0] - r2), std::abs(roots[1] - r2));
        CHECK(m1 <= 1e-8);
        CHECK(m2 <= 1e-8);
    }
}

TEST_CASE("monodromy permutations around branch points") {
    std::vector<cx> grid = circle_grid(0.0, 1.2, 48);
    std::vector<std::vector<cx>> c2, c3;
    for (cx z : grid) {
        c2.push_back({-z, 0.0});
        c3.push_back({-z, 0.0, 0.0});
    }
    MonicPolyPencil p2 = MonicPolyPencil::from_nodes(grid, c2, 2.0);
    MonicPolyPencil p3 = MonicPolyPencil::from_nodes(grid, c3, 2.0);

    SUBCASE("square-root sheets swap around the origin") {
        // based at z = 1 with roots +-1
        auto perm = monodromy(p2, polar_loop(0.0, 1.0, 24), {cx(1.0, 0.0), cx(-1.0, 0.0)});
        REQUIRE(perm.size() == 2);
        CHECK(perm[0] == 1);
        CHECK(perm[1] == 0);
    }

    SUBCASE("a loop enclosing no branch point is the identity") {
        Path loop = polar_loop(1.0, 0.15, 16);
        cx z0 = loop.pts.front();
        auto roots = swz::core::monic_roots(p2.slice(z0));
        auto perm = monodromy(p2, loop, roots);
        CHECK(perm[0] == 0);
        CHECK(perm[1] == 1);
    }

    SUBCASE("cube-root sheets cycle") {
        Path loop = polar_loop(0.0, 1.0, 24);
        auto roots = swz::core::monic_roots(p3.slice(loop.pts.front()));
        auto perm = monodromy(p3, loop, roots);
        REQUIRE(perm.size() == 3);
        // a 3-cycle: no fixed points, third power is the identity
        for (int i = 0; i < 3; ++i) CHECK(perm[i] != i);
        for (int i = 0; i < 3; ++i) CHECK(perm[perm[perm[i]]] == i);
    }

    SUBCASE("concatenation composes permutations") {
        std::mt19937 gen(20260822);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int trial = 0; trial < 5; ++trial) {
            // loops based at z = 1.1, around the origin or around a harmless point
            bool around1 = u(gen) < 0.5, around2 = u(gen) < 0.5;
            Path l1 = around1 ? polar_loop(0.0, 1.1, 20) : polar_loop(1.02, 0.08, 12);
            Path l2 = around2 ? polar_loop(0.0, 1.1, 20) : polar_loop(1.02, 0.08, 12);
            auto roots = swz::core::monic_roots(p2.slice(l1.pts.front()));
            auto perm1 = monodromy(p2, l1, roots);
            auto perm2 = monodromy(p2, l2, roots);
            auto both = monodromy(p2, concat(l1, l2), roots);
            for (size_t i = 0; i < roots.size(); ++i) {
                CHECK(both[i] == perm2[perm1[i]]);
            }
        }
    }
}

TEST_CASE("boundary_root_match on the disk reflection pencil") {
    // k = 1 pencil whose single branch is the reflection map of the circle
    const cx z0(0.3, -0.2);
    const double r = 0.5;
    std::vector<cx> grid = circle_grid(z0, r, 64);
    MonicPolyPencil pencil = MonicPolyPencil::from_exact(
        grid, 1,
        [z0, r](cx z) {
            return std::vector<cx>{-(std::conj(z0) + r * r / (z - z0))};
        },
        4.0);

    std::vector<cx> samples(512);
    for (int j = 0; j < 512; ++j) {
        samples[j] = z0 + r * std::exp(cx(0.0, 2.0 * swz::pi * j / 512));
    }
    BoundaryArc arc = BoundaryArc::from_samples(std::move(samples), 0);

    MatchTable table = boundary_root_match(pencil, arc, 1e-6 * arc.diameter());
    REQUIRE(table.zeta.size() == 512);
    int full = 0;
    for (const auto& m : table.matched) {
        if (m.size() == 1 && m[0] == 0) ++full;
    }
    CHECK(full == 512);  // the branch is the boundary reflection everywhere
    REQUIRE(table.runs.size() == 1);
    CHECK(table.runs[0].first == 0);
    CHECK(table.runs[0].last == 511);
}

TEST_CASE("boundary_root_match isolates the fixed angles of w^2 - z") {
    const int N = 768;
    std::vector<cx> grid = circle_grid(0.0, 1.3, 64);
    std::vector<std::vector<cx>> coeff;
    for (cx z : grid) coeff.push_back({-z, 0.0});
    MonicPolyPencil pencil = MonicPolyPencil::from_nodes(grid, coeff, 2.0);

    std::vector<cx> samples(N);
    for (int j = 0; j < N; ++j) samples[j] = std::exp(cx(0.0, 2.0 * swz::pi * j / N));
    BoundaryArc arc = BoundaryArc::from_samples(std::move(samples), 0);

    // oracle: a branch of sqrt(zeta) equals conj(zeta) on |zeta| = 1 only where
    // zeta^3 = 1; with N divisible by 3 those are samples 0, N/3 and 2N/3
    const double tol = 1e-5;
    std::vector<int> expect;
    for (int j = 0; j < N; ++j) {
        cx zeta = arc.samples[j];
        cx s = std::sqrt(zeta);
        double best = std::min(std::abs(s - std::conj(zeta)), std::abs(-s - std::conj(zeta)));
        if (best < tol) expect.push_back(j);
    }
    REQUIRE(expect == std::vector<int>({0, N / 3, 2 * N / 3}));

    MatchTable table = boundary_root_match(pencil, arc, tol);
    std::vector<int> got;
    for (int j = 0; j < N; ++j) {
        if (!table.matched[j].empty()) got.push_back(j);
    }
    CHECK(got == expect);

    SUBCASE("neighbouring samples miss by the slope of the defect") {
        // near angle 0 the defect grows like (3/2)|theta|
        cx zeta = arc.samples[1];
        double defect = std::min(std::abs(std::sqrt(zeta) - std::conj(zeta)),
                                 std::abs(-std::sqrt(zeta) - std::conj(zeta)));
        CHECK(defect == doctest::Approx(1.5 * 2.0 * swz::pi / N).epsilon(0.05));
    }
}

TEST_CASE("boundary_root_match follows a trivial segment pencil") {
    std::vector<cx> grid = circle_grid(0.0, 1.0, 32);
    MonicPolyPencil pencil = MonicPolyPencil::from_exact(
        grid, 1, [](cx z) { return std::vector<cx>{-z}; }, 4.0);
    std::vector<cx> seg(101);
    for (int j = 0; j < 101; ++j) seg[j] = cx(-0.5 + j / 100.0, 0.0);
    BoundaryArc arc = BoundaryArc::from_samples(std::move(seg), 50);
    MatchTable table = boundary_root_match(pencil, arc, 1e-6 * arc.diameter());
    for (const auto& m : table.matched) REQUIRE(m.size() == 1);
    REQUIRE(table.runs.size() == 1);
}

TEST_CASE("classify_arcs labels matched runs through the boundary classifier") {
    SUBCASE("disk reflection pencil: every probe point is regular") {
        const cx z0(0.2, 0.1);
        const double r = 0.7;
        std::vector<cx> grid = circle_grid(z0, r, 64);
        MonicPolyPencil pencil = MonicPolyPencil::from_exact(
            grid, 1,
            [z0, r](cx z) {
                return std::vector<cx>{-(std::conj(z0) + r * r / (z - z0))};
            },
            6.0);
        std::vector<cx> samples(512);
        for (int j = 0; j < 512; ++j) {
            samples[j] = z0 + r * std::exp(cx(0.0, 2.0 * swz::pi * j / 512));
        }
        BoundaryArc arc = BoundaryArc::from_samples(std::move(samples), 0);
        MatchTable table = boundary_root_match(pencil, arc, 1e-6 * arc.diameter());

        std::vector<cx> omega;
        for (int j = 0; j < 14; ++j) {
            double rr = 0.63 * (j + 0.5) / 14;
            for (int l = 0; l < 28; ++l) {
                omega.push_back(z0 + rr * std::exp(cx(0.0, 2.0 * swz::pi * (l + 0.5) / 28)));
            }
        }
        auto entries = classify_arcs(table, arc, pencil, omega);
        REQUIRE_FALSE(entries.empty());
        for (const auto& e : entries) {
            CHECK(e.report.label == CaseLabel::regular_analytic);
        }
    }

    SUBCASE("empty table yields an empty report") {
        std::vector<cx> grid = circle_grid(0.0, 1.0, 32);
        MonicPolyPencil pencil = MonicPolyPencil::from_exact(
            grid, 1, [](cx) { return std::vector<cx>{cx(5.0, 5.0)}; }, 20.0);
        std::vector<cx> seg(101);
        for (int j = 0; j < 101; ++j) seg[j] = cx(-0.5 + j / 100.0, 0.0);
        BoundaryArc arc = BoundaryArc::from_samples(std::move(seg), 50);
        MatchTable table = boundary_root_match(pencil, arc, 1e-9);
        auto entries = classify_arcs(table, arc, pencil, {});
        CHECK(entries.empty());
    }
}

TEST_CASE("classify_arcs separates the cusp point from the smooth remainder") {
    AnalyticModel T = AnalyticModel::series(0.0, 4.0, {0.0, 0.0, 1.0, cx(0.0, 1.0)});
    swz::schwarz::CuspDomain dom = swz::schwarz::build_cusp_domain(T, 0.25, 1201);

    // node grid along the arc itself: the exact evaluator is only defined on
    // the closed domain side, so circle nodes below the arc would be invalid
    std::vector<cx> grid;
    for (int i = 0; i < dom.arc.size(); i += 40) grid.push_back(dom.arc.samples[i]);
    AnalyticModel S = dom.S;
    MonicPolyPencil pencil = MonicPolyPencil::from_exact(
        grid, 1, [S](cx z) { return std::vector<cx>{-S(z)}; }, 4.0);

    MatchTable table = boundary_root_match(pencil, dom.arc, 1e-7);
    int matched = 0;
    for (const auto& m : table.matched) matched += !m.empty();
    REQUIRE(matched > 1100);  // the branch is the boundary reflection on the whole arc
    REQUIRE_FALSE(table.runs.empty());

    auto entries = classify_arcs(table, dom.arc, pencil, dom.omega_samples);
    REQUIRE_FALSE(entries.empty());
    bool cusp_at_base = false, regular_elsewhere = false;
    for (const auto& e : entries) {
        if (std::abs(e.base) <= 1e-12) {
            if (e.report.label == CaseLabel::cusp) cusp_at_base = true;
        } else {
            if (e.report.label == CaseLabel::regular_analytic) regular_elsewhere = true;
            CHECK(e.report.label != CaseLabel::cusp);
        }
    }
    CHECK(cusp_at_base);
    CHECK(regular_elsewhere);
}
