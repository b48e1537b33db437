#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

#include "heislab/beta.hpp"
#include "heislab/errors.hpp"

using namespace heislab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Grid search along the line followed by golden-section refinement.
double line_distance_oracle(const HPoint& q, const HPoint& base, double theta) {
    auto at = [&](double s) { return dist(q, base * HPoint{s * std::cos(theta), s * std::sin(theta), 0.0}); };
    double best = 1e300, sb = 0.0;
    for (int i = -20000; i <= 20000; ++i) {
        const double s = i * 5e-4;
        if (at(s) < best) best = at(s), sb = s;
    }
    double a = sb - 5e-4, b = sb + 5e-4;
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 200; ++it) {
        const double c = b - r * (b - a), d = a + r * (b - a);
        if (at(c) < at(d)) b = d;
        else a = c;
    }
    return std::min(best, at(0.5 * (a + b)));
}

}  // namespace

TEST_CASE("distance to a horizontal line", "[beta]") {
    const HPoint base{0.2, -0.1, 0.3};
    for (const HPoint& q : {HPoint{1.0, 0.5, -0.2}, HPoint{-0.4, 0.9, 1.3}, HPoint{0.0, 0.0, 2.0}, HPoint{3.0, -1.0, 0.1}})
        for (double th : {0.0, 0.4, 2.0}) {
            INFO("q " << q.x << "," << q.y << "," << q.t << " theta " << th);
            CHECK_THAT(line_distance(q, base, th), WithinAbs(line_distance_oracle(q, base, th), 1e-9));
        }
    CHECK(line_distance(base * HPoint{0.6, 0.0, 0.0}, base, 0.0) <= 1e-7);
}

TEST_CASE("affine beta numbers", "[beta]") {
    const auto g = UniformGrid::over(-1.0, 1.0, 2001);
    const auto lin = beta_affine(SampledFn::from(g, [](double y) { return -0.3 * y + 0.9; }), 0.0, 1.0);
    CHECK(lin.value <= 1e-12);
    CHECK_THAT(lin.a, WithinAbs(-0.3, 1e-9));
    const auto v = beta_affine(SampledFn::from(g, [](double y) { return std::abs(y); }), 0.0, 1.0);
    CHECK_THAT(v.value, WithinAbs(0.5, 1e-9));
    CHECK_THAT(v.b, WithinAbs(0.5, 1e-9));
    CHECK_THROWS_AS(beta_affine(SampledFn::from(g, [](double y) { return y; }), 0.5, 1.0), DomainError);
    CHECK_THROWS_AS(beta_affine(SampledFn::from(g, [](double y) { return y; }), 0.0, 0.0), DomainError);
}

TEST_CASE("Jones sums scale and vanish on lines", "[beta]") {
    const auto f = SampledFn::from(UniformGrid::over(0.0, 1.0, 513), [](double y) { return std::cos(4.0 * y); });
    const double j = jones_sum(f, 0.0, 1.0, 4);
    CHECK(j > 0.0);
    const double r = 3.0;
    const auto fr = SampledFn::from(UniformGrid::over(0.0, r, 513), [r](double y) { return r * std::cos(4.0 * y / r); });
    CHECK_THAT(jones_sum(fr, 0.0, r, 4), WithinRel(j, 1e-9));
    const auto line = SampledFn::from(UniformGrid::over(0.0, 1.0, 513), [](double y) { return 2.0 * y; });
    CHECK(jones_sum(line, 0.0, 1.0, 4) <= 1e-20);
    CHECK_THROWS_AS(jones_sum(f, 1.0, 0.0, 4), DomainError);
}

TEST_CASE("dyadic cubes on the x-axis", "[beta]") {
    const auto c = horizontal_line_curve({0.0, 0.0, 0.0}, 0.0, 0.0, 1.0, 1025);
    const auto sys = dyadic_cubes_on_curve(c, 3);
    REQUIRE(sys.levels.size() == 4);
    CHECK(sys.levels[3].size() == 8);
    for (const auto& lev : sys.levels) {
        double m = 0.0;
        for (const auto& q : lev) m += q.measure;
        CHECK_THAT(m, WithinRel(c.total_weight(), 1e-9));
    }
    for (const auto& q : sys.levels[3]) CHECK_THAT(q.measure, WithinRel(0.125, 1e-2));
    CHECK(sys.c0 > 0.0);
    CHECK(sys.C0 >= 0.5);
    CHECK_THROWS(dyadic_cubes_on_curve(t_axis_curve(0.0, 1.0, 513), 2));
}

TEST_CASE("horizontal beta", "[beta]") {
    const auto dl = horizontal_line_curve({0.25, -0.5, 0.5}, 0.0, 0.0, 1.0, 513);
    const auto sys = dyadic_cubes_on_curve(dl, 3);
    for (const auto& lev : sys.levels)
        for (const auto& q : lev) CHECK(horizontal_beta(dl, q).value <= 1e-8);

    const auto ta = t_axis_curve(0.0, 1.0, 512);
    CHECK(horizontal_beta(ta, dyadic_cubes_on_curve(ta, 0, false).cube(0, 0)).value >= 0.3);

    // Left translation moves the best line with the curve.
    const auto wave = curve_from_graph(ilg_fixture("wave", 1.0, 0.0, 1.0, 1025), 0.0, 1.0, 256);
    Curve moved = wave;
    const HPoint p{0.4, -1.1, 0.7};
    for (auto& q : moved.points) q = p * q;
    const auto ws = dyadic_cubes_on_curve(wave, 1), ms = dyadic_cubes_on_curve(moved, 1);
    CHECK_THAT(horizontal_beta(moved, ms.cube(1, 0)).value, WithinAbs(horizontal_beta(wave, ws.cube(1, 0)).value, 1e-3));
}

TEST_CASE("WGL sums", "[beta]") {
    const auto dl = horizontal_line_curve({0.25, -0.5, 0.5}, 0.0, 0.0, 1.0, 513);
    CHECK(wgl_count(dl, dyadic_cubes_on_curve(dl, 3), 0.01, 0, 0) == 0.0);
    const auto wave = curve_from_graph(ilg_fixture("wave", 1.0, 0.0, 1.0, 2049), 0.0, 1.0, 512);
    const auto sys = dyadic_cubes_on_curve(wave, 4, true, 6);
    const double w = wgl_count(wave, sys, 0.1, 0, 0);
    CHECK(std::isfinite(w));
    CHECK(w <= 5.0);
}

TEST_CASE("projected lengths", "[beta]") {
    const auto c = horizontal_line_curve({0.0, 0.0, 0.0}, 0.5, 0.0, 1.0, 257);
    CHECK_THAT(projected_length(c, 0, 256, 0.5), WithinRel(1.0, 1e-12));
    CHECK_THAT(projected_length(c, 0, 256, 0.5 + std::numbers::pi / 2), WithinAbs(0.0, 1e-12));
    CHECK_THAT(projected_length(c, 0, 256, 0.5 + 1.0), WithinRel(std::cos(1.0), 1e-12));
    const auto ta = t_axis_curve(0.0, 1.0, 65);
    CHECK(projected_length(ta, 0, 64, 0.3) == 0.0);
    CHECK_THROWS_AS(projected_length(c, 10, 300, 0.0), DomainError);
}

TEST_CASE("cube csv header", "[beta]") {
    std::ostringstream os;
    write_cube_csv(os, {});
    CHECK(os.str() == "level,index,center_x,center_y,center_t,beta,proj_ratio,good\n");
}
