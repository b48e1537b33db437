#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <numbers>

#include "heislab/errors.hpp"
#include "heislab/kernel1d.hpp"

using namespace heislab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("kappa variants", "[kernel1d]") {
    const auto r = certify_kappa(Kappa::reciprocal());
    CHECK_THAT(r.size, WithinRel(1.0, 1e-14));
    CHECK_THAT(r.derivative, WithinRel(1.0, 1e-14));
    CHECK_THROWS_AS(Kappa::reciprocal()(0.0), SingularityError);

    const auto s = Kappa::smoothed(0.5);
    CHECK(s(0.0) == 0.0);
    CHECK_THAT(s(0.5), WithinRel(1.0, 1e-15));
    const auto sc = certify_kappa(s);
    CHECK(sc.size <= 1.0);
    CHECK(sc.derivative <= 1.0);
    CHECK_THROWS_AS(Kappa::smoothed(0.0), DomainError);

    const auto g = UniformGrid::over(0.5, 2.0, 4);
    const auto c = Kappa::custom(SampledFn::from(g, [](double u) { return 1.0 / u; }));
    CHECK(c(1.0) == 1.0);
    CHECK(c(-1.0) == -1.0);
    CHECK(c(3.0) == 0.0);
    CHECK(c(0.25) == 0.0);
    CHECK_THROWS_AS(Kappa::custom(SampledFn::from(UniformGrid::over(0.0, 1.0, 3), [](double) { return 1.0; })),
                    DomainError);
}

TEST_CASE("q functions", "[kernel1d]") {
    CHECK(q_eval(QFn::Square, -2.0) == 4.0);
    CHECK(q_eval(QFn::SignedSquare, -2.0) == -4.0);
    CHECK(q_eval(QFn::SignedSquare, 3.0) == 9.0);
}

TEST_CASE("quotients of linear A and quadratic B", "[kernel1d]") {
    const auto g = UniformGrid::over(-1.0, 1.0, 4097);
    Kernel1D k;
    k.A = SampledFn::from(g, [](double s) { return 0.6 * s - 0.2; });
    k.B = TameMapSampled::from_b1(g, SampledFn::from(g, [](double s) { return s * s; }).v, 0.0);
    const double x = 0.7, y = -0.3;
    CHECK_THAT(k.a_quotient(x, y), WithinAbs(0.6, 1e-14));
    // Numerator -(x-y)^3/6 over (x-y)^2.
    CHECK_THAT(k.b_quotient(x, y), WithinAbs(-(x - y) / 6.0, 1e-6));
    k.q = QFn::SignedSquare;
    CHECK_THAT(k.b_quotient(y, x), WithinAbs(-(x - y) / 6.0, 1e-6));

    k.m = 2;
    k.n = 0;
    CHECK_THAT(commutator_eval(k, x, y), WithinRel(0.36 / (x - y), 1e-12));
    CHECK_THROWS_AS(commutator_eval(k, x, x), SingularityError);
}

TEST_CASE("tame-linear B contributes nothing", "[kernel1d]") {
    Kernel1D k;
    k.B = TameLinear{0.8, -0.3, 0.4};
    k.n = 3;
    for (double x : {-0.5, 0.25})
        for (double y : {0.1, 0.9}) {
            CHECK(k.b_quotient(x, y) == 0.0);
            CHECK(exp_kernel_eval(k, x, y) == std::complex<double>(1.0 / (x - y)));
        }
}

TEST_CASE("Taylor partial sums converge to the exponential kernel", "[kernel1d]") {
    const auto g = UniformGrid::over(-1.0, 1.0, 1025);
    Kernel1D k;
    k.A = SampledFn::from(g, [](double s) { return 0.4 * std::sin(3.0 * s); });
    const double x = 0.3, y = -0.6;
    const auto target = exp_kernel_eval(k, x, y);
    double prev = std::numeric_limits<double>::infinity();
    for (int N = 0; N <= 25; ++N) {
        const double err = std::abs(taylor_partial(k, x, y, N) - target);
        const double bound = taylor_remainder_bound(k, x, y, N);
        CHECK(err <= bound * (1 + 1e-9) + 1e-15);
        if (N >= 8) CHECK(bound <= prev);
        prev = bound;
    }
    CHECK_THROWS_AS(taylor_partial(k, x, y, -1), DomainError);
}

TEST_CASE("line triples", "[kernel1d]") {
    const auto t = line_triples(300, -1.0, 2.0, 4);
    REQUIRE(t.size() == 300);
    for (const auto& tr : t) {
        CHECK(std::abs(tr.x - tr.xp) <= 0.5 * std::abs(tr.x - tr.y));
        CHECK(tr.xp >= -1.0);
        CHECK(tr.xp <= 2.0);
    }
    CHECK(line_triples(5, 0.0, 1.0, 7)[3].x == line_triples(5, 0.0, 1.0, 7)[3].x);
    CHECK_THROWS_AS(line_triples(0, 0.0, 1.0, 1), DomainError);
}

TEST_CASE("strong constants of the Hilbert kernel", "[kernel1d]") {
    const auto t = line_triples(500, 0.0, 1.0, 9);
    const auto r = strong_constants(hilbert_kernel(), t);
    CHECK_THAT(r.size, WithinRel(1.0, 1e-14));
    // |x-y| / |x'-y| lies in [2/3, 2] when |x-x'| <= |x-y|/2.
    CHECK(r.holder <= 2.0 + 1e-12);
    CHECK(r.holder >= 1.0);
    CHECK_THROWS_AS(strong_constants(hilbert_kernel(), t, 1.5), DomainError);
}

TEST_CASE("commutator growth is geometric", "[kernel1d]") {
    const auto g = UniformGrid::over(-2.0, 2.0, 1025);
    const auto A = SampledFn::from(g, [](double s) { return 0.3 * std::sin(2.0 * s); });
    const auto B = TameMapSampled::from_b1(g, SampledFn::from(g, [](double s) { return 0.25 * std::cos(3.0 * s); }).v, 0.0);
    const auto t = line_triples(300, -1.0, 1.0, 10);
    const auto fit = commutator_growth(A, B, QFn::Square, 4, t);
    REQUIRE(fit.strong.size() == 5);
    for (std::size_t k = 0; k < 5; ++k) CHECK(fit.strong[k] <= std::pow(fit.C, double(k + 1)) * (1 + 1e-12));
    CHECK(std::isfinite(fit.slope));
}
