#include <catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "heislab/errors.hpp"
#include "heislab/sio.hpp"

using namespace heislab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("midpoint samples", "[sio]") {
    const auto s = LineSamples::midpoint(0.0, 1.0, 4);
    REQUIRE(s.size() == 4);
    CHECK(s.x[0] == 0.125);
    CHECK(s.x[3] == 0.875);
    CHECK(s.w[2] == 0.25);
    CHECK(s.max_gap() == 0.25);
}

TEST_CASE("four-point Hilbert matrix by hand", "[sio]") {
    // Only the pair at distance 3/4 survives the truncation at 1/2.
    const auto m = assemble_sio(hilbert_kernel(), LineSamples::midpoint(0.0, 1.0, 4), 0.5);
    CHECK_FALSE(m.is_complex());
    CHECK_THAT(m.re(0, 3), WithinRel(-1.0 / 3.0, 1e-15));
    CHECK_THAT(m.re(3, 0), WithinRel(1.0 / 3.0, 1e-15));
    CHECK(m.re(0, 2) == 0.0);
    CHECK_THAT(op_norm_dense(m), WithinRel(1.0 / 3.0, 1e-14));
    CHECK_THAT(op_norm(m), WithinRel(1.0 / 3.0, 1e-8));
}

TEST_CASE("Hilbert matrix is antisymmetric with equal weights", "[sio]") {
    const auto m = assemble_sio(hilbert_kernel(), LineSamples::midpoint(-1.0, 1.0, 128), 0.05);
    CHECK((m.re + m.re.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Lanczos, power iteration and dense SVD agree", "[sio]") {
    const auto s = LineSamples::midpoint(0.0, 2.0, 200);
    const auto h = assemble_sio(hilbert_kernel(), s, 0.03);
    const double dense = op_norm_dense(h);
    CHECK_THAT(op_norm(h), WithinRel(dense, 1e-7));
    CHECK_THAT(op_norm_power(h), WithinRel(dense, 1e-7));

    const LineKernel osc = [](double x, double y) { return std::polar(1.0, 3.0 * (x - y)) / (x - y); };
    const auto c = assemble_sio(osc, s, 0.03, Truncation::Smooth);
    REQUIRE(c.is_complex());
    const double cd = op_norm_dense(c);
    CHECK_THAT(op_norm(c), WithinRel(cd, 1e-7));
    CHECK_THAT(op_norm_power(c), WithinRel(cd, 1e-7));
    CHECK_THAT(op_norm(c, false), WithinRel(op_norm_dense(c, false), 1e-7));
}

TEST_CASE("truncation guards", "[sio]") {
    const auto s = LineSamples::midpoint(0.0, 1.0, 100);
    CHECK_THROWS_AS(assemble_sio(hilbert_kernel(), s, 0.0), DomainError);
    CHECK_THROWS_AS(assemble_sio(hilbert_kernel(), s, 0.015), DiscretizationError);
    CHECK_NOTHROW(assemble_sio(hilbert_kernel(), s, 0.015, Truncation::Smooth));
    CHECK_THROWS_AS(assemble_sio(hilbert_kernel(), s, 0.1, Truncation::ByD), DomainError);
}

TEST_CASE("smooth cutoff", "[sio]") {
    CHECK(smooth_cutoff(0.2, 1.0) == 0.0);
    CHECK(smooth_cutoff(0.5, 1.0) == 0.0);
    CHECK(smooth_cutoff(1.0, 1.0) == 1.0);
    CHECK(smooth_cutoff(3.0, 1.0) == 1.0);
    const double mid = smooth_cutoff(0.75, 1.0);
    CHECK(mid > 0.0);
    CHECK(mid < 1.0);
}

TEST_CASE("apply matches the matrix", "[sio]") {
    const auto s = LineSamples::midpoint(0.0, 1.0, 16);
    const auto m = assemble_sio(hilbert_kernel(), s, 0.2);
    std::vector<std::complex<double>> f(16);
    for (std::size_t i = 0; i < 16; ++i) f[i] = {std::cos(double(i)), 0.5};
    const auto y = apply_sio(m, f);
    for (std::size_t i = 0; i < 16; ++i) {
        std::complex<double> ref = 0.0;
        for (std::size_t j = 0; j < 16; ++j) ref += m(i, j) * f[j];
        CHECK_THAT(std::abs(y[i] - ref), WithinAbs(0.0, 1e-13));
    }
}

TEST_CASE("maximal function of a constant is the constant", "[sio]") {
    const auto s = LineSamples::midpoint(0.0, 1.0, 64);
    for (double v : hardy_littlewood(s, std::vector<double>(64, -2.0))) CHECK_THAT(v, WithinRel(2.0, 1e-14));
    CHECK_THROWS_AS(hardy_littlewood(s, std::vector<double>(3, 1.0)), DomainError);
    // The maximal truncated transform dominates each single truncation.
    std::vector<double> f(64);
    for (std::size_t i = 0; i < 64; ++i) f[i] = s.x[i] < 0.5 ? 1.0 : 0.0;
    const auto star = maximal_sio(hilbert_kernel(), s, f, {0.05, 0.1, 0.2});
    const auto m = assemble_sio(hilbert_kernel(), s, 0.1);
    std::vector<std::complex<double>> fc(f.begin(), f.end());
    const auto y = apply_sio(m, fc);
    for (std::size_t i = 0; i < 64; ++i) CHECK(star[i] >= std::abs(y[i]) - 1e-12);
}

TEST_CASE("norm csv", "[sio]") {
    std::ostringstream os;
    write_norm_csv(os, {{"hilbert", "line", 0.5, 4, 0.25, 1.5}}, false);
    CHECK(os.str() == "kernel,curve,epsilon,n,op_norm,assembly_seconds\nhilbert,line,0.5,4,0.25,0\n");
}
