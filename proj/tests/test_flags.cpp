#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

#include "heislab/errors.hpp"
#include "heislab/flags.hpp"

using namespace heislab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

double smooth_bump(const HPoint& p) {
    const double r2 = p.x * p.x + p.y * p.y + 0.25 * p.t * p.t;
    return r2 < 1.0 ? p.x * std::exp(-1.0 / (1.0 - r2)) : 0.0;
}

}  // namespace

TEST_CASE("flag parametrization", "[flags]") {
    const auto f = FlagSpec::from([](double y) { return 0.5 * y * y; }, -1.0, 1.0, -1.0, 1.0);
    const HPoint p = flag_param(f, 0.6, 0.3);
    CHECK_THAT(p.x, WithinAbs(0.18, 1e-7));
    CHECK(p.y == 0.6);
    // t - y A / 2 + y^3 / 6
    CHECK_THAT(p.t, WithinAbs(0.3 - 0.6 * 0.18 / 2 + 0.216 / 6, 1e-7));
    CHECK_THAT(f.lipschitz(), WithinRel(1.0, 1e-3));
    CHECK_THROWS_AS(flag_param(f, 0.0, 2.0), DomainError);
    CHECK_THROWS_AS(FlagSpec::from([](double y) { return y; }, 0.5, 1.0, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(FlagSpec::flat(-1.0, 1.0, 1.0, 1.0), DomainError);
}

TEST_CASE("vertical translations are isometries of the flag", "[flags]") {
    const auto f = FlagSpec::from([](double y) { return std::sin(2.0 * y); }, -1.0, 1.0, -1.0, 1.0);
    const double h = 0.37;
    for (double y : {-0.8, 0.1})
        for (double y2 : {-0.3, 0.9}) {
            const double a = dist(flag_param(f, y, 0.2 + h), flag_param(f, y2, -0.5 + h));
            const double b = dist(flag_param(f, y, 0.2), flag_param(f, y2, -0.5));
            CHECK_THAT(a, WithinAbs(b, 1e-12));
        }
}

TEST_CASE("flag parametrization is bilipschitz", "[flags]") {
    const auto f = FlagSpec::from([](double y) { return y; }, -1.0, 1.0, -1.0, 1.0);
    const auto r = flag_bilipschitz_audit(f, 2000, 3);
    CHECK(r.ratios.min >= 0.25);
    CHECK(r.ratios.max <= 4.0);
    CHECK(parabolic_distance(0.0, 0.0, 0.5, 0.09) == 0.5);
    CHECK(parabolic_distance(0.0, 0.0, 0.1, -0.09) == 0.3);
}

TEST_CASE("area weights and the normalizing constant", "[flags]") {
    CHECK(area_constant() == 0.25);
    const auto slope = FlagSpec::from([](double y) { return 0.75 * y; }, -1.0, 1.0, 0.0, 0.5);
    const auto s = flag_samples(slope, 20, 10);
    double total = 0.0;
    for (double w : s.weights) total += w;
    CHECK_THAT(total, WithinRel(0.25 * 1.25 * 2.0 * 0.5, 1e-12));

    // Measure of flat-flag balls from the samples.
    const auto flat = FlagSpec::flat(-1.0, 1.0, -1.0, 1.0);
    const auto fs = flag_samples(flat, 400, 400);
    for (double r : {0.3, 0.6}) {
        double m = 0.0;
        for (std::size_t k = 0; k < fs.points.size(); ++k)
            if (dist(fs.points[k], HPoint{}) <= r) m += fs.weights[k];
        CHECK_THAT(m, WithinRel(r * r * r, 0.03));
    }
}

TEST_CASE("closed-form gradient matches finite differences", "[flags]") {
    for (const HPoint& p : {HPoint{0.3, -0.7, 0.2}, HPoint{-1.1, 0.4, -0.9}, HPoint{0.05, 0.02, 0.3}}) {
        const auto [gx, gy] = horizontal_gradient_fd(koranyi_inv_sq, p, 1e-6);
        CHECK_THAT(grad_koranyi_inv_sq_x(p), WithinAbs(gx, 1e-6 * (1 + std::abs(gx))));
        CHECK_THAT(grad_koranyi_inv_sq_y(p), WithinAbs(gy, 1e-6 * (1 + std::abs(gy))));
    }
    CHECK_THROWS_AS(koranyi_inv_sq(HPoint{}), SingularityError);
    CHECK_THROWS_AS(flag_kernel("Nope"), DomainError);
}

TEST_CASE("k_tau of a compactly supported kernel", "[flags]") {
    const KTauSpec s{smooth_bump, 1.0};
    const HPoint p{0.4, 0.2, 0.3};
    // Fixed-step sum over the support in theta; the integrand is smooth and compactly supported.
    std::complex<double> ref = 0.0;
    const double h = 1e-4;
    for (int i = -30000; i <= 30000; ++i) {
        const double th = i * h;
        ref += h * std::polar(1.0, -2.0 * std::numbers::pi * th) * smooth_bump({p.x, p.y, p.t + th});
    }
    CHECK_THAT(std::abs(k_tau_eval(s, p) - ref), WithinAbs(0.0, 1e-6));
    CHECK_THROWS_AS(k_tau_eval(s, {0.0, 0.0, 1.0}), SingularityError);
    CHECK_THROWS_AS(k_tau_eval({smooth_bump, 0.0}, p), DomainError);
}

TEST_CASE("k_tau is horizontally odd and tau-uniform", "[flags]") {
    const auto K = flag_kernel("GradKorY");
    for (double tau : {0.5, 4.0}) {
        const KTauSpec s{K, tau};
        for (const HPoint& p : {HPoint{0.5, 0.3, 0.7}, HPoint{-1.2, 0.8, -2.0}}) {
            const auto a = k_tau_eval(s, p), b = k_tau_eval(s, {-p.x, -p.y, p.t});
            CHECK_THAT(std::abs(a + b), WithinAbs(0.0, 1e-8));
        }
    }
    std::vector<double> dc;
    for (double tau : {0.25, 1.0, 16.0}) dc.push_back(k_tau_decay_constant({K, tau}, 60, 2));
    const auto [lo, hi] = std::minmax_element(dc.begin(), dc.end());
    CHECK((*hi - *lo) / *lo <= 0.05);
}

TEST_CASE("flat-flag matrices", "[flags]") {
    const auto flat = FlagSpec::flat(-1.0, 1.0, -1.0 / 16, 1.0 / 16);
    const auto K = flag_kernel("GradKorY");
    const auto m = assemble_flag_sio(flat, K, 16, 16, 0.3);
    // x vanishes on the flat flag, so the kernel is odd under inversion there.
    CHECK((m.re + m.re.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * m.re.cwiseAbs().maxCoeff());
    CHECK(sio3_norm(flat, flag_kernel("Zero"), 16, 16, 0.3) == 0.0);
    CHECK_THROWS_AS(assemble_flag_sio(flat, K, 200, 200, 0.3), ResourceError);
    CHECK_THROWS_AS(assemble_flag_sio(flat, K, 16, 16, 0.01), DiscretizationError);
    CHECK_THROWS_AS(assemble_flag_sio(flat, K, 16, 16, 0.0), DomainError);
}

TEST_CASE("flag csv", "[flags]") {
    std::ostringstream os;
    write_flag_csv(os, {{"GradKorY", "flat", 0.25, 8, 4, 1.5}});
    CHECK(os.str().rfind("kernel,flag,epsilon,ny,nt,op_norm\nGradKorY,flat,0.25,8,4,", 0) == 0);
}
