// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "heislab/beta.hpp"
#include "heislab/corona.hpp"
#include "heislab/flags.hpp"
#include "heislab/fourier.hpp"
#include "heislab/heis.hpp"
#include "heislab/ilg.hpp"
#include "heislab/kernel1d.hpp"
#include "heislab/kernels.hpp"
#include "heislab/lab.hpp"
#include "heislab/sio.hpp"
#include "heislab/special.hpp"
#include "heislab/tame.hpp"

using namespace heislab;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        if (!detail.empty()) detail += "; ";
        detail += ok ? what : "[" + what + "]";
    }
};

std::string g(double v) { return fmt::format("{:.4g}", v); }

double rel_spread(const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return (*hi - *lo) / *lo;
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

Outcome group_metric() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const auto a = group_audit(1000, 1);
    const double worst = std::max({a.associativity, a.inverse, a.dilation, a.left_invariance});
    o.require(worst <= 1e-12, "identities " + g(worst));
    const auto b = group_audit(10000, 2);
    o.require(b.koranyi_ratio_min >= 1.0 && b.koranyi_ratio_max <= std::pow(17.0, 0.25),
              "ratio [" + g(b.koranyi_ratio_min) + ", " + g(b.koranyi_ratio_max) + "]");
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(secs < 5.0, "time " + g(secs) + "s");
    return o;
}

Outcome kernel_symmetry() {
    Outcome o;
    for (const auto& spec : {KernelSpec::riesz_x(), KernelSpec::riesz_y(), KernelSpec::riesz_t()}) {
        const auto r = symmetry_check(spec, 10000, 3);
        o.require(r.odd_violation <= 1e-10, spec.name() + " odd " + g(r.odd_violation));
    }
    for (const auto& spec : {KernelSpec::grad_log_x(), KernelSpec::grad_log_y()}) {
        const auto r = symmetry_check(spec, 10000, 3);
        o.require(r.hodd_violation <= 1e-10, spec.name() + " hodd " + g(r.hodd_violation));
    }
    const auto cl = KernelSpec::chousionis_li(4.0);
    auto rng = make_rng(3, 13);
    double plane = 0.0;
    for (int i = 0; i < 10000; ++i) {
        HPoint p = random_point(rng, 1e-3, 1e3);
        p.t = 0.0;
        plane = std::max(plane, std::abs(eval_kernel(cl, p)));
    }
    o.require(plane == 0.0, cl.name() + " on t=0 " + g(plane));
    return o;
}

Outcome kernel_constants() {
    Outcome o;
    const auto tri = sk_triples(2000, 4);
    const auto moved = translate(tri, {0.7, -1.3, 2.1});
    const auto up = dilate(tri, 8.0);
    const auto down = dilate(tri, 0.125);
    double worst = 0.0;
    for (const auto& spec : {KernelSpec::riesz_x(), KernelSpec::riesz_y(), KernelSpec::riesz_t(),
                             KernelSpec::grad_log_x(), KernelSpec::grad_log_y(), KernelSpec::chousionis_li(4.0)}) {
        const auto base = sk_constants(spec, tri, 0.5);
        if (!std::isfinite(base.size_constant) || !std::isfinite(base.holder_constant)) {
            o.require(false, spec.name() + " finite");
            continue;
        }
        for (const auto* set : {&moved, &up, &down}) {
            const auto r = sk_constants(spec, *set, 0.5);
            worst = std::max({worst, rel_diff(r.size_constant, base.size_constant),
                              rel_diff(r.holder_constant, base.holder_constant)});
        }
    }
    o.require(worst <= 1e-9, "invariance " + g(worst));
    return o;
}

Outcome tame_extension() {
    Outcome o;
    const auto grid = UniformGrid::over(0.0, 1.0, 513);
    auto rng = make_rng(1, 71);
    double worst = 0.0, agree = 0.0;
    for (int t = 0; t < 100; ++t) {
        const auto d = random_partial_tame(rng, grid, 20, 2.0);
        const auto ext = extend_tame(d, grid);
        const double L = tameness_constant(d);
        if (L > 0.0) worst = std::max(worst, tameness_constant(ext) / L);
        for (std::size_t k = 0; k < d.points.size(); ++k) {
            const std::size_t i = grid.nearest(d.points[k]);
            agree = std::max({agree, std::abs(ext.b1()[i] - d.phi1[k]), std::abs(ext.b2()[i] - d.phi2[k])});
        }
    }
    o.require(agree == 0.0, "agreement " + g(agree));
    o.require(worst <= 18.0, "ratio " + g(worst));

    PartialTameData two{{0.0, 1.0}, {0.0, 0.0}, {0.0, 1.5}};
    const auto ext = extend_tame(two, grid);
    const double peak = ext.b1()[grid.nearest(0.5)], end = ext.b2()[grid.n - 1];
    o.require(peak == 3.0 && end == 1.5, "extremal phi1(1/2)=" + g(peak) + " phi2(1)=" + g(end));
    return o;
}

Outcome parabolic_rescaling() {
    Outcome o;
    const auto grid = UniformGrid::over(0.0, 1.0, 257);
    auto rng = make_rng(5, 71);
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
        const auto map = extend_tame(random_partial_tame(rng, grid, 20, 2.0), grid);
        const double L = tameness_constant(map);
        for (double r : {0.5, 2.0, 8.0}) worst = std::max(worst, rel_diff(tameness_constant(rescale_tame(map, r)), L));
    }
    o.require(worst <= 1e-9, "invariance " + g(worst));
    return o;
}

Outcome tame_vs_ilg() {
    Outcome o;
    for (const char* name : {"slope", "zigzag", "wave"})
        for (double L : {0.5, 1.0, 2.0}) {
            const auto f = ilg_fixture(name, L, 0.0, 1.0, 257);
            const auto map = tame_from_ilg(f.phi1, f.phi2, f.declared_L);
            const double c = tameness_constant(map);
            const double lim = 2.0 * f.declared_L * f.declared_L;
            if (c > lim) o.require(false, fmt::format("{} L={} {} > {}", name, L, g(c), g(lim)));
        }
    o.require(o.pass, "fixtures within 2L^2");
    const auto line = ilg_fixture("line", 1.0, 0.0, 1.0, 257);
    const double c = tameness_constant(tame_from_ilg(line.phi1, line.phi2, 0.0));
    o.require(c == 0.0, "horizontal line " + g(c));
    return o;
}

struct CoronaPin {
    const char* mode;
    const char* fixture;
    double eta;
    double bad_carleson;
    double top_carleson;
};

// Frozen from a reference run at depth 8.
constexpr CoronaPin kCoronaPins[] = {
    {"lipschitz", "slope", 0.5, 0.0, 1.0},  {"lipschitz", "slope", 0.25, 0.0, 1.0},
    {"lipschitz", "zigzag", 0.5, 4.4765625, 1.0}, {"lipschitz", "zigzag", 0.25, 4.4765625, 1.0},
    {"lipschitz", "wave", 0.5, 7.25, 1.0},   {"lipschitz", "wave", 0.25, 8.21875, 1.0},
    {"tame", "slope", 0.5, 0.0, 1.0},       {"tame", "slope", 0.25, 0.0, 1.0},
    {"tame", "zigzag", 0.5, 4.4765625, 1.0},      {"tame", "zigzag", 0.25, 4.4765625, 1.0},
    {"tame", "wave", 0.5, 8.921875, 1.0},        {"tame", "wave", 0.25, 8.984375, 1.0},
};

CoronaAudit run_corona(const std::string& mode, const std::string& fixture, double eta, int depth) {
    const std::size_t n = (std::size_t{1} << (depth + 2)) + 1;
    const auto f = ilg_fixture(fixture, 1.0, 0.0, 1.0, n);
    if (mode == "lipschitz") return audit_corona(lipschitz_corona(f.phi1, eta, depth), f.phi1);
    const auto raw = TameMapSampled::from_b1(f.phi1.grid, f.phi1.v, 0.0);
    const auto B = TameMapSampled::from_b1(f.phi1.grid, f.phi1.v, 0.0, std::max(1.0, tameness_constant(raw)));
    return audit_corona(tame_corona(B, eta, depth), B);
}

Outcome corona_audit() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    int bad_audit = 0;
    double drift = 0.0, pin = 0.0;
    for (const auto& p : kCoronaPins) {
        const auto a = run_corona(p.mode, p.fixture, p.eta, 8);
        const auto b = run_corona(p.mode, p.fixture, p.eta, 8);
        std::printf("  corona %s %s eta=%g bad_carleson=%.10g top_carleson=%.10g\n", p.mode, p.fixture, p.eta,
                    a.bad_carleson, a.top_carleson);
        if (!a.ok() || !std::isfinite(a.bad_carleson) || !std::isfinite(a.top_carleson)) {
            ++bad_audit;
            std::printf("  corona %s %s eta=%g failure: %s\n", p.mode, p.fixture, p.eta, a.failure.c_str());
        }
        drift = std::max({drift, std::abs(a.bad_carleson - b.bad_carleson), std::abs(a.top_carleson - b.top_carleson)});
        auto off = [](double v, double ref) { return std::abs(v - ref) / std::max(ref, 1.0); };
        pin = std::max({pin, off(a.bad_carleson, p.bad_carleson), off(a.top_carleson, p.top_carleson)});
    }
    o.require(bad_audit == 0, fmt::format("audits failing {}", bad_audit));
    o.require(drift == 0.0, "run-to-run " + g(drift));
    o.require(pin <= 0.01, "pins " + g(pin));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(secs < 120.0, "time for both runs " + g(secs) + "s");
    return o;
}

Outcome area_formula() {
    Outcome o;
    const auto wave = ilg_fixture("wave", 1.0, 0.0, 1.0, 10001);
    const double poly = polyline_length(wave, 0.0, 1.0, 10000), area = h1_length(wave, 0.0, 1.0, 10000);
    o.require(rel_diff(poly, area) <= 0.01, "wave " + g(poly) + " vs " + g(area));
    const auto slope = ilg_fixture("slope", 1.0, 0.0, 1.0, 10001);
    const double s1 = h1_length(slope, 0.0, 1.0, 10000), s2 = polyline_length(slope, 0.0, 1.0, 10000);
    o.require(std::abs(s1 - std::numbers::sqrt2) <= 1e-3 && std::abs(s2 - std::numbers::sqrt2) <= 1e-3,
              "slope-1 " + g(s1) + ", " + g(s2));
    return o;
}

Outcome norm_uniformity() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t n = 4096;
    std::vector<double> eps;
    for (int k = 3; k <= 8; ++k) eps.push_back(std::ldexp(1.0, -k));

    const auto line = LineSamples::midpoint(0.0, 4.0, n);
    std::vector<double> hil, ctl;
    for (double e : eps) {
        hil.push_back(op_norm(assemble_sio(hilbert_kernel(), line, e)));
        ctl.push_back(op_norm(assemble_sio(positive_control_kernel(), line, e)));
    }
    const auto f = ilg_fixture("zigzag", 1.0, 0.0, 4.0, 4 * n + 1);
    const auto c = curve_from_graph(f, 0.0, 4.0, n);
    const auto k = make_pair_kernel(KernelSpec::grad_log_x());
    std::vector<double> kphi, wave;
    for (double e : eps) kphi.push_back(op_norm(assemble_sio(k, c, e)));
    // Smooth graph for comparison; its truncated norms approach the limit more slowly.
    const auto wc = curve_from_graph(ilg_fixture("wave", 1.0, 0.0, 4.0, 4 * n + 1), 0.0, 4.0, n);
    for (double e : eps) wave.push_back(op_norm(assemble_sio(k, wc, e)));
    std::printf("  hilbert");
    for (double v : hil) std::printf(" %.6g", v);
    std::printf("\n  gradlog");
    for (double v : kphi) std::printf(" %.6g", v);
    std::printf("\n  wave   ");
    for (double v : wave) std::printf(" %.6g", v);
    std::printf("\n  control");
    for (double v : ctl) std::printf(" %.6g", v);
    std::printf("\n");

    const std::vector<double> h_tail(hil.begin() + 1, hil.end()), k_tail(kphi.begin() + 1, kphi.end());
    o.require(rel_spread(h_tail) <= 0.10, "Hilbert spread " + g(rel_spread(h_tail)));
    o.require(rel_spread(k_tail) <= 0.10, "GradLog spread " + g(rel_spread(k_tail)));
    double growth = 1e300;
    for (std::size_t i = 1; i < ctl.size(); ++i) growth = std::min(growth, ctl[i] - ctl[i - 1]);
    o.require(growth >= 0.8, "control step " + g(growth));

    const auto small = LineSamples::midpoint(0.0, 4.0, 512);
    double power = 0.0, krylov = 0.0;
    for (double e : {0.125, 0.03125}) {
        for (const auto& m : {assemble_sio(hilbert_kernel(), small, e),
                              assemble_sio(k, curve_from_graph(f, 0.0, 4.0, 512), e),
                              assemble_sio(k, curve_from_graph(ilg_fixture("wave", 1.0, 0.0, 4.0, 2049), 0.0, 4.0, 512), e)}) {
            const double dense = op_norm_dense(m);
            power = std::max(power, rel_diff(op_norm_power(m), dense));
            krylov = std::max(krylov, rel_diff(op_norm(m), dense));
        }
    }
    o.require(power <= 1e-6, "power vs dense " + g(power));
    o.require(krylov <= 1e-6, "Lanczos vs dense " + g(krylov));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(secs < 180.0, "time " + g(secs) + "s");
    return o;
}

Outcome commutator_structure() {
    Outcome o;
    const auto grid = UniformGrid::over(-2.0, 2.0, 1025);
    const auto tri = line_triples(500, -1.0, 1.0, 10);

    Kernel1D lin;
    lin.B = TameLinear{0.8, -0.3, 0.4};
    double gap = 0.0;
    for (const auto& t : tri) {
        const double ref = lin.kappa(t.x - t.y);
        gap = std::max({gap, std::abs(exp_kernel_eval(lin, t.x, t.y) - ref), std::abs(commutator_eval(lin, t.x, t.y) - ref)});
    }
    o.require(gap == 0.0, "tame-linear reduction " + g(gap));

    Kernel1D k;
    k.A = SampledFn::from(grid, [](double s) { return 0.3 * std::sin(2.0 * s); });
    k.B = TameMapSampled::from_b1(grid, SampledFn::from(grid, [](double s) { return 0.25 * std::cos(3.0 * s); }).v, 0.0);
    bool bounded = true, shrinking = true;
    for (const auto& t : tri) {
        const auto full = exp_kernel_eval(k, t.x, t.y);
        double prev = 1e300;
        for (int N = 0; N <= 20; ++N) {
            const double err = std::abs(taylor_partial(k, t.x, t.y, N) - full);
            const double bound = taylor_remainder_bound(k, t.x, t.y, N);
            if (err > bound * (1.0 + 1e-9) + 1e-13 * std::abs(full)) bounded = false;
            if (N >= 8 && bound > prev) shrinking = false;
            prev = bound;
        }
    }
    o.require(bounded && shrinking, "Taylor remainder within factorial bound");

    const auto fit = commutator_growth(*k.A, std::get<TameMapSampled>(k.B), QFn::Square, 4, tri);
    bool within = std::isfinite(fit.C);
    for (std::size_t j = 0; j < fit.strong.size(); ++j)
        within = within && fit.strong[j] <= std::pow(fit.C, static_cast<double>(j + 1)) * (1.0 + 1e-12);
    o.require(within, "growth C=" + g(fit.C) + " slope=" + g(fit.slope));
    return o;
}

Outcome psi_and_wp() {
    Outcome o;
    double mean = 0.0, fc = 0.0;
    bool support = true;
    for (QFn q : {QFn::Square, QFn::SignedSquare})
        for (double s : {0.5, 1.0, 2.0}) {
            const auto c = certify(PsiS(s, q));
            mean = std::max(mean, std::abs(c.mean));
            fc = std::max(fc, c.fourier_constant);
            support = support && c.support_ok;
        }
    o.require(mean <= 1e-8, "Psi mean " + g(mean));
    o.require(support, "support");
    o.require(fc <= 10.0, "Fourier constant " + g(fc));
    double integral = 0.0, env = 0.0;
    for (double e : {0.25, 0.5}) {
        const auto c = certify(Wp(e));
        integral = std::max(integral, std::abs(c.integral));
        env = std::max(env, c.envelope_constant);
    }
    o.require(integral <= 1e-6, "wp integral " + g(integral));
    o.require(std::isfinite(env), "wp envelope " + g(env));
    return o;
}

Outcome fourier_coefficients() {
    Outcome o;
    const std::vector<double> u{-2.0, -1.0, -0.5, 0.5, 1.0, 2.0};
    const auto t = fourier_coeffs(KernelSpec::grad_log_x(), 1.0, u, 12);
    o.require(t.odd_violation <= 1e-10, "odd " + g(t.odd_violation));
    o.require(t.decay_slope <= -4.0, "decay slope " + g(t.decay_slope));
    const auto smooth = fourier_coeffs(KernelSpec::smooth_test(), 1.0, u, 12);
    const auto r = reconstruct(smooth, ilg_fixture("wave", 1.0, 0.0, 1.0, 257));
    o.require(r.residual <= 1e-3, "reconstruction " + g(r.residual));
    return o;
}

// Best constant approximation of |y| on [-1,1] by a search over (a, b).
double abs_beta_oracle() {
    const auto grid = UniformGrid::over(-1.0, 1.0, 2001);
    double best = 1e300;
    for (int i = -50; i <= 50; ++i)
        for (int j = 0; j <= 200; ++j) {
            const double a = i * 0.002, b = j * 0.005;
            double w = 0.0;
            for (std::size_t k = 0; k < grid.n; ++k) w = std::max(w, std::abs(std::abs(grid.x(k)) - a * grid.x(k) - b));
            best = std::min(best, w);
        }
    return best;
}

struct WglPin {
    int level;
    std::size_t index;
    double value;
};

Outcome beta_geometry() {
    Outcome o;
    const auto grid = UniformGrid::over(-1.0, 1.0, 2001);
    const double aff = beta_affine(SampledFn::from(grid, [](double y) { return 0.75 * y - 0.2; }), 0.0, 1.0).value;
    o.require(aff <= 1e-12, "affine " + g(aff));
    const double b = beta_affine(SampledFn::from(grid, [](double y) { return std::abs(y); }), 0.0, 1.0).value;
    const double oracle = abs_beta_oracle();
    o.require(std::abs(b - 0.5) <= 1e-3 && std::abs(b - oracle) <= 1e-3, "|y| " + g(b) + " oracle " + g(oracle));

    const auto base = SampledFn::from(UniformGrid::over(0.0, 1.0, 1025), [](double y) { return std::sin(5.0 * y); });
    const double j0 = jones_sum(base, 0.0, 1.0, 5);
    double scaling = 0.0;
    for (double r : {0.5, 4.0}) {
        const auto scaled = SampledFn::from(UniformGrid::over(0.0, r, 1025), [r](double y) { return r * std::sin(5.0 * y / r); });
        scaling = std::max(scaling, rel_diff(jones_sum(scaled, 0.0, r, 5), j0));
    }
    o.require(scaling <= 1e-9, "jones scaling " + g(scaling));

    // Generic line at scale 1; deeper cubes sit at the sqrt(ulp) floor of the stored t coordinates.
    const auto hl = horizontal_line_curve({0.3, -0.2, 0.5}, 0.7, 0.0, 1.0, 512);
    double flat = horizontal_beta(hl, dyadic_cubes_on_curve(hl, 0).cube(0, 0)).value;
    // Exactly representable line, every cube to depth 3.
    const auto dl = horizontal_line_curve({0.25, -0.5, 0.5}, 0.0, 0.0, 1.0, 513);
    const auto dsys = dyadic_cubes_on_curve(dl, 3);
    for (const auto& lev : dsys.levels)
        for (const auto& q : lev) flat = std::max(flat, horizontal_beta(dl, q).value);
    o.require(flat <= 1e-8, "horizontal line " + g(flat));
    const auto ta = t_axis_curve(0.0, 1.0, 512);
    const double steep = horizontal_beta(ta, dyadic_cubes_on_curve(ta, 0, false).cube(0, 0)).value;
    o.require(steep >= 0.3, "t-axis " + g(steep));

    const auto wave = curve_from_graph(ilg_fixture("wave", 1.0, 0.0, 1.0, 2049), 0.0, 1.0, 512);
    const auto wsys = dyadic_cubes_on_curve(wave, 4, true, 6);
    constexpr WglPin pins[] = {{0, 0, 2.625}, {1, 0, 2.625}, {1, 1, 2.625}};
    double pin = 0.0;
    for (const auto& p : pins) {
        const double w = wgl_count(wave, wsys, 0.1, p.level, p.index);
        std::printf("  wgl level=%d index=%zu sum=%.10g\n", p.level, p.index, w);
        pin = std::max(pin, std::isfinite(w) ? std::abs(w - p.value) : 1e300);
    }
    o.require(pin <= 1e-9, "WGL pins " + g(pin));
    return o;
}

Outcome flags() {
    Outcome o;
    const auto f = FlagSpec::from([](double y) { return y; }, -1.0, 1.0, -1.0, 1.0);
    const auto bl = flag_bilipschitz_audit(f, 4000, 14);
    o.require(bl.ratios.min >= 0.25 && bl.ratios.max <= 4.0,
              "bilipschitz [" + g(bl.ratios.min) + ", " + g(bl.ratios.max) + "]");

    const auto K = flag_kernel("GradKorY");
    std::vector<double> dc;
    for (double tau : {0.25, 1.0, 4.0, 16.0}) dc.push_back(k_tau_decay_constant({K, tau}, 200, 14));
    o.require(rel_spread(dc) <= 0.05, "k_tau decay spread " + g(rel_spread(dc)));

    const auto flat = FlagSpec::flat(-1.0, 1.0, -1.0 / 32.0, 1.0 / 32.0);
    std::vector<double> norms;
    for (double e : {0.25, 0.125, 0.0625}) norms.push_back(sio3_norm(flat, K, 64, 64, e));
    o.require(rel_spread(norms) <= 0.15,
              "64x64 sweep " + g(norms[0]) + " " + g(norms[1]) + " " + g(norms[2]) + " spread " + g(rel_spread(norms)));
    return o;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

Outcome cli_determinism() {
    Outcome o;
    const auto root = std::filesystem::temp_directory_path() / "heislab_acceptance";
    std::filesystem::remove_all(root);
    const std::vector<std::pair<std::string, nlohmann::json>> cases{
        {"geom-selftest", {{"samples", 500}}},
        {"tame-extend", {{"trials", 20}}},
        {"corona", {{"mode", "tame"}, {"depth", 6}}},
        {"sio-norm-sweep", {{"kernel", "GradLogX"}, {"n", 256}, {"epsilons", {0.25, 0.125, 0.0625}}}},
        {"beta-carleson", {{"n", 256}, {"depth", 3}}},
        {"flags-norm", {{"ny", 16}, {"nt", 16}, {"window", {-0.5, 0.5, -1.0 / 256, 1.0 / 256}}, {"epsilons", {0.25}}}},
    };
    int files = 0;
    for (const auto& [suite, params] : cases) {
        std::vector<SuiteResult> res;
        for (unsigned threads : {1u, 4u}) {
            ExperimentConfig cfg;
            cfg.suite = suite;
            cfg.seed = 9;
            cfg.threads = threads;
            cfg.params = params;
            cfg.out = root / fmt::format("{}-{}", suite, threads);
            res.push_back(run(cfg));
        }
        for (std::size_t i = 0; i < res[0].files.size(); ++i) {
            if (res[0].files[i].extension() != ".csv") continue;
            ++files;
            if (slurp(res[0].files[i]) != slurp(res[1].files[i]))
                o.require(false, res[0].files[i].filename().string() + " differs");
        }
    }
    set_threads(0);
    o.require(o.pass, fmt::format("{} CSV files identical across 1 and 4 threads", files));
    std::filesystem::remove_all(root);
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"group and metric identities", group_metric},
        {"kernel symmetry", kernel_symmetry},
        {"standard kernel constants", kernel_constants},
        {"tame extension", tame_extension},
        {"parabolic rescaling", parabolic_rescaling},
        {"tame and intrinsic Lipschitz graphs", tame_vs_ilg},
        {"corona audit", corona_audit},
        {"area formula", area_formula},
        {"operator norm uniformity", norm_uniformity},
        {"commutator kernels", commutator_structure},
        {"Psi_s and wp", psi_and_wp},
        {"Fourier coefficients", fourier_coefficients},
        {"beta geometry", beta_geometry},
        {"flags", flags},
        {"CLI determinism", cli_determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!o.pass) ++failed;
        std::printf("%s %2zu %s (%.1fs): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, secs,
                    o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
