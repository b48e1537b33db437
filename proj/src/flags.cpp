#include "heislab/flags.hpp"

#include <algorithm>
#include <numbers>
#include <ostream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

#include "heislab/errors.hpp"

namespace heislab {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

FlagSpec::FlagSpec(SampledFn A, double t0, double t1) : A_(std::move(A)), t0_(t0), t1_(t1) {
    if (A_.size() < 2) throw DomainError("flag profile needs at least two samples");
    if (!(t1 > t0)) throw DomainError("flag t-window is empty");
    if (!A_.grid.contains(0.0, 1e-12)) throw DomainError("flag profile grid must contain y = 0");
    prim_ = A_.cumtrapz(0.0);
    const double p0 = primitive(0.0);
    for (auto& v : prim_.v) v -= p0;
    lip_ = A_.lipschitz();
    if (!std::isfinite(lip_)) throw DomainError("flag profile is not Lipschitz on its grid");
}

FlagSpec FlagSpec::flat(double y0, double y1, double t0, double t1, std::size_t n) {
    return FlagSpec(SampledFn(UniformGrid::over(y0, y1, n), std::vector<double>(n, 0.0)), t0, t1);
}

FlagSpec FlagSpec::from(const std::function<double(double)>& A, double y0, double y1, double t0, double t1,
                        std::size_t n) {
    return FlagSpec(SampledFn::from(UniformGrid::over(y0, y1, n), A), t0, t1);
}

bool FlagSpec::in_window(double y, double t) const {
    const double ty = 1e-12 * (1.0 + y1() - y0()), tt = 1e-12 * (1.0 + t1_ - t0_);
    return y >= y0() - ty && y <= y1() + ty && t >= t0_ - tt && t <= t1_ + tt;
}

double FlagSpec::A_prime(double y) const {
    const std::size_t i = A_.grid.cell(y);
    return (A_[i + 1] - A_[i]) / A_.grid.h;
}

double FlagSpec::primitive(double y) const {
    const std::size_t i = A_.grid.cell(y);
    // exact integral of the linear interpolant inside the cell
    return prim_[i] + 0.5 * (y - A_.x(i)) * (A_[i] + A_(y));
}

HPoint flag_param(const FlagSpec& f, double y, double t) {
    if (!f.in_window(y, t)) throw DomainError(fmt::format("({}, {}) outside the flag window", y, t));
    const double a = f.A(y);
    return {a, y, t - 0.5 * y * a + f.primitive(y)};
}

double area_constant() {
    // {max(|y|, sqrt|t|) <= r} has Lebesgue area 4 r^3
    return 0.25;
}

double parabolic_distance(double y, double t, double y2, double t2) {
    return std::max(std::abs(y - y2), std::sqrt(std::abs(t - t2)));
}

FlagBilipschitz flag_bilipschitz_audit(const FlagSpec& f, int pairs, std::uint64_t seed) {
    if (pairs < 1) throw DomainError("pairs must be positive");
    auto rng = make_rng(seed, 61);
    std::uniform_real_distribution<double> uy(f.y0(), f.y1()), ut(f.t0(), f.t1());
    FlagBilipschitz r;
    r.ratios.min = std::numeric_limits<double>::infinity();
    int done = 0;
    while (done < pairs) {
        const double y = uy(rng), t = ut(rng), y2 = uy(rng), t2 = ut(rng);
        const double dp = parabolic_distance(y, t, y2, t2);
        if (dp == 0.0) continue;
        const double q = dist(flag_param(f, y, t), flag_param(f, y2, t2)) / dp;
        r.ratios.min = std::min(r.ratios.min, q);
        r.ratios.max = std::max(r.ratios.max, q);
        ++done;
    }
    r.C = std::max(r.ratios.max, 1.0 / r.ratios.min) / (1.0 + f.lipschitz());
    return r;
}

FlagSamples flag_samples(const FlagSpec& f, std::size_t ny, std::size_t nt) {
    if (ny < 2 || nt < 2) throw DomainError("flag grid needs at least 2 x 2 samples");
    FlagSamples s;
    s.ny = ny;
    s.nt = nt;
    s.dy = (f.y1() - f.y0()) / static_cast<double>(ny);
    s.dt = (f.t1() - f.t0()) / static_cast<double>(nt);
    for (std::size_t i = 0; i < ny; ++i) s.y.push_back(f.y0() + (static_cast<double>(i) + 0.5) * s.dy);
    for (std::size_t j = 0; j < nt; ++j) s.t.push_back(f.t0() + (static_cast<double>(j) + 0.5) * s.dt);
    const double c = area_constant();
    for (std::size_t i = 0; i < ny; ++i) {
        const double a1 = f.A_prime(s.y[i]);
        const double w = c * std::sqrt(1.0 + a1 * a1) * s.dy * s.dt;
        for (std::size_t j = 0; j < nt; ++j) {
            s.points.push_back(flag_param(f, s.y[i], s.t[j]));
            s.weights.push_back(w);
        }
    }
    for (std::size_t i = 0; i < ny; ++i)
        for (std::size_t j = 0; j < nt; ++j) {
            const auto& p = s.points[s.index(i, j)];
            if (i + 1 < ny) s.max_gap = std::max(s.max_gap, dist(p, s.points[s.index(i + 1, j)]));
            if (j + 1 < nt) s.max_gap = std::max(s.max_gap, dist(p, s.points[s.index(i, j + 1)]));
        }
    return s;
}

double dilated_kernel(const KTauSpec& s, const HPoint& p) {
    if (!(s.tau > 0.0)) throw DomainError("tau must be positive");
    return std::pow(s.tau, -3.0) * s.K(dilate(1.0 / s.tau, p));
}

std::complex<double> k_tau_eval(const KTauSpec& s, const HPoint& p, double tol) {
    if (!(s.tau > 0.0)) throw DomainError("tau must be positive");
    const double r2 = p.x * p.x + p.y * p.y;
    if (r2 == 0.0) throw SingularityError("k_tau is singular on the t-axis");
    // With u = t + theta: k = e^{2 pi i t} int e^{-2 pi i u} K_tau(z, u) du, split into even and odd parts in u.
    auto kz = [&](double u) { return dilated_kernel(s, {p.x, p.y, u}); };
    auto ge = [&](double u) { return kz(u) + kz(-u); };
    auto go = [&](double u) { return kz(u) - kz(-u); };
    std::vector<double> bps{0.0};
    if (r2 < 1.0) {
        for (double b = r2 / 16.0; b < 1.0; b *= 2.0) bps.push_back(b);
        bps.push_back(1.0);
    }
    const double T = std::max(64.0, std::ceil(16.0 * r2));
    for (double b = bps.back() + 0.5; b <= T + 1e-12; b += 0.5) bps.push_back(b);
    bps.back() = T;
    double ic = 0.0, is = 0.0, err = 0.0;
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    for (std::size_t k = 0; k + 1 < bps.size(); ++k) {
        double e1 = 0.0, e2 = 0.0;
        ic += GK::integrate([&](double u) { return ge(u) * std::cos(2.0 * kPi * u); }, bps[k], bps[k + 1], 15, tol, &e1);
        is += GK::integrate([&](double u) { return go(u) * std::sin(2.0 * kPi * u); }, bps[k], bps[k + 1], 15, tol, &e2);
        err += e1 + e2;
    }
    // Tails past the integer T by integration by parts.
    const double h = 1e-3 * T;
    const double ge1 = (ge(T + h) - ge(T - h)) / (2.0 * h);
    const double ge3 = (ge(T + 2 * h) - 2 * ge(T + h) + 2 * ge(T - h) - ge(T - 2 * h)) / (2.0 * h * h * h);
    const double go2 = (go(T + h) - 2.0 * go(T) + go(T - h)) / (h * h);
    ic += -ge1 / (4.0 * kPi * kPi) + ge3 / (16.0 * std::pow(kPi, 4));
    is += go(T) / (2.0 * kPi) - go2 / (8.0 * std::pow(kPi, 3));
    const std::complex<double> I(ic, -is);
    if (!std::isfinite(ic) || !std::isfinite(is) || err > 1e3 * tol * (1.0 + std::abs(I)))
        throw NumericError(fmt::format("k_tau quadrature error estimate {} too large", err));
    return std::polar(1.0, 2.0 * kPi * p.t) * I;
}

double k_tau_decay_constant(const KTauSpec& s, int samples, std::uint64_t seed) {
    if (samples < 1) throw DomainError("samples must be positive");
    auto rng = make_rng(seed, 67);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::vector<HPoint> pts(samples);
    for (auto& p : pts) {
        const double r = 0.25 * std::pow(16.0, u01(rng)), a = 2.0 * kPi * u01(rng);
        p = {r * std::cos(a), r * std::sin(a), -4.0 + 8.0 * u01(rng)};
    }
    std::vector<double> v(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) {
        v[i] = std::hypot(pts[i].x, pts[i].y) * std::abs(k_tau_eval(s, pts[i]));
    });
    return *std::max_element(v.begin(), v.end());
}

double koranyi_inv_sq(const HPoint& p) {
    const double r2 = p.x * p.x + p.y * p.y;
    const double n4 = r2 * r2 + 16.0 * p.t * p.t;
    if (n4 == 0.0) throw SingularityError("kernel evaluated at the origin");
    return 1.0 / std::sqrt(n4);
}

double grad_koranyi_inv_sq_x(const HPoint& p) {
    const double r2 = p.x * p.x + p.y * p.y;
    const double n4 = r2 * r2 + 16.0 * p.t * p.t;
    if (n4 == 0.0) throw SingularityError("kernel evaluated at the origin");
    return -(2.0 * r2 * p.x - 8.0 * p.t * p.y) / (n4 * std::sqrt(n4));
}

double grad_koranyi_inv_sq_y(const HPoint& p) {
    const double r2 = p.x * p.x + p.y * p.y;
    const double n4 = r2 * r2 + 16.0 * p.t * p.t;
    if (n4 == 0.0) throw SingularityError("kernel evaluated at the origin");
    return -(2.0 * r2 * p.y + 8.0 * p.t * p.x) / (n4 * std::sqrt(n4));
}

std::pair<double, double> horizontal_gradient_fd(const Kernel3& f, const HPoint& p, double h) {
    const double xf = (f(p * HPoint{h, 0, 0}) - f(p * HPoint{-h, 0, 0})) / (2.0 * h);
    const double yf = (f(p * HPoint{0, h, 0}) - f(p * HPoint{0, -h, 0})) / (2.0 * h);
    return {xf, yf};
}

Kernel3 flag_kernel(const std::string& name) {
    if (name == "GradKorX") return grad_koranyi_inv_sq_x;
    if (name == "GradKorY") return grad_koranyi_inv_sq_y;
    if (name == "Zero") return [](const HPoint&) { return 0.0; };
    throw DomainError("unknown flag kernel '" + name + "'");
}

SioMatrix assemble_flag_sio(const FlagSpec& f, const Kernel3& K, std::size_t ny, std::size_t nt, double eps) {
    if (ny * nt > (std::size_t{1} << 14))
        throw ResourceError(fmt::format("flag grid {}x{} exceeds the dense cap of 2^14 samples", ny, nt));
    const auto s = flag_samples(f, ny, nt);
    if (!(eps > 0.0)) throw DomainError("epsilon must be positive");
    if (eps < 2.0 * s.max_gap)
        throw DiscretizationError(fmt::format("epsilon {} below the guard 2 * gap = {}", eps, 2.0 * s.max_gap));
    const std::size_t n = s.points.size();
    SioMatrix m;
    m.n = n;
    m.weights = s.weights;
    m.epsilon = eps;
    m.truncation = Truncation::Sharp;
    m.re = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    parallel_for(n, [&](std::size_t i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const HPoint q = inverse(s.points[j]) * s.points[i];
            if (norm(q) <= eps) continue;
            m.re(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = K(q) * s.weights[j];
        }
    });
    return m;
}

double sio3_norm(const FlagSpec& f, const Kernel3& K, std::size_t ny, std::size_t nt, double eps) {
    return op_norm(assemble_flag_sio(f, K, ny, nt, eps));
}

void write_flag_csv(std::ostream& os, const std::vector<FlagNormRow>& rows) {
    os << "kernel,flag,epsilon,ny,nt,op_norm\n";
    for (const auto& r : rows)
        os << fmt::format("{},{},{:.12g},{},{},{:.12g}\n", r.kernel, r.flag, r.epsilon, r.ny, r.nt, r.op_norm);
}

}  // namespace heislab
