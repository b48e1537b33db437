#include "heislab/special.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "heislab/errors.hpp"

namespace heislab {

namespace {

using boost::math::quadrature::gauss;
using boost::math::quadrature::gauss_kronrod;
using boost::math::quadrature::tanh_sinh;
constexpr double kPi = std::numbers::pi;

double eta_raw(double t) { return bump((t - 0.625) / 0.375); }

template <class F>
double gk(F f, double a, double b, double tol = 1e-13) {
    return gauss_kronrod<double, 31>::integrate(f, a, b, 12, tol);
}

// Composite 8-point Gauss-Legendre nodes on [a,b] with `panels` panels.
void gl_nodes(double a, double b, std::size_t panels, std::vector<double>& x, std::vector<double>& w) {
    const auto& ab = gauss<double, 8>::abscissa();
    const auto& wt = gauss<double, 8>::weights();
    const double h = (b - a) / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
        double c = a + (static_cast<double>(p) + 0.5) * h, r = 0.5 * h;
        for (std::size_t k = 0; k < ab.size(); ++k) {
            if (ab[k] == 0.0) {
                x.push_back(c);
                w.push_back(r * wt[k]);
                continue;
            }
            x.push_back(c - r * ab[k]);
            w.push_back(r * wt[k]);
            x.push_back(c + r * ab[k]);
            w.push_back(r * wt[k]);
        }
    }
}

}  // namespace

double eta_constant() {
    static const double c = [] {
        tanh_sinh<double> ts;
        double m = ts.integrate([](double t) { return eta_raw(t) / t; }, 0.25, 1.0);
        if (!(m > 0.0) || !std::isfinite(m)) throw ConstructionError("bump normalization failed");
        return 1.0 / m;
    }();
    return c;
}

double eta_profile(double t) { return eta_constant() * eta_raw(t); }

namespace {

constexpr std::size_t kPsiPanels = 192;
constexpr double kPsiLo = 0.25;

double panel_edge(std::size_t p) { return kPsiLo + (1.0 - kPsiLo) * static_cast<double>(p) / kPsiPanels; }

}  // namespace

PsiS::PsiS(double s, QFn q, Kappa kappa) : s_(s), q_(q), kappa_(std::move(kappa)) {
    if (!(s_ > 0.0)) throw DomainError("scale s must be positive");
    cum_a_.assign(kPsiPanels + 1, 0.0);
    cum_b_.assign(kPsiPanels + 1, 0.0);
    for (std::size_t p = kPsiPanels; p-- > 0;) {
        const double lo = panel_edge(p), hi = panel_edge(p + 1);
        const double a = gauss<double, 20>::integrate([&](double t) { return eta_profile(t) * kappa_(s_ * t) / t; }, lo, hi);
        const double b =
            gauss<double, 20>::integrate([&](double t) { return eta_profile(t) * kappa_(s_ * t) / (t * t); }, lo, hi);
        cum_a_[p] = cum_a_[p + 1] + a;
        cum_b_[p] = cum_b_[p + 1] + b;
    }
}

std::pair<double, double> PsiS::tails(double t) const {
    if (t >= 1.0) return {0.0, 0.0};
    const auto p = std::min<std::size_t>(
        kPsiPanels - 1, static_cast<std::size_t>((t - kPsiLo) / (1.0 - kPsiLo) * kPsiPanels));
    const double hi = panel_edge(p + 1);
    double a = cum_a_[p + 1], b = cum_b_[p + 1];
    if (hi > t) {
        a += gauss<double, 20>::integrate([&](double u) { return eta_profile(u) * kappa_(s_ * u) / u; }, t, hi);
        b += gauss<double, 20>::integrate([&](double u) { return eta_profile(u) * kappa_(s_ * u) / (u * u); }, t, hi);
    } else {
        a -= gauss<double, 20>::integrate([&](double u) { return eta_profile(u) * kappa_(s_ * u) / u; }, hi, t);
        b -= gauss<double, 20>::integrate([&](double u) { return eta_profile(u) * kappa_(s_ * u) / (u * u); }, hi, t);
    }
    return {a, b};
}

double PsiS::operator()(double z) const {
    const double az = std::abs(z);
    if (az >= s_) return 0.0;
    const double factor = q_ == QFn::Square ? (z > 0 ? 1.0 : (z < 0 ? -1.0 : 0.0)) : 1.0;
    if (factor == 0.0) return 0.0;
    // int_lo^1 eta(t) kappa(s t) (1 - 2|z|/(s t)) / t dt
    const auto [a, b] = tails(std::max(az / s_, kPsiLo));
    return 0.5 * factor * (a - 2.0 * az / s_ * b);
}

std::vector<std::complex<double>> PsiS::hat(const std::vector<double>& xi) const {
    double xmax = 0.0;
    for (double v : xi) xmax = std::max(xmax, std::abs(v));
    const auto panels = static_cast<std::size_t>(std::max(64.0, std::ceil(4.0 * xmax * s_)));
    std::vector<double> z, w;
    gl_nodes(0.0, 0.25 * s_, panels, z, w);
    gl_nodes(0.25 * s_, s_, panels, z, w);
    std::vector<double> fp(z.size()), fm(z.size());
    parallel_for(z.size(), [&](std::size_t k) {
        fp[k] = (*this)(z[k]);
        fm[k] = (*this)(-z[k]);
    });
    std::vector<std::complex<double>> out(xi.size());
    parallel_for(xi.size(), [&](std::size_t i) {
        double re = 0.0, im = 0.0;
        for (std::size_t k = 0; k < z.size(); ++k) {
            double ph = 2.0 * kPi * z[k] * xi[i];
            double c = std::cos(ph), sn = std::sin(ph);
            re += w[k] * (fp[k] + fm[k]) * c;
            im += w[k] * (fm[k] - fp[k]) * sn;
        }
        out[i] = {re, im};
    });
    return out;
}

std::complex<double> PsiS::hat(double xi) const { return hat(std::vector<double>{xi})[0]; }

PsiCertificate certify(const PsiS& psi) {
    PsiCertificate c;
    const double s = psi.s();
    auto f = [&](double z) { return psi(z); };
    c.mean = gk(f, -s, -0.25 * s) + gk(f, -0.25 * s, 0.0) + gk(f, 0.0, 0.25 * s) + gk(f, 0.25 * s, s);
    c.support_ok = true;
    for (int i = 0; i <= 400; ++i) {
        double z = s * (1.0 + i / 400.0);
        if (psi(z) != 0.0 || psi(-z) != 0.0) c.support_ok = false;
    }
    for (int i = 1; i <= 4000; ++i) {
        double z = s * i / 4000.0;
        double a = psi(z), b = psi(-z);
        c.sup_constant = std::max({c.sup_constant, s * std::abs(a), s * std::abs(b)});
        c.odd_violation = std::max(c.odd_violation, std::abs(a + b));
        c.even_violation = std::max(c.even_violation, std::abs(a - b));
    }
    std::vector<double> xi;
    for (int i = 0; i <= 240; ++i) xi.push_back(std::pow(10.0, -3.0 + 6.0 * i / 240.0) / s);
    auto h = psi.hat(xi);
    for (std::size_t i = 0; i < xi.size(); ++i) {
        double sx = s * xi[i];
        c.fourier_constant = std::max(c.fourier_constant, std::abs(h[i]) / std::min(sx, 1.0 / sx));
    }
    return c;
}

Wp::Wp(double eps) : eps_(eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw DomainError("eps must lie in (0,1)");
    // Quintic in sigma = xi - 1 matching value, slope and curvature at both ends.
    c_[0] = 1.0;
    c_[1] = eps;
    c_[2] = 0.5 * eps * (eps - 1.0);
    const double v = std::pow(2.0, -eps), d1 = -eps * std::pow(2.0, -eps - 1.0),
                 d2 = eps * (eps + 1.0) * std::pow(2.0, -eps - 2.0);
    Eigen::Matrix3d A;
    A << 1, 1, 1, 3, 4, 5, 6, 12, 20;
    Eigen::Vector3d rhs(v - c_[0] - c_[1] - c_[2], d1 - c_[1] - 2.0 * c_[2], d2 - 2.0 * c_[2]);
    Eigen::Vector3d sol = A.fullPivLu().solve(rhs);
    c_[3] = sol(0);
    c_[4] = sol(1);
    c_[5] = sol(2);
}

double Wp::hat(double xi) const {
    const double a = std::abs(xi);
    if (a <= 1.0) return std::pow(a, eps_);
    if (a >= 2.0) return std::pow(a, -eps_);
    const double s = a - 1.0;
    return c_[0] + s * (c_[1] + s * (c_[2] + s * (c_[3] + s * (c_[4] + s * c_[5]))));
}

namespace {

// int_U^inf u^-nu cos u du for large U from the asymptotic series i e^{iU} sum (-i)^k (nu)_k U^{-nu-k}.
double upper_cos_asymptotic(double nu, double U) {
    std::complex<double> term(0.0, std::pow(U, -nu)), sum = 0.0;
    term *= std::polar(1.0, U);
    for (int k = 0; k < 60; ++k) {
        sum += term;
        std::complex<double> next = term * std::complex<double>(0.0, -1.0) * ((nu + k) / U);
        if (std::abs(next) > std::abs(term) || std::abs(next) < 1e-18 * std::abs(sum)) break;
        term = next;
    }
    return sum.real();
}

// int_0^U u^-nu cos u du.
double lower_cos(double nu, double U) {
    tanh_sinh<double> ts;
    const double first = std::min(U, 0.5 * kPi);
    auto f = [nu](double u) { return std::pow(u, -nu) * std::cos(u); };
    double s = ts.integrate(f, 0.0, first);
    for (double a = first; a < U; a += 0.5 * kPi) s += gauss_kronrod<double, 21>::integrate(f, a, std::min(U, a + 0.5 * kPi), 0);
    return s;
}

}  // namespace

double Wp::operator()(double x) const {
    if (x == 0.0) throw SingularityError("wp is singular at 0");
    const double a = 2.0 * kPi * std::abs(x);
    const double half = a > 0.0 ? kPi / a : 1.0;
    // int_0^1 xi^eps cos(a xi)
    tanh_sinh<double> ts;
    auto f1 = [&](double t) { return std::pow(t, eps_) * std::cos(a * t); };
    const double first = std::min(1.0, half);
    double i1 = ts.integrate(f1, 0.0, first);
    for (double l = first; l < 1.0; l += half) i1 += gauss_kronrod<double, 21>::integrate(f1, l, std::min(1.0, l + half), 0);
    // bridge
    auto f2 = [&](double t) { return hat(t) * std::cos(a * t); };
    double i2 = 0.0;
    for (double l = 1.0; l < 2.0; l += half) i2 += gauss_kronrod<double, 21>::integrate(f2, l, std::min(2.0, l + half), 0);
    // int_2^inf xi^-eps cos(a xi) = a^{eps-1} int_{2a}^inf u^-eps cos u du
    const double U = 2.0 * a;
    double upper;
    if (U >= 60.0)
        upper = upper_cos_asymptotic(eps_, U);
    else
        upper = std::tgamma(1.0 - eps_) * std::sin(0.5 * kPi * eps_) - lower_cos(eps_, U);
    const double i3 = std::pow(a, eps_ - 1.0) * upper;
    return 2.0 * (i1 + i2 + i3);
}

double Wp::tail_constant() const {
    return -2.0 * std::tgamma(1.0 + eps_) * std::sin(0.5 * kPi * eps_) / std::pow(2.0 * kPi, 1.0 + eps_);
}

WpCertificate certify(const Wp& wp, double R) {
    WpCertificate c;
    const double eps = wp.eps();
    c.hat_at_one = wp.hat(1.0);
    c.bridge_min = 1.0;
    for (int i = 0; i <= 1000; ++i) c.bridge_min = std::min(c.bridge_min, wp.hat(1.0 + i / 1000.0));
    // x = v^{1/eps} removes the |x|^{eps-1} singularity at 0.
    auto g = [&](double v) { return wp(std::pow(v, 1.0 / eps)) * std::pow(v, 1.0 / eps - 1.0) / eps; };
    double inner = gauss_kronrod<double, 31>::integrate(g, 0.0, 1.0, 15, 1e-12);
    std::vector<double> x, w;
    gl_nodes(1.0, R, static_cast<std::size_t>(std::ceil(4.0 * (R - 1.0))), x, w);
    std::vector<double> vals(x.size());
    parallel_for(x.size(), [&](std::size_t k) { vals[k] = wp(x[k]); });
    double outer = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) outer += w[k] * vals[k];
    const double tail = wp.tail_constant() * std::pow(R, -eps) / eps;
    c.integral = 2.0 * (inner + outer + tail);
    for (int i = 0; i <= 200; ++i) {
        double xx = std::pow(10.0, -3.0 + 5.0 * i / 200.0);
        double env = std::min(std::pow(xx, eps - 1.0), std::pow(xx, -eps - 1.0));
        c.envelope_constant = std::max(c.envelope_constant, std::abs(wp(xx)) / env);
    }
    return c;
}

}  // namespace heislab
