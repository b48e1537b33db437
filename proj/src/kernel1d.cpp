#include "heislab/kernel1d.hpp"

#include <cmath>
#include <numbers>

#include "heislab/errors.hpp"

namespace heislab {

Kappa Kappa::smoothed(double eps0) {
    if (!(eps0 > 0.0)) throw DomainError("smoothing scale must be positive");
    Kappa k;
    k.tag = KappaTag::Smoothed;
    k.eps0 = eps0;
    return k;
}

Kappa Kappa::custom(SampledFn positive_half) {
    if (!(positive_half.grid.front() > 0.0)) throw DomainError("custom kappa samples must lie in (0, inf)");
    Kappa k;
    k.tag = KappaTag::Custom;
    k.half = std::move(positive_half);
    return k;
}

double Kappa::operator()(double u) const {
    switch (tag) {
        case KappaTag::Reciprocal:
            if (u == 0.0) throw SingularityError("kappa evaluated at 0");
            return 1.0 / u;
        case KappaTag::Smoothed:
            return u / (u * u + eps0 * eps0);
        case KappaTag::Custom: {
            double a = std::abs(u);
            if (a < half.grid.front() || a > half.grid.back()) return 0.0;
            return u > 0 ? half(a) : -half(a);
        }
    }
    return 0.0;
}

double Kappa::derivative(double u) const {
    switch (tag) {
        case KappaTag::Reciprocal:
            if (u == 0.0) throw SingularityError("kappa derivative evaluated at 0");
            return -1.0 / (u * u);
        case KappaTag::Smoothed: {
            double d = u * u + eps0 * eps0;
            return (eps0 * eps0 - u * u) / (d * d);
        }
        case KappaTag::Custom: {
            double a = std::abs(u);
            if (a < half.grid.front() || a >= half.grid.back()) return 0.0;
            std::size_t i = half.grid.cell(a);
            return (half[i + 1] - half[i]) / half.grid.h;  // even
        }
    }
    return 0.0;
}

KappaCertificate certify_kappa(const Kappa& k, double umin, double umax, int samples) {
    KappaCertificate c;
    const double l0 = std::log(umin), l1 = std::log(umax);
    for (int i = 0; i < samples; ++i) {
        double u = std::exp(l0 + (l1 - l0) * i / (samples - 1));
        for (double s : {u, -u}) {
            c.size = std::max(c.size, std::abs(s * k(s)));
            c.derivative = std::max(c.derivative, s * s * std::abs(k.derivative(s)));
        }
    }
    return c;
}

double q_eval(QFn q, double s) { return q == QFn::Square ? s * s : s * std::abs(s); }

double Kernel1D::a_quotient(double x, double y) const {
    if (!A) return 0.0;
    return ((*A)(x) - (*A)(y)) / (x - y);
}

double Kernel1D::b_quotient(double x, double y) const {
    // A tame-linear B makes the numerator vanish identically.
    if (const auto* s = std::get_if<TameMapSampled>(&B)) return s->b_numerator(x, y) / q_eval(q, x - y);
    return 0.0;
}

double Kernel1D::d_factor(double x, double y) const {
    double f = 1.0;
    if (A0) f *= ((*A0)(x) - (*A0)(y)) / (x - y);
    if (B0) f *= B0->b_numerator(x, y) / ((x - y) * (x - y));
    return f;
}

namespace {
void check_off_diagonal(double x, double y) {
    if (x == y) throw SingularityError("kernel evaluated on the diagonal");
}
}  // namespace

double commutator_eval(const Kernel1D& k, double x, double y) {
    check_off_diagonal(x, y);
    double v = k.kappa(x - y) * k.d_factor(x, y);
    if (k.m > 0) v *= std::pow(k.a_quotient(x, y), k.m);
    if (k.n > 0) v *= std::pow(k.b_quotient(x, y), k.n);
    return v;
}

std::complex<double> exp_kernel_eval(const Kernel1D& k, double x, double y) {
    check_off_diagonal(x, y);
    double theta = k.a_quotient(x, y) + k.b_quotient(x, y);
    double amp = k.kappa(x - y) * k.d_factor(x, y);
    if (theta == 0.0) return amp;
    double ph = 2.0 * std::numbers::pi * theta;
    return {amp * std::cos(ph), amp * std::sin(ph)};
}

std::complex<double> taylor_partial(const Kernel1D& k, double x, double y, int N) {
    check_off_diagonal(x, y);
    if (N < 0) throw DomainError("order must be nonnegative");
    const std::complex<double> z(0.0, 2.0 * std::numbers::pi * (k.a_quotient(x, y) + k.b_quotient(x, y)));
    std::complex<double> term = 1.0, sum = 1.0;
    for (int j = 1; j <= N; ++j) {
        term *= z / static_cast<double>(j);
        sum += term;
    }
    return sum * (k.kappa(x - y) * k.d_factor(x, y));
}

double taylor_remainder_bound(const Kernel1D& k, double x, double y, int N) {
    double theta = std::abs(k.a_quotient(x, y) + k.b_quotient(x, y));
    double amp = std::abs(k.kappa(x - y) * k.d_factor(x, y));
    return amp * std::exp((N + 1) * std::log(2.0 * std::numbers::pi * theta) - std::lgamma(N + 2.0));
}

LineKernel commutator_kernel(const Kernel1D& k) {
    return [k](double x, double y) { return std::complex<double>(commutator_eval(k, x, y)); };
}

LineKernel exp_kernel(const Kernel1D& k) {
    return [k](double x, double y) { return exp_kernel_eval(k, x, y); };
}

std::vector<LineTriple> line_triples(int count, double a, double b, std::uint64_t seed) {
    if (count < 1 || !(b > a)) throw DomainError("line_triples needs count >= 1 and b > a");
    auto rng = make_rng(seed, 53);
    std::uniform_real_distribution<double> ux(a, b);
    std::uniform_real_distribution<double> lf(std::log(0.01), std::log(0.5));
    std::bernoulli_distribution sign(0.5);
    std::vector<LineTriple> out;
    out.reserve(count);
    while (static_cast<int>(out.size()) < count) {
        double x = ux(rng), y = ux(rng);
        if (x == y) continue;
        double xp = x + (sign(rng) ? 1.0 : -1.0) * std::exp(lf(rng)) * std::abs(x - y);
        if (xp < a || xp > b || xp == x) continue;
        out.push_back({x, y, xp});
    }
    return out;
}

StrongReport strong_constants(const LineKernel& k, std::span<const LineTriple> triples, double alpha) {
    if (triples.empty()) throw DomainError("empty triple set");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in (0,1]");
    StrongReport r;
    for (const auto& t : triples) {
        double d = std::abs(t.x - t.y), dp = std::abs(t.x - t.xp);
        r.size = std::max({r.size, d * std::abs(k(t.x, t.y)), d * std::abs(k(t.y, t.x))});
        double scale = std::pow(d, 1.0 + alpha) / std::pow(dp, alpha);
        r.holder = std::max(r.holder, std::abs(k(t.x, t.y) - k(t.xp, t.y)) * scale);
        r.holder = std::max(r.holder, std::abs(k(t.y, t.x) - k(t.y, t.xp)) * scale);
    }
    return r;
}

GrowthFit commutator_growth(const SampledFn& A, const TameMapSampled& B, QFn q, int max_order,
                            std::span<const LineTriple> triples) {
    GrowthFit g;
    for (int order = 0; order <= max_order; ++order) {
        double best = 0.0;
        for (int m = 0; m <= order; ++m) {
            Kernel1D k;
            k.q = q;
            k.A = A;
            k.B = B;
            k.m = m;
            k.n = order - m;
            best = std::max(best, strong_constants(commutator_kernel(k), triples).strong());
        }
        g.strong.push_back(best);
        g.C = std::max(g.C, std::pow(best, 1.0 / (order + 1)));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(g.strong.size());
    for (std::size_t i = 0; i < g.strong.size(); ++i) {
        double x = static_cast<double>(i + 1), y = std::log(g.strong[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    g.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return g;
}

}  // namespace heislab
