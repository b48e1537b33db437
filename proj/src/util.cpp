#include "heislab/util.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "heislab/errors.hpp"

namespace heislab {

UniformGrid::UniformGrid(double x0_, double h_, std::size_t n_) : x0(x0_), h(h_), n(n_) {
    if (!(h > 0.0) || n < 1) throw DomainError("grid needs h > 0 and n >= 1");
}

UniformGrid UniformGrid::over(double a, double b, std::size_t n) {
    if (n < 2 || !(b > a)) throw DomainError("grid needs n >= 2 and b > a");
    return UniformGrid(a, (b - a) / static_cast<double>(n - 1), n);
}

bool UniformGrid::contains(double s, double tol) const {
    return s >= front() - tol && s <= back() + tol;
}

std::size_t UniformGrid::nearest(double s) const {
    double r = std::round((s - x0) / h);
    if (r < 0) return 0;
    if (r > static_cast<double>(n - 1)) return n - 1;
    return static_cast<std::size_t>(r);
}

std::size_t UniformGrid::cell(double s) const {
    if (n < 2) return 0;
    double r = std::floor((s - x0) / h);
    if (r < 0) return 0;
    if (r > static_cast<double>(n - 2)) return n - 2;
    return static_cast<std::size_t>(r);
}

std::vector<double> UniformGrid::nodes() const {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = x(i);
    return out;
}

SampledFn::SampledFn(UniformGrid g, std::vector<double> values) : grid(g), v(std::move(values)) {
    if (v.size() != grid.n) throw DomainError("sample count does not match grid");
}

SampledFn SampledFn::from(UniformGrid g, const std::function<double(double)>& f) {
    std::vector<double> vals(g.n);
    for (std::size_t i = 0; i < g.n; ++i) vals[i] = f(g.x(i));
    return SampledFn(g, std::move(vals));
}

double SampledFn::operator()(double s) const {
    if (v.size() == 1) return v[0];
    std::size_t i = grid.cell(s);
    double u = (s - grid.x(i)) / grid.h;
    return v[i] + u * (v[i + 1] - v[i]);
}

std::vector<double> SampledFn::derivative() const {
    std::size_t n = v.size();
    std::vector<double> d(n, 0.0);
    if (n < 2) return d;
    d[0] = (v[1] - v[0]) / grid.h;
    d[n - 1] = (v[n - 1] - v[n - 2]) / grid.h;
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (v[i + 1] - v[i - 1]) / (2.0 * grid.h);
    return d;
}

double SampledFn::lipschitz() const {
    double m = 0.0;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) m = std::max(m, std::abs(v[i + 1] - v[i]) / grid.h);
    return m;
}

SampledFn SampledFn::cumtrapz(double c0) const {
    std::vector<double> out(v.size());
    out[0] = c0;
    for (std::size_t i = 1; i < v.size(); ++i) out[i] = out[i - 1] + 0.5 * grid.h * (v[i - 1] + v[i]);
    return SampledFn(grid, std::move(out));
}

double bump(double x) {
    if (std::abs(x) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - x * x));
}

double bump_derivative(double x) {
    if (std::abs(x) >= 1.0) return 0.0;
    double q = 1.0 - x * x;
    return bump(x) * (-2.0 * x / (q * q));
}

double bump_mass() {
    static const double mass = [] {
        boost::math::quadrature::tanh_sinh<double> ts;
        return ts.integrate([](double x) { return bump(x); }, -1.0, 1.0);
    }();
    return mass;
}

double smooth_step(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double a = std::exp(-1.0 / x);
    double b = std::exp(-1.0 / (1.0 - x));
    return a / (a + b);
}

double plateau(double x) {
    double ax = std::abs(x);
    return 1.0 - smooth_step(ax - 1.0);
}

namespace {
std::atomic<unsigned> g_threads{0};
}

void set_threads(unsigned n) { g_threads = n; }

unsigned threads() {
    unsigned n = g_threads.load();
    if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
    return n;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    unsigned t = static_cast<unsigned>(std::min<std::size_t>(threads(), n));
    if (t <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(t);
    std::vector<std::thread> pool;
    pool.reserve(t);
    for (unsigned w = 0; w < t; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = next++; i < n; i = next++) body(i);
            } catch (...) {
                errors[w] = std::current_exception();
                next = n;
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return Rng(seq);
}

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

namespace {

double cross(double ox, double oy, double ax, double ay, double bx, double by) {
    return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox);
}

// Residual range max(y - a x) - min(y - a x).
std::pair<double, double> residual_range(std::span<const double> x, std::span<const double> y, double a) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double r = y[i] - a * x[i];
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    return {lo, hi};
}

}  // namespace

ChebyshevFit chebyshev_line(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n == 0 || y.size() != n) throw DomainError("chebyshev_line needs matching non-empty samples");
    if (n == 1) return {0.0, y[0], 0.0};
    // Hull edge slopes are the only candidates for the optimal slope.
    std::vector<std::size_t> up, dn;
    for (std::size_t i = 0; i < n; ++i) {
        while (up.size() >= 2 && cross(x[up[up.size() - 2]], y[up[up.size() - 2]], x[up.back()], y[up.back()], x[i], y[i]) >= 0)
            up.pop_back();
        up.push_back(i);
        while (dn.size() >= 2 && cross(x[dn[dn.size() - 2]], y[dn[dn.size() - 2]], x[dn.back()], y[dn.back()], x[i], y[i]) <= 0)
            dn.pop_back();
        dn.push_back(i);
    }
    std::vector<double> slopes;
    for (std::size_t k = 0; k + 1 < up.size(); ++k)
        if (x[up[k + 1]] > x[up[k]]) slopes.push_back((y[up[k + 1]] - y[up[k]]) / (x[up[k + 1]] - x[up[k]]));
    for (std::size_t k = 0; k + 1 < dn.size(); ++k)
        if (x[dn[k + 1]] > x[dn[k]]) slopes.push_back((y[dn[k + 1]] - y[dn[k]]) / (x[dn[k + 1]] - x[dn[k]]));
    if (slopes.empty()) slopes.push_back(0.0);
    std::sort(slopes.begin(), slopes.end());
    auto width = [&](double a) {
        auto [lo, hi] = residual_range(x, y, a);
        return hi - lo;
    };
    // The width is convex in the slope: binary search on the sorted candidates.
    std::size_t lo = 0, hi = slopes.size() - 1;
    while (hi - lo > 2) {
        std::size_t m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
        if (width(slopes[m1]) <= width(slopes[m2]))
            hi = m2;
        else
            lo = m1;
    }
    ChebyshevFit best{0.0, 0.0, std::numeric_limits<double>::infinity()};
    for (std::size_t k = lo; k <= hi; ++k) {
        auto [rlo, rhi] = residual_range(x, y, slopes[k]);
        if (rhi - rlo < best.width) best = {slopes[k], 0.5 * (rlo + rhi), rhi - rlo};
    }
    return best;
}

}  // namespace heislab
