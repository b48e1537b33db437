#include "heislab/ilg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include <fmt/format.h>

#include "heislab/errors.hpp"

namespace heislab {

IlgFunction::IlgFunction(HorizontalSubgroup s, SampledFn p1, SampledFn p2, double L, bool audit)
    : sub(s), phi1(std::move(p1)), phi2(std::move(p2)), declared_L(L) {
    if (phi1.size() != phi2.size() || phi1.grid.h != phi2.grid.h || phi1.grid.x0 != phi2.grid.x0)
        throw DomainError("phi1 and phi2 must share a grid");
    if (audit) {
        double m = ilg_check(*this);
        if (m > declared_L * (1.0 + 1e-6) + 1e-12)
            throw ConsistencyError(fmt::format("measured intrinsic constant {} exceeds declared {}", m, declared_L));
    }
}

double Curve::total_weight() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
}

double Curve::max_gap() const {
    double g = 0.0;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) g = std::max(g, dist(points[i + 1], points[i]));
    return g;
}

namespace {
HPoint graph_point0(double v, double a1, double a2) { return {v, a1, a2 + 0.5 * a1 * v}; }
}  // namespace

HPoint graph_map(const IlgFunction& f, double v) {
    const auto& g = f.grid();
    if (!g.contains(v, 1e-12 * std::max(1.0, std::abs(v)))) throw DomainError("graph_map outside grid range");
    return rotate(f.sub.theta(), graph_point0(v, f.phi1(v), f.phi2(v)));
}

double ilg_check(const IlgFunction& f) {
    const std::size_t n = f.phi1.size();
    std::vector<HPoint> pts(n);
    for (std::size_t i = 0; i < n; ++i)
        pts[i] = rotate(f.sub.theta(), graph_point0(f.phi1.x(i), f.phi1[i], f.phi2[i]));
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        HPoint inv = inverse(pts[i]);
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            HPoint q = mul(inv, pts[j]);
            double nv = norm(project(q, f.sub, Component::V));
            double nw = norm(project(q, f.sub, Component::W));
            best = std::max(best, nw / nv);
        }
    }
    return best;
}

namespace {

struct Samples {
    std::vector<double> v, w;
};

Samples length_samples(const IlgFunction& f, double a, double b, std::size_t n) {
    const auto& g = f.grid();
    const double tol = 1e-9 * g.h;
    if (!(b > a) || !g.contains(a, tol) || !g.contains(b, tol)) throw DomainError("interval outside the grid");
    if (n == 0) n = static_cast<std::size_t>(std::llround((b - a) / g.h)) + 1;
    if (n < 2) throw DomainError("need at least two samples");
    SampledFn d(g, f.phi1.derivative());
    const double dv = (b - a) / static_cast<double>(n - 1);
    Samples s;
    s.v.resize(n);
    s.w.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double v = (i + 1 == n) ? b : a + static_cast<double>(i) * dv;
        double slope = d(std::clamp(v, g.front(), g.back()));
        s.v[i] = v;
        s.w[i] = std::sqrt(1.0 + slope * slope) * dv * ((i == 0 || i + 1 == n) ? 0.5 : 1.0);
    }
    return s;
}

}  // namespace

double h1_length(const IlgFunction& f, double a, double b, std::size_t n) {
    auto s = length_samples(f, a, b, n);
    double total = 0.0;
    for (double w : s.w) total += w;
    return total;
}

double polyline_length(const IlgFunction& f, double a, double b, std::size_t n) {
    if (n < 2) throw DomainError("need at least two samples");
    double total = 0.0;
    HPoint prev = graph_map(f, a);
    for (std::size_t i = 1; i < n; ++i) {
        double v = (i + 1 == n) ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
        HPoint cur = graph_map(f, v);
        total += dist(cur, prev);
        prev = cur;
    }
    return total;
}

IlgFunction extend_ilg(const PartialTameData& partial, const UniformGrid& grid, HorizontalSubgroup sub) {
    PartialTameData flipped = partial;
    for (double& v : flipped.phi2) v = -v;
    auto B = extend_tame(flipped, grid);
    std::vector<double> p2(B.b2().begin(), B.b2().end());
    for (double& v : p2) v = -v;
    IlgFunction f(sub, SampledFn(grid, std::vector<double>(B.b1().begin(), B.b1().end())),
                  SampledFn(grid, std::move(p2)), 0.0, false);
    f.declared_L = ilg_check(f);
    return f;
}

Curve curve_from_graph(const IlgFunction& f, double a, double b, std::size_t n) {
    if (n < 2) throw DomainError("curve needs n >= 2");
    auto s = length_samples(f, a, b, n);
    Curve c;
    c.kind = CurveKind::IlgGraph;
    c.params = s.v;
    c.weights = s.w;
    c.points.reserve(n);
    for (double v : s.v) c.points.push_back(graph_map(f, v));
    return c;
}

Curve horizontal_line_curve(const HPoint& base, double theta, double a, double b, std::size_t n) {
    if (n < 2) throw DomainError("curve needs n >= 2");
    Curve c;
    c.kind = CurveKind::HorizontalLine;
    const double dv = (b - a) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        double v = a + dv * static_cast<double>(i);
        c.params.push_back(v);
        c.points.push_back(mul(base, HPoint{v * std::cos(theta), v * std::sin(theta), 0.0}));
        c.weights.push_back(dv * ((i == 0 || i + 1 == n) ? 0.5 : 1.0));
    }
    return c;
}

Curve t_axis_curve(double t0, double t1, std::size_t n) {
    if (n < 2) throw DomainError("curve needs n >= 2");
    Curve c;
    c.kind = CurveKind::Polyline;
    const double dt = (t1 - t0) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        double t = t0 + dt * static_cast<double>(i);
        c.params.push_back(t);
        c.points.push_back({0.0, 0.0, t});
        c.weights.push_back(dt * ((i == 0 || i + 1 == n) ? 0.5 : 1.0));
    }
    return c;
}

Curve transform(const Curve& c, const std::function<HPoint(const HPoint&)>& map) {
    Curve out = c;
    for (auto& p : out.points) p = map(p);
    return out;
}

RatioBounds graph_bilipschitz(const IlgFunction& f) {
    const std::size_t n = f.phi1.size();
    std::vector<HPoint> pts(n);
    for (std::size_t i = 0; i < n; ++i) pts[i] = graph_map(f, f.phi1.x(i));
    RatioBounds r{std::numeric_limits<double>::infinity(), 0.0};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double q = dist(pts[i], pts[j]) / std::abs(f.phi1.x(j) - f.phi1.x(i));
            r.min = std::min(r.min, q);
            r.max = std::max(r.max, q);
        }
    return r;
}

double regularity_audit(const Curve& c, int samples, std::uint64_t seed) {
    const std::size_t n = c.size();
    if (n < 8) throw DomainError("curve too short for a regularity audit");
    double diam = 0.0;
    for (std::size_t i = 0; i < n; i += std::max<std::size_t>(1, n / 64))
        for (std::size_t j = 0; j < n; j += std::max<std::size_t>(1, n / 64)) diam = std::max(diam, dist(c.points[i], c.points[j]));
    const double rmin = 10.0 * c.max_gap();
    const double rmax = diam / 4.0;
    if (!(rmax > rmin)) throw DomainError("curve too coarse for a regularity audit");
    auto rng = make_rng(seed, 31);
    std::uniform_int_distribution<std::size_t> pick(n / 4, (3 * n) / 4);
    std::uniform_real_distribution<double> lr(std::log(rmin), std::log(rmax));
    double C = 1.0;
    for (int s = 0; s < samples; ++s) {
        const HPoint& p = c.points[pick(rng)];
        double r = std::exp(lr(rng));
        double mu = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (dist(c.points[i], p) <= r) mu += c.weights[i];
        double ratio = mu / r;
        C = std::max({C, ratio, 1.0 / ratio});
    }
    return C;
}

void write_curve_csv(std::ostream& os, const Curve& c) {
    os << "param,x,y,t,weight\n";
    for (std::size_t i = 0; i < c.size(); ++i)
        os << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", c.params[i], c.points[i].x, c.points[i].y,
                          c.points[i].t, c.weights[i]);
}

IlgFunction ilg_fixture(const std::string& name, double L, double a, double b, std::size_t n) {
    auto g = UniformGrid::over(a, b, n);
    std::function<double(double)> f;
    double declared = std::max(L, std::sqrt(L / 2.0));
    if (name == "zero") {
        f = [](double) { return 0.0; };
        declared = 0.0;
    } else if (name == "line") {
        f = [](double) { return 1.0; };
        declared = 0.0;
    } else if (name == "slope") {
        f = [L](double v) { return L * v; };
    } else if (name == "zigzag") {
        // Triangle wave with slopes +-L and period 1/2.
        f = [L](double v) {
            double u = v * 2.0 - std::floor(v * 2.0);
            return L * 0.5 * (u < 0.5 ? u : 1.0 - u);
        };
    } else if (name == "wave") {
        f = [L](double v) { return L * std::sin(2.0 * std::numbers::pi * v) / (2.0 * std::numbers::pi); };
    } else {
        throw DomainError("unknown ilg fixture: " + name);
    }
    auto p1 = SampledFn::from(g, f);
    auto p2 = p1.cumtrapz(0.0);
    for (double& v : p2.v) v = -v;
    return IlgFunction(HorizontalSubgroup(), std::move(p1), std::move(p2), declared, false);
}

}  // namespace heislab
