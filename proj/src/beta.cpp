#include "heislab/beta.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include <fmt/format.h>

#include "heislab/corona.hpp"
#include "heislab/errors.hpp"

namespace heislab {

namespace {

constexpr double kPi = std::numbers::pi;

double width_over(const SampledFn& A, std::size_t lo, std::size_t hi) {
    std::vector<double> xs, ys;
    xs.reserve(hi - lo + 1);
    ys.reserve(hi - lo + 1);
    for (std::size_t i = lo; i <= hi; ++i) {
        xs.push_back(A.x(i));
        ys.push_back(A[i]);
    }
    return chebyshev_line(xs, ys).width;
}

std::vector<std::size_t> stride_subsample(std::size_t lo, std::size_t hi, std::size_t cap) {
    std::vector<std::size_t> out;
    const std::size_t m = hi - lo + 1;
    const std::size_t step = std::max<std::size_t>(1, (m + cap - 1) / cap);
    for (std::size_t i = lo; i <= hi; i += step) out.push_back(i);
    if (out.back() != hi) out.push_back(hi);
    return out;
}

double union_length(std::vector<std::pair<double, double>>& iv) {
    std::sort(iv.begin(), iv.end());
    double len = 0.0, cl = 0.0, cr = -std::numeric_limits<double>::infinity();
    for (auto [a, b] : iv) {
        if (a > cr) {
            if (std::isfinite(cr)) len += cr - cl;
            cl = a;
            cr = b;
        } else {
            cr = std::max(cr, b);
        }
    }
    if (std::isfinite(cr)) len += cr - cl;
    return len;
}

HPoint base_through(const HPoint& p, double theta) {
    HPoint w = rotate(-theta, p);
    return rotate(theta, {0.0, w.y, w.t + 0.5 * w.x * w.y});
}

double max_line_distance(std::span<const HPoint> pts, const HPoint& base, double theta) {
    double m = 0.0;
    for (const auto& p : pts) m = std::max(m, line_distance(p, base, theta));
    return m;
}

// Minimizes f over R^3 from x0 with initial steps `step`.
template <class F>
std::array<double, 3> nelder_mead(F f, std::array<double, 3> x0, std::array<double, 3> step, int max_eval) {
    using V = std::array<double, 3>;
    std::array<V, 4> s;
    std::array<double, 4> fv;
    s[0] = x0;
    for (int i = 0; i < 3; ++i) {
        s[i + 1] = x0;
        s[i + 1][i] += step[i];
    }
    int evals = 0;
    for (int i = 0; i < 4; ++i, ++evals) fv[i] = f(s[i]);
    auto comb = [](const V& a, const V& b, double t) {
        V r;
        for (int i = 0; i < 3; ++i) r[i] = a[i] + t * (b[i] - a[i]);
        return r;
    };
    while (evals < max_eval) {
        std::array<int, 4> ord{0, 1, 2, 3};
        std::sort(ord.begin(), ord.end(), [&](int a, int b) { return fv[a] < fv[b]; });
        const int best = ord[0], worst = ord[3], second = ord[2];
        if (fv[worst] - fv[best] <= 1e-12 * (1.0 + std::abs(fv[best]))) break;
        V cen{0, 0, 0};
        for (int k = 0; k < 3; ++k)
            for (int i = 0; i < 3; ++i) cen[i] += s[ord[k]][i] / 3.0;
        V xr = comb(cen, s[worst], -1.0);
        double fr = f(xr);
        ++evals;
        if (fr < fv[best]) {
            V xe = comb(cen, s[worst], -2.0);
            double fe = f(xe);
            ++evals;
            if (fe < fr) {
                s[worst] = xe;
                fv[worst] = fe;
            } else {
                s[worst] = xr;
                fv[worst] = fr;
            }
        } else if (fr < fv[second]) {
            s[worst] = xr;
            fv[worst] = fr;
        } else {
            V xc = fr < fv[worst] ? comb(cen, xr, 0.5) : comb(cen, s[worst], 0.5);
            double fc = f(xc);
            ++evals;
            if (fc < std::min(fr, fv[worst])) {
                s[worst] = xc;
                fv[worst] = fc;
            } else {
                for (int k = 1; k < 4; ++k) {
                    s[ord[k]] = comb(s[best], s[ord[k]], 0.5);
                    fv[ord[k]] = f(s[ord[k]]);
                    ++evals;
                }
            }
        }
    }
    int b = static_cast<int>(std::min_element(fv.begin(), fv.end()) - fv.begin());
    return s[b];
}

}  // namespace

BetaReport beta_affine(const SampledFn& A, double center, double s) {
    if (!(s > 0.0)) throw DomainError("ball radius must be positive");
    const auto& g = A.grid;
    if (center - s < g.front() - 1e-12 * s || center + s > g.back() + 1e-12 * s)
        throw DomainError("ball leaves the sampled range");
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < A.size(); ++i)
        if (std::abs(A.x(i) - center) <= s * (1.0 + 1e-12)) {
            xs.push_back(A.x(i));
            ys.push_back(A[i]);
        }
    BetaReport r;
    if (xs.size() < 2) {
        r.degenerate = true;
        return r;
    }
    auto fit = chebyshev_line(xs, ys);
    r.value = fit.width / (2.0 * s);
    r.a = fit.a;
    r.b = fit.b;
    return r;
}

double mollified_beta_ratio(const SampledFn& A, std::size_t c, std::size_t s_nodes) {
    if (s_nodes == 0 || c < s_nodes || c + s_nodes >= A.size()) throw DomainError("mollifier window leaves the grid");
    const double slope = mollified_slope(A, c, s_nodes);
    const double s = static_cast<double>(s_nodes) * A.grid.h;
    const double beta = width_over(A, c - s_nodes, c + s_nodes) / (2.0 * s);
    if (beta <= 1e-14) return 0.0;
    double dev = 0.0;
    for (std::size_t i = c - s_nodes; i <= c + s_nodes; ++i)
        dev = std::max(dev, std::abs(A[i] - A[c] - slope * (A.x(i) - A.x(c))));
    return dev / (s * beta);
}

double jones_sum(const SampledFn& A, double a, double b, int levels, double r) {
    if (!(b > a) || levels < 1) throw DomainError("jones_sum needs a nonempty window and levels >= 1");
    if (r <= 0.0) r = 0.5 * (b - a);
    const auto& g = A.grid;
    std::vector<std::size_t> ys;
    for (std::size_t i = 0; i < A.size(); ++i)
        if (A.x(i) >= a - 1e-12 && A.x(i) <= b + 1e-12) ys.push_back(i);
    if (ys.empty()) throw DomainError("window contains no grid nodes");
    double total = 0.0;
    for (int k = 0; k < levels; ++k) {
        const double s = r * std::ldexp(1.0, -k);
        const auto sn = static_cast<std::size_t>(std::llround(s / g.h));
        if (sn < 2) throw DiscretizationError(fmt::format("scale {} is below two grid cells", s));
        std::vector<double> b2(ys.size());
        parallel_for(ys.size(), [&](std::size_t j) {
            const std::size_t i = ys[j];
            const std::size_t lo = i >= sn ? i - sn : 0, hi = std::min(A.size() - 1, i + sn);
            const double beta = width_over(A, lo, hi) / (2.0 * s);
            b2[j] = beta * beta;
        });
        double level = 0.0;
        for (double v : b2) level += v * g.h;
        total += std::numbers::ln2 * level / (b - a);
    }
    return total;
}

double line_distance(const HPoint& q, const HPoint& base, double theta) {
    const HPoint w = rotate(-theta, inverse(base) * q);
    const double x = w.x, y = w.y, t = w.t;
    auto h = [&](double s) { return std::max((x - s) * (x - s) + y * y, std::abs(t - 0.5 * s * y)); };
    double best = h(x);
    if (y != 0.0) best = std::min(best, h(2.0 * t / y));
    auto roots = [&](double p, double c) {
        const double disc = p * p - 4.0 * c;
        if (disc < 0.0) return;
        const double sq = std::sqrt(disc);
        best = std::min({best, h(0.5 * (-p + sq)), h(0.5 * (-p - sq))});
    };
    roots(0.5 * y - 2.0 * x, x * x + y * y - t);
    roots(-0.5 * y - 2.0 * x, x * x + y * y + t);
    return std::sqrt(best);
}

CubeSystem dyadic_cubes_on_curve(const Curve& c, int depth, bool audit, std::uint64_t seed) {
    const std::size_t n = c.size();
    if (depth < 0 || n < 2) throw DomainError("dyadic cubes need depth >= 0 and at least two samples");
    if (c.weights.size() != n) throw DomainError("curve weights do not match its points");
    const double W = c.total_weight();
    // cumulative weight at the midpoint of each sample's share
    std::vector<double> mid(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mid[i] = acc + 0.5 * c.weights[i];
        acc += c.weights[i];
    }
    CubeSystem sys;
    sys.levels.resize(depth + 1);
    for (int j = 0; j <= depth; ++j) {
        const std::size_t cnt = std::size_t{1} << j;
        const double ell = W * std::ldexp(1.0, -j);
        std::size_t i = 0;
        for (std::size_t k = 0; k < cnt; ++k) {
            const double hi_w = (k + 1 == cnt) ? acc + 1.0 : ell * static_cast<double>(k + 1);
            DyadicCube q;
            q.level = j;
            q.index = k;
            q.lo = i;
            while (i < n && mid[i] < hi_w) ++i;
            if (i - q.lo < 2)
                throw DiscretizationError(fmt::format("cube ({},{}) holds fewer than two samples", j, k));
            q.hi = i - 1;
            q.ell = ell;
            const double pm = 0.5 * (c.params[q.lo] + c.params[q.hi]);
            std::size_t ci = q.lo;
            for (std::size_t m = q.lo; m <= q.hi; ++m)
                if (std::abs(c.params[m] - pm) < std::abs(c.params[ci] - pm)) ci = m;
            q.center = c.points[ci];
            for (std::size_t m = q.lo; m <= q.hi; ++m) q.measure += c.weights[m];
            sys.levels[j].push_back(q);
        }
    }
    for (auto& lev : sys.levels) {
        parallel_for(lev.size(), [&](std::size_t k) {
            auto& q = lev[k];
            auto sub = stride_subsample(q.lo, q.hi, 256);
            double d = 0.0;
            for (std::size_t a : sub)
                for (std::size_t b : sub) d = std::max(d, dist(c.points[a], c.points[b]));
            q.diameter = d;
        });
        for (const auto& q : lev) {
            sys.C0 = std::max(sys.C0, q.diameter / q.ell);
            double out = std::numeric_limits<double>::infinity();
            for (std::size_t m = 0; m < n; ++m)
                if (m < q.lo || m > q.hi) out = std::min(out, dist(q.center, c.points[m]));
            if (std::isfinite(out)) sys.c0 = sys.c0 == 0.0 ? out / q.ell : std::min(sys.c0, out / q.ell);
        }
    }
    for (auto& lev : sys.levels)
        for (auto& q : lev) q.ball_radius = 2.0 * sys.C0 * q.ell;
    if (audit) {
        sys.regularity = regularity_audit(c, 200, seed);
        if (sys.regularity > 10.0)
            throw ConstructionError(fmt::format("curve is not regular enough for cubes (C = {})", sys.regularity));
    }
    return sys;
}

BetaReport horizontal_beta(const Curve& c, const DyadicCube& q, int n_theta) {
    if (n_theta < 1) throw DomainError("n_theta must be positive");
    std::vector<HPoint> pts;
    for (const auto& p : c.points)
        if (dist(p, q.center) <= q.ball_radius) pts.push_back(p);
    BetaReport r;
    if (pts.size() < 2 || q.ball_radius <= 0.0) {
        r.degenerate = true;
        return r;
    }
    std::vector<HPoint> coarse;
    for (std::size_t i : stride_subsample(0, pts.size() - 1, 128)) coarse.push_back(pts[i]);
    std::vector<HPoint> cands;
    for (std::size_t i : stride_subsample(0, pts.size() - 1, 8)) cands.push_back(pts[i]);
    cands.push_back(q.center);

    std::vector<double> best_val(n_theta);
    std::vector<HPoint> best_base(n_theta);
    parallel_for(static_cast<std::size_t>(n_theta), [&](std::size_t k) {
        const double th = kPi * static_cast<double>(k) / n_theta;
        double bv = std::numeric_limits<double>::infinity();
        HPoint bb;
        for (const auto& p : cands) {
            HPoint b = base_through(p, th);
            double v = max_line_distance(coarse, b, th);
            if (v < bv) {
                bv = v;
                bb = b;
            }
        }
        best_val[k] = bv;
        best_base[k] = bb;
    });
    const auto k0 = static_cast<std::size_t>(std::min_element(best_val.begin(), best_val.end()) - best_val.begin());
    double th0 = kPi * static_cast<double>(k0) / n_theta;
    HPoint b0 = rotate(-th0, best_base[k0]);
    // Lines through pairs of samples; exact when the points lie on one horizontal line.
    double bv = best_val[k0];
    for (std::size_t a = 0; a < cands.size(); ++a)
        for (std::size_t b = a + 1; b < cands.size(); ++b) {
            const double dx = cands[b].x - cands[a].x, dy = cands[b].y - cands[a].y;
            if (dx == 0.0 && dy == 0.0) continue;
            double th = std::atan2(dy, dx);
            if (th < 0.0) th += kPi;
            const HPoint base = base_through(cands[a], th);
            const double v = max_line_distance(coarse, base, th);
            if (v < bv) {
                bv = v;
                th0 = th;
                b0 = rotate(-th, base);
            }
        }

    std::vector<HPoint> fine;
    for (std::size_t i : stride_subsample(0, pts.size() - 1, 1024)) fine.push_back(pts[i]);
    auto obj = [&](const std::array<double, 3>& v) {
        return max_line_distance(fine, rotate(v[0], {0.0, v[1], v[2]}), v[0]);
    };
    const double R = q.ball_radius;
    auto v = nelder_mead(obj, {th0, b0.y, b0.t}, {kPi / n_theta, 0.05 * R, 0.05 * R * R}, 600);
    double val = obj(v);
    if (obj({th0, b0.y, b0.t}) <= val) v = {th0, b0.y, b0.t};
    r.theta = v[0];
    r.base = rotate(v[0], {0.0, v[1], v[2]});
    r.value = max_line_distance(pts, r.base, r.theta) / R;
    return r;
}

double wgl_count(const Curve& c, const CubeSystem& sys, double eps, int level0, std::size_t index0) {
    const auto& q0 = sys.cube(level0, index0);
    double s = 0.0;
    for (int j = level0; j < static_cast<int>(sys.levels.size()); ++j) {
        const std::size_t span = std::size_t{1} << (j - level0);
        for (std::size_t k = index0 * span; k < (index0 + 1) * span; ++k) {
            const auto& q = sys.cube(j, k);
            if (horizontal_beta(c, q).value > eps) s += q.ell / q0.ell;
        }
    }
    return s;
}

double projected_length(const Curve& c, std::size_t lo, std::size_t hi, double theta) {
    if (hi >= c.size() || lo > hi) throw DomainError("sample range outside the curve");
    const double ct = std::cos(theta), st = std::sin(theta);
    std::vector<std::pair<double, double>> iv;
    for (std::size_t i = lo; i < hi; ++i) {
        double a = c.points[i].x * ct + c.points[i].y * st, b = c.points[i + 1].x * ct + c.points[i + 1].y * st;
        iv.emplace_back(std::min(a, b), std::max(a, b));
    }
    return union_length(iv);
}

GoodCubeReport good_cube_classify(const Curve& c, const DyadicCube& q, const HorizontalSubgroup& sub, double cfrac,
                                  double eps, double alpha, double M) {
    GoodCubeReport r;
    r.proj_ratio = projected_length(c, q.lo, q.hi, sub.theta()) / q.measure;
    r.beta = horizontal_beta(c, q).value;
    r.good = r.proj_ratio >= cfrac && r.beta <= eps;
    std::vector<std::size_t> others;
    for (std::size_t m = 0; m < c.size(); ++m)
        if (dist(c.points[m], q.center) <= q.ball_radius) others.push_back(m);
    if (others.empty()) return r;
    const auto ps = stride_subsample(q.lo, q.hi, 64);
    const auto qs = stride_subsample(0, others.size() - 1, 256);
    for (std::size_t a : ps)
        for (std::size_t bi : qs) {
            const HPoint& p = c.points[a];
            const HPoint& w = c.points[others[bi]];
            if (dist(p, w) < q.ell / M) continue;
            ++r.pairs_checked;
            if (cone_contains(inverse(p) * w, sub, alpha)) ++r.cone_violations;
        }
    return r;
}

ProjectionReport projection_measure(const Curve& c, const HPoint& p0, double r, int n_theta) {
    if (!(r > 0.0) || n_theta < 1) throw DomainError("projection_measure needs r > 0 and n_theta >= 1");
    std::vector<std::pair<std::size_t, std::size_t>> runs;
    std::size_t start = c.size();
    for (std::size_t i = 0; i <= c.size(); ++i) {
        bool in = i < c.size() && dist(c.points[i], p0) <= r;
        if (in && start == c.size()) start = i;
        if (!in && start != c.size()) {
            if (i - 1 > start) runs.emplace_back(start, i - 1);
            start = c.size();
        }
    }
    ProjectionReport best;
    for (int k = 0; k < n_theta; ++k) {
        const double th = kPi * k / n_theta;
        const double ct = std::cos(th), st = std::sin(th);
        std::vector<std::pair<double, double>> iv;
        for (auto [lo, hi] : runs)
            for (std::size_t i = lo; i < hi; ++i) {
                double a = c.points[i].x * ct + c.points[i].y * st, b = c.points[i + 1].x * ct + c.points[i + 1].y * st;
                iv.emplace_back(std::min(a, b), std::max(a, b));
            }
        const double len = union_length(iv);
        if (len > best.measure) {
            best.measure = len;
            best.theta = th;
        }
    }
    best.ratio = best.measure / r;
    return best;
}

void write_cube_csv(std::ostream& os, const std::vector<CubeRow>& rows) {
    os << "level,index,center_x,center_y,center_t,beta,proj_ratio,good\n";
    for (const auto& r : rows)
        os << fmt::format("{},{},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g},{}\n", r.level, r.index, r.center.x,
                          r.center.y, r.center.t, r.beta, r.proj_ratio, r.good ? 1 : 0);
}

}  // namespace heislab
