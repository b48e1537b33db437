#include "heislab/tame.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "heislab/errors.hpp"

namespace heislab {

namespace {

void check_coupling(const UniformGrid& g, const std::vector<double>& b1, const std::vector<double>& b2,
                    double declared) {
    const double h = g.h;
    double scale = 1.0;
    for (std::size_t i = 0; i < b1.size(); ++i) scale = std::max({scale, std::abs(b1[i]), std::abs(b2[i])});
    const double allowed = h * h * declared + 1e-12 * scale;
    for (std::size_t i = 0; i + 1 < b1.size(); ++i) {
        double dev = std::abs(b2[i + 1] - b2[i] - 0.5 * h * (b1[i] + b1[i + 1]));
        if (dev > allowed)
            throw ConsistencyError("B2 is not the trapezoid integral of B1 at step " + std::to_string(i));
    }
}

}  // namespace

TameMapSampled::TameMapSampled(UniformGrid grid, std::vector<double> b1, std::vector<double> b2,
                               double declared, bool audit)
    : grid_(grid), b1_(std::move(b1)), b2_(std::move(b2)), declared_(declared) {
    if (b1_.size() != grid_.n || b2_.size() != grid_.n) throw DomainError("tame map sample count mismatch");
    if (declared_ < 0.0) throw DomainError("declared tameness must be non-negative");
    if (audit) {
        check_coupling(grid_, b1_, b2_, declared_);
        if (declared_ > 0.0) {
            double m = tameness_constant(*this);
            if (m > declared_ * (1.0 + 1e-6))
                throw ConsistencyError("measured tameness " + std::to_string(m) + " exceeds declared " +
                                       std::to_string(declared_));
        }
    }
}

TameMapSampled TameMapSampled::from_b1(UniformGrid grid, std::vector<double> b1, double b2_0, double declared) {
    SampledFn f(grid, b1);
    auto b2 = f.cumtrapz(b2_0).v;
    return TameMapSampled(grid, std::move(b1), std::move(b2), declared, false);
}

TameMapSampled TameMapSampled::from_linear(const TameLinear& L, UniformGrid grid) {
    std::vector<double> b1(grid.n), b2(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) {
        b1[i] = L.b1(grid.x(i));
        b2[i] = L.b2(grid.x(i));
    }
    return TameMapSampled(grid, std::move(b1), std::move(b2), 0.0, false);
}

double TameMapSampled::eval_b1(double s) const { return SampledFn(grid_, b1_)(s); }

double TameMapSampled::eval_b2(double s) const {
    if (b1_.size() == 1) return b2_[0];
    std::size_t i = grid_.cell(s);
    double u = s - grid_.x(i);
    double slope = (b1_[i + 1] - b1_[i]) / grid_.h;
    return b2_[i] + u * (b1_[i] + 0.5 * slope * u);
}

double TameMapSampled::b_numerator(double x, double y) const {
    // Integral over [y, x] of B1(r) - (B1(x) + B1(y))/2; B1 is linear between
    // breakpoints so the trapezoid rule is exact on each piece.
    if (x == y) return 0.0;
    double sign = 1.0;
    if (x < y) {
        std::swap(x, y);
        sign = -1.0;
    }
    const double fx = eval_b1(x), fy = eval_b1(y);
    const double m = 0.5 * (fx + fy);
    double acc = 0.0;
    double a = y, fa = fy;
    double k = std::floor((y - grid_.x0) / grid_.h) + 1.0;
    for (;; k += 1.0) {
        double node = grid_.x0 + k * grid_.h;
        bool last = node >= x || k > static_cast<double>(grid_.n - 1);
        double b = last ? x : node;
        double fb = last ? fx : eval_b1(b);
        acc += 0.5 * (b - a) * (fa + fb - 2.0 * m);
        if (last) break;
        a = b;
        fa = fb;
    }
    return sign * acc;
}

TameMapSampled TameMapSampled::plus(const TameMapSampled& other) const {
    if (other.grid_.n != grid_.n || other.grid_.h != grid_.h || other.grid_.x0 != grid_.x0)
        throw DomainError("tame maps live on different grids");
    std::vector<double> b1(b1_), b2(b2_);
    for (std::size_t i = 0; i < b1.size(); ++i) {
        b1[i] += other.b1_[i];
        b2[i] += other.b2_[i];
    }
    return TameMapSampled(grid_, std::move(b1), std::move(b2), declared_ + other.declared_, false);
}

TameMapSampled TameMapSampled::plus(const TameLinear& L) const {
    return plus(TameMapSampled::from_linear(L, grid_));
}

void PartialTameData::validate() const {
    if (points.size() != phi1.size() || points.size() != phi2.size())
        throw DomainError("partial data arrays differ in length");
    for (std::size_t i = 0; i + 1 < points.size(); ++i)
        if (!(points[i] < points[i + 1])) throw DomainError("partial data points must be sorted and distinct");
}

double tameness_constant(std::span<const double> x, std::span<const double> b1, std::span<const double> b2) {
    const std::size_t n = x.size();
    if (n < 2) throw DomainError("tameness needs at least two points");
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double d = x[j] - x[i];
            double q = (b2[j] - b2[i]) / d;
            double v = (std::abs(q - b1[i]) + std::abs(q - b1[j])) / std::abs(d);
            best = std::max(best, v);
        }
    }
    return best;
}

double tameness_constant(const TameMapSampled& map) {
    auto xs = map.grid().nodes();
    return tameness_constant(xs, map.b1(), map.b2());
}

double tameness_constant(const PartialTameData& data) {
    data.validate();
    return tameness_constant(data.points, data.phi1, data.phi2);
}

double one_sided_constant(std::span<const double> x, std::span<const double> b1, std::span<const double> b2) {
    const std::size_t n = x.size();
    if (n < 2) throw DomainError("tameness needs at least two points");
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            double d = x[j] - x[i];
            best = std::max(best, std::abs(b2[j] - b2[i] - b1[i] * d) / (d * d));
        }
    }
    return best;
}

double one_sided_constant(const PartialTameData& data) {
    data.validate();
    return one_sided_constant(data.points, data.phi1, data.phi2);
}

double triangle_peak(double a1, double a2, double c1, double c2, double len) {
    double discrepancy = c2 - c1 - 0.5 * (a1 + a2) * len;
    return 2.0 * discrepancy / len;
}

PartialTameData random_partial_tame(Rng& rng, const UniformGrid& g, std::size_t max_points, double L_max) {
    if (max_points < 2 || !(L_max > 0.0)) throw DomainError("need max_points >= 2 and L_max > 0");
    std::uniform_int_distribution<std::size_t> um(2, max_points);
    const std::size_t m = um(rng);
    if (g.n < 3 * m) throw DomainError("grid too coarse for the requested number of points");
    std::vector<std::size_t> pool(g.n - 2 * (m - 1));
    for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(m);
    std::sort(pool.begin(), pool.end());
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    PartialTameData d;
    for (std::size_t k = 0; k < m; ++k) {
        d.points.push_back(g.x(pool[k] + 2 * k));
        if (k == 0) {
            d.phi1.push_back(u(rng));
            d.phi2.push_back(u(rng));
            continue;
        }
        const double len = d.points[k] - d.points[k - 1];
        d.phi1.push_back(d.phi1[k - 1] + u(rng) * len);
        d.phi2.push_back(d.phi2[k - 1] + 0.5 * (d.phi1[k - 1] + d.phi1[k]) * len + u(rng) * len * len);
    }
    const double L = tameness_constant(d);
    if (L > L_max) {
        for (auto& v : d.phi1) v *= L_max / L;
        for (auto& v : d.phi2) v *= L_max / L;
    }
    return d;
}

TameMapSampled extend_tame(const PartialTameData& data, const UniformGrid& g) {
    data.validate();
    const std::size_t m = data.points.size();
    if (m == 0) throw DomainError("extension needs a non-empty E");
    std::vector<std::size_t> nodes(m);
    for (std::size_t k = 0; k < m; ++k) {
        double e = data.points[k];
        if (!g.contains(e, 0.5 * g.h * (1.0 + 1e-9))) throw DomainError("grid does not cover E");
        nodes[k] = g.nearest(e);
        if (k > 0 && nodes[k] <= nodes[k - 1]) throw DomainError("two points of E snap to the same node");
    }

    std::vector<double> b1(g.n), b2(g.n);
    // Constant phi1 on the unbounded parts.
    for (std::size_t i = 0; i <= nodes.front(); ++i) {
        b1[i] = data.phi1.front();
        b2[i] = data.phi2.front() + data.phi1.front() * (g.x(i) - g.x(nodes.front()));
    }
    for (std::size_t i = nodes.back(); i < g.n; ++i) {
        b1[i] = data.phi1.back();
        b2[i] = data.phi2.back() + data.phi1.back() * (g.x(i) - g.x(nodes.back()));
    }

    for (std::size_t k = 0; k + 1 < m; ++k) {
        const std::size_t i = nodes[k], j = nodes[k + 1];
        const double a1 = data.phi1[k], a2 = data.phi1[k + 1];
        const double c1 = data.phi2[k], c2 = data.phi2[k + 1];
        const double x0 = g.x(i), len = g.x(j) - x0;
        const double mid = x0 + 0.5 * len;
        const double discrepancy = c2 - c1 - 0.5 * (a1 + a2) * len;

        // Unit hat on [x_i, x_j] sampled at the nodes; its trapezoid mass fixes the peak.
        std::vector<double> hat(j - i + 1);
        for (std::size_t r = 0; r <= j - i; ++r) {
            double s = g.x(i + r);
            hat[r] = std::max(0.0, 1.0 - std::abs(s - mid) / (0.5 * len));
        }
        double mass = 0.0;
        for (std::size_t r = 0; r + 1 < hat.size(); ++r) mass += 0.5 * g.h * (hat[r] + hat[r + 1]);
        double peak = 0.0;
        if (discrepancy != 0.0) {
            if (mass <= 0.0) throw DomainError("grid too coarse to resolve a gap of E");
            peak = discrepancy / mass;
        }
        for (std::size_t r = 0; r <= j - i; ++r) {
            double s = g.x(i + r);
            b1[i + r] = a1 + (a2 - a1) * (s - x0) / len + peak * hat[r];
        }
        b1[i] = a1;
        b1[j] = a2;
        b2[i] = c1;
        for (std::size_t r = i + 1; r < j; ++r) b2[r] = b2[r - 1] + 0.5 * g.h * (b1[r - 1] + b1[r]);
        b2[j] = c2;
    }
    return TameMapSampled(g, std::move(b1), std::move(b2), 0.0, false);
}

TameMapSampled rescale_tame(const TameMapSampled& map, double r) {
    if (!(r > 0.0)) throw DomainError("rescaling factor must be positive");
    const auto& g = map.grid();
    UniformGrid ng(g.x0 / r, g.h / r, g.n);
    std::vector<double> b1(map.size()), b2(map.size());
    for (std::size_t i = 0; i < map.size(); ++i) {
        b1[i] = map.b1()[i] / r;
        b2[i] = map.b2()[i] / (r * r);
    }
    return TameMapSampled(ng, std::move(b1), std::move(b2), map.declared(), false);
}

IlgInequalities ilg_inequalities(const SampledFn& phi1, const SampledFn& phi2) {
    IlgInequalities r;
    const std::size_t n = phi1.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            double dv = phi1.x(j) - phi1.x(i);
            r.lipschitz = std::max(r.lipschitz, std::abs(phi1[j] - phi1[i]) / std::abs(dv));
            r.quadratic = std::max(r.quadratic, std::abs(phi2[j] - phi2[i] + phi1[i] * dv) / (dv * dv));
        }
    }
    return r;
}

TameMapSampled tame_from_ilg(const SampledFn& phi1, const SampledFn& phi2, double L) {
    if (phi1.size() != phi2.size() || phi1.grid.h != phi2.grid.h || phi1.grid.x0 != phi2.grid.x0)
        throw DomainError("phi1 and phi2 must share a grid");
    if (L < 0.0) throw DomainError("L must be non-negative");
    auto ineq = ilg_inequalities(phi1, phi2);
    const double slack = 1.0 + 1e-6;
    if (ineq.lipschitz > L * slack + 1e-12)
        throw ConsistencyError("phi1 is not L-Lipschitz: " + std::to_string(ineq.lipschitz));
    if (ineq.quadratic > L * L * slack + 1e-12)
        throw ConsistencyError("quadratic inequality fails: " + std::to_string(ineq.quadratic));
    std::vector<double> b2(phi2.v);
    for (double& v : b2) v = -v;
    double declared = 2.0 * L * L;
    TameMapSampled out(phi1.grid, phi1.v, std::move(b2), declared, true);
    return out;
}

}  // namespace heislab
