#include "heislab/heis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "heislab/errors.hpp"
#include "heislab/util.hpp"

namespace heislab {

std::ostream& operator<<(std::ostream& os, const HPoint& p) {
    return os << '(' << p.x << ", " << p.y << ", " << p.t << ')';
}

HorizontalSubgroup::HorizontalSubgroup(double theta) {
    if (!std::isfinite(theta)) throw DomainError("theta must be finite");
    double th = std::fmod(theta, std::numbers::pi);
    if (th < 0) th += std::numbers::pi;
    if (th >= std::numbers::pi) th = 0.0;
    theta_ = th;
}

HPoint mul(const HPoint& p, const HPoint& q) {
    return {p.x + q.x, p.y + q.y, p.t + q.t + 0.5 * (p.x * q.y - q.x * p.y)};
}

HPoint inverse(const HPoint& p) { return {-p.x, -p.y, -p.t}; }

HPoint dilate(double lambda, const HPoint& p) {
    if (!(lambda > 0.0)) throw DomainError("dilation factor must be positive");
    return {lambda * p.x, lambda * p.y, lambda * lambda * p.t};
}

double norm(const HPoint& p, NormKind kind) {
    double r2 = p.x * p.x + p.y * p.y;
    if (kind == NormKind::MaxNorm) return std::max(std::sqrt(r2), std::sqrt(std::abs(p.t)));
    return std::sqrt(std::sqrt(r2 * r2 + 16.0 * p.t * p.t));
}

double dist(const HPoint& p, const HPoint& q, NormKind kind) { return norm(mul(inverse(q), p), kind); }

HPoint rotate(double theta, const HPoint& p) {
    if (theta == 0.0) return p;
    double c = std::cos(theta), s = std::sin(theta);
    return {c * p.x - s * p.y, s * p.x + c * p.y, p.t};
}

namespace {
HPoint project0(const HPoint& p, Component target) {
    switch (target) {
        case Component::V: return {p.x, 0.0, 0.0};
        case Component::L: return {0.0, p.y, 0.0};
        case Component::W: return {0.0, p.y, p.t - 0.5 * p.x * p.y};
        case Component::T: return {0.0, 0.0, p.t - 0.5 * p.x * p.y};
    }
    return {};
}
}  // namespace

HPoint project(const HPoint& p, const HorizontalSubgroup& sub, Component target) {
    double th = sub.theta();
    if (th == 0.0) return project0(p, target);
    return rotate(th, project0(rotate(-th, p), target));
}

bool cone_contains(const HPoint& p, const HorizontalSubgroup& sub, double alpha) {
    if (alpha < 0.0) throw DomainError("cone aperture must be non-negative");
    return norm(project(p, sub, Component::V)) <= alpha * norm(project(p, sub, Component::W));
}

namespace {

double rel_error(const HPoint& a, const HPoint& b, double scale) {
    const double s = std::max(scale, 1e-300);
    return std::max({std::abs(a.x - b.x) / s, std::abs(a.y - b.y) / s, std::abs(a.t - b.t) / (s * s)});
}

}  // namespace

GroupAudit group_audit(int samples, std::uint64_t seed) {
    if (samples < 1) throw DomainError("samples must be positive");
    auto rng = make_rng(seed, 11);
    std::uniform_real_distribution<double> u(-1.0, 1.0), e(-2.0, 2.0);
    auto point = [&] {
        const double s = std::pow(10.0, e(rng));
        return HPoint{s * u(rng), s * u(rng), s * s * u(rng)};
    };
    GroupAudit a;
    a.samples = samples;
    a.koranyi_ratio_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
        const HPoint p = point(), q = point(), r = point();
        const double np = norm(p), nq = norm(q), nr = norm(r);
        a.associativity = std::max(a.associativity, rel_error((p * q) * r, p * (q * r), np + nq + nr));
        a.inverse = std::max({a.inverse, rel_error(p * inverse(p), {}, np), rel_error(inverse(p) * p, {}, np)});
        const double lam = std::pow(10.0, e(rng));
        a.dilation = std::max(a.dilation, rel_error(dilate(lam, p * q), dilate(lam, p) * dilate(lam, q), lam * (np + nq)));
        const double d0 = dist(p, q), d1 = dist(r * p, r * q);
        a.left_invariance = std::max(a.left_invariance, std::abs(d1 - d0) / (np + nq + nr));
        if (np > 0.0) {
            const double ratio = norm(p, NormKind::Koranyi) / np;
            a.koranyi_ratio_min = std::min(a.koranyi_ratio_min, ratio);
            a.koranyi_ratio_max = std::max(a.koranyi_ratio_max, ratio);
        }
    }
    return a;
}

}  // namespace heislab
