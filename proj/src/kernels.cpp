#include "heislab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "heislab/errors.hpp"

namespace heislab {

KernelSpec KernelSpec::chousionis_li(double alpha) {
    if (!(alpha >= 1.0)) throw DomainError("ChousionisLi needs alpha >= 1");
    KernelSpec s{KernelTag::ChousionisLi};
    s.alpha = alpha;
    return s;
}

std::string KernelSpec::name() const {
    switch (tag) {
        case KernelTag::RieszX: return "RieszX";
        case KernelTag::RieszY: return "RieszY";
        case KernelTag::RieszT: return "RieszT";
        case KernelTag::GradLogX: return "GradLogX";
        case KernelTag::GradLogY: return "GradLogY";
        case KernelTag::ChousionisLi: {
            char buf[48];
            std::snprintf(buf, sizeof buf, "ChousionisLi(%g)", alpha);
            return buf;
        }
        case KernelTag::SmoothTest: return "SmoothTest";
        case KernelTag::Zero: return "Zero";
    }
    return "?";
}

KernelSpec KernelSpec::parse(const std::string& name) {
    static const std::map<std::string, KernelTag> tags{
        {"RieszX", KernelTag::RieszX},     {"RieszY", KernelTag::RieszY},
        {"RieszT", KernelTag::RieszT},     {"GradLogX", KernelTag::GradLogX},
        {"GradLogY", KernelTag::GradLogY}, {"SmoothTest", KernelTag::SmoothTest},
        {"Zero", KernelTag::Zero}};
    if (auto it = tags.find(name); it != tags.end()) return {it->second};
    if (name.rfind("ChousionisLi", 0) == 0) {
        double a = 4.0;
        auto open = name.find('(');
        if (open != std::string::npos) a = std::stod(name.substr(open + 1));
        return chousionis_li(a);
    }
    throw DomainError("unknown kernel: " + name);
}

bool KernelSpec::horizontally_odd_by_design() const {
    return tag == KernelTag::GradLogX || tag == KernelTag::GradLogY || tag == KernelTag::SmoothTest;
}

double eval_kernel(const KernelSpec& spec, const HPoint& p) {
    const double x = p.x, y = p.y, t = p.t;
    const double r2 = x * x + y * y;
    if (r2 == 0.0 && t == 0.0) throw SingularityError("kernel evaluated at the origin");
    const double n4 = r2 * r2 + 16.0 * t * t;
    const double nk = std::sqrt(std::sqrt(n4));
    switch (spec.tag) {
        case KernelTag::RieszX: return x / (nk * nk);
        case KernelTag::RieszY: return y / (nk * nk);
        case KernelTag::RieszT: return t / (nk * nk * nk);
        case KernelTag::GradLogX: return (x * r2 - 4.0 * t * y) / n4;
        case KernelTag::GradLogY: return (y * r2 + 4.0 * t * x) / n4;
        case KernelTag::ChousionisLi: {
            if (t == 0.0) return 0.0;
            return std::pow(std::sqrt(std::abs(t)) / nk, spec.alpha) / nk;
        }
        case KernelTag::SmoothTest: {
            if (x == 0.0) return 0.0;
            double a = y / (2.0 * x);
            double b = t / (4.0 * x * x);
            return std::exp(-(a * a + b * b) / 0.3) / x;
        }
        case KernelTag::Zero: return 0.0;
    }
    return 0.0;
}

double pair_kernel(const KernelSpec& spec, const HPoint& p, const HPoint& q) {
    if (p == q) throw SingularityError("pair kernel evaluated on the diagonal");
    return eval_kernel(spec, mul(inverse(q), p));
}

PairKernel make_pair_kernel(const KernelSpec& spec) {
    return [spec](const HPoint& p, const HPoint& q) { return pair_kernel(spec, p, q); };
}

HPoint random_point(std::mt19937_64& rng, double rmin, double rmax) {
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> u(std::log(rmin), std::log(rmax));
    HPoint d{0, 0, 0};
    while (d == HPoint{0, 0, 0}) d = {g(rng), g(rng), g(rng)};
    d = dilate(1.0 / norm(d), d);
    return dilate(std::exp(u(rng)), d);
}

SymmetryReport symmetry_check(const KernelSpec& spec, int samples, std::uint64_t seed) {
    if (samples < 1) throw DomainError("symmetry_check needs samples >= 1");
    auto rng = make_rng(seed, 11);
    SymmetryReport r;
    for (int i = 0; i < samples; ++i) {
        HPoint p = random_point(rng, 1e-3, 1e3);
        double k = eval_kernel(spec, p);
        double nrm = norm(p, NormKind::Koranyi);
        double odd = std::abs(eval_kernel(spec, {-p.x, -p.y, -p.t}) + k) * nrm;
        double hodd = std::abs(eval_kernel(spec, {-p.x, -p.y, p.t}) + k) * nrm;
        r.odd_violation = std::max(r.odd_violation, odd);
        r.hodd_violation = std::max(r.hodd_violation, hodd);
    }
    r.odd = r.odd_violation <= 1e-10;
    r.horizontally_odd = r.hodd_violation <= 1e-10;
    r.max_violation = std::min(r.odd_violation, r.hodd_violation);
    return r;
}

namespace {
HPoint unit_direction(std::mt19937_64& rng) { return random_point(rng, 1.0, 1.0); }
}  // namespace

std::vector<SkTriple> sk_triples(int count, std::uint64_t seed, double dmin, double dmax) {
    auto rng = make_rng(seed, 23);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> lr(std::log(dmin), std::log(dmax));
    std::uniform_real_distribution<double> lf(std::log(0.01), std::log(0.5));
    std::vector<SkTriple> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        HPoint p{g(rng), g(rng), g(rng)};
        double r = std::exp(lr(rng));
        double f = std::exp(lf(rng));
        HPoint q = mul(p, dilate(r, unit_direction(rng)));
        HPoint pp = mul(p, dilate(f * r, unit_direction(rng)));
        out.push_back({p, q, pp});
    }
    return out;
}

std::vector<SkTriple> translate(std::span<const SkTriple> triples, const HPoint& z) {
    std::vector<SkTriple> out;
    out.reserve(triples.size());
    for (const auto& s : triples) out.push_back({mul(z, s.p), mul(z, s.q), mul(z, s.pp)});
    return out;
}

std::vector<SkTriple> dilate(std::span<const SkTriple> triples, double r) {
    std::vector<SkTriple> out;
    out.reserve(triples.size());
    for (const auto& s : triples) out.push_back({dilate(r, s.p), dilate(r, s.q), dilate(r, s.pp)});
    return out;
}

SkReport sk_constants(const PairKernel& k, std::span<const SkTriple> triples, double alpha) {
    if (triples.empty()) throw DomainError("sk_constants needs a non-empty sample");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("Holder exponent must lie in (0,1]");
    SkReport r;
    r.holder_exponent = alpha;
    for (const auto& s : triples) {
        double d = dist(s.p, s.q);
        double dp = dist(s.p, s.pp);
        if (dp == 0.0 || dp > d / 2) continue;
        double kpq = k(s.p, s.q);
        double kqp = k(s.q, s.p);
        r.size_constant = std::max({r.size_constant, d * std::abs(kpq), d * std::abs(kqp)});
        double scale = std::pow(d, 1.0 + alpha) / std::pow(dp, alpha);
        double h1 = std::abs(kpq - k(s.pp, s.q));
        double h2 = std::abs(kqp - k(s.q, s.pp));
        r.holder_constant = std::max(r.holder_constant, std::max(h1, h2) * scale);
    }
    return r;
}

SkReport sk_constants(const KernelSpec& spec, std::span<const SkTriple> triples, double alpha) {
    return sk_constants(make_pair_kernel(spec), triples, alpha);
}

}  // namespace heislab
