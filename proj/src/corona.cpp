#include "heislab/corona.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include <fmt/format.h>
#include <json.hpp>

#include "heislab/errors.hpp"

namespace heislab {

double DyadicInterval::length() const { return std::ldexp(1.0, -j); }

bool DyadicInterval::contains(const DyadicInterval& q) const {
    if (q.j < j) return false;
    return (q.k >> (q.j - j)) == k;
}

DyadicGrid DyadicGrid::for_samples(const UniformGrid& g, int depth) {
    if (depth < 0 || depth > 24) throw DomainError("depth out of range");
    const std::size_t cells = g.n - 1;
    const std::size_t per_leaf = cells >> depth;
    if (g.n < 2 || (per_leaf << depth) != cells || per_leaf < 4 || per_leaf % 4 != 0)
        throw DomainError("grid must have 4m * 2^depth cells");
    DyadicGrid dg;
    dg.a = g.front();
    dg.b = g.back();
    dg.depth = depth;
    dg.cells = cells;
    return dg;
}

UniformGrid DyadicGrid::grid() const { return UniformGrid::over(a, b, cells + 1); }

std::pair<std::size_t, std::size_t> DyadicGrid::doubled(const DyadicInterval& q) const {
    const std::size_t s = step(q.j), half = s / 2;
    const std::size_t l = lo(q), h = hi(q);
    return {l >= half ? l - half : 0, std::min(cells, h + half)};
}

bool DyadicTree::has(const DyadicInterval& q) const { return std::binary_search(members.begin(), members.end(), q); }

std::vector<DyadicInterval> DyadicTree::minimal() const {
    std::vector<DyadicInterval> out;
    for (const auto& q : members)
        if (!has(q.child(0)) && !has(q.child(1))) out.push_back(q);
    return out;
}

std::string DyadicTree::check_axioms() const {
    if (!has(top)) return "top is not a member";
    for (const auto& q : members) {
        if (!top.contains(q)) return fmt::format("member ({},{}) outside the top", q.j, q.k);
        if (q == top) continue;
        if (!has(q.parent())) return fmt::format("member ({},{}) has no parent in the tree", q.j, q.k);
        DyadicInterval sib{q.j, q.k ^ 1};
        if (!has(sib)) return fmt::format("member ({},{}) entered without its sibling", q.j, q.k);
    }
    return {};
}

std::vector<DyadicInterval> CoronaDecomposition::tops() const {
    std::vector<DyadicInterval> out;
    for (const auto& t : trees) out.push_back(t.tree.top);
    std::sort(out.begin(), out.end());
    return out;
}

int CoronaDecomposition::owner(const DyadicInterval& q) const {
    if (std::binary_search(bad.begin(), bad.end(), q)) return -1;
    for (std::size_t i = 0; i < trees.size(); ++i)
        if (trees[i].tree.has(q)) return static_cast<int>(i);
    return -2;
}

double beta_nodes(const SampledFn& phi, std::size_t lo, std::size_t hi, double radius) {
    std::vector<double> xs, ys;
    xs.reserve(hi - lo + 1);
    ys.reserve(hi - lo + 1);
    for (std::size_t i = lo; i <= hi; ++i) {
        xs.push_back(phi.x(i));
        ys.push_back(phi[i]);
    }
    return chebyshev_line(xs, ys).width / (2.0 * radius);
}

double mollified_slope(const SampledFn& phi, std::size_t c, std::size_t s_nodes) {
    if (s_nodes == 0) throw DomainError("mollifier scale must be positive");
    double num = 0.0, den = 0.0;
    const double xc = phi.x(c), fc = phi[c];
    const double s = static_cast<double>(s_nodes) * phi.grid.h;
    for (std::size_t i = c - s_nodes; i <= c + s_nodes; ++i) {
        double w = bump_derivative((xc - phi.x(i)) / s);
        num += (phi[i] - fc) * w;
        den += (phi.x(i) - xc) * w;
    }
    return num / den;
}

namespace {

struct CubeData {
    std::vector<std::vector<char>> bad;
    std::vector<std::vector<double>> slope;
};

CubeData cube_data(const SampledFn& phi, const DyadicGrid& dg, double eta, const CoronaOptions& opt) {
    CubeData cd;
    cd.bad.resize(dg.depth + 1);
    cd.slope.resize(dg.depth + 1);
    for (int j = 0; j <= dg.depth; ++j) {
        const std::size_t count = std::size_t{1} << j;
        cd.bad[j].resize(count);
        cd.slope[j].resize(count);
        parallel_for(count, [&](std::size_t k) {
            DyadicInterval q{j, static_cast<std::int64_t>(k)};
            auto [l, h] = dg.doubled(q);
            double beta = beta_nodes(phi, l, h, dg.length(q));
            cd.bad[j][k] = beta > opt.beta_factor * eta;
            std::size_t c = dg.lo(q) + dg.step(j) / 2;
            std::size_t s = std::min({dg.step(j), c, dg.cells - c});
            cd.slope[j][k] = mollified_slope(phi, c, s);
        });
    }
    return cd;
}

// Approximant F_T = phi on unstopped nodes, chords across stopped intervals,
// slope a_T outside the top. Returned over [lo, hi].
std::vector<double> approximant(const SampledFn& phi, const DyadicGrid& dg, const TreeEntry& te, double a) {
    const std::size_t tl = dg.lo(te.tree.top), th = dg.hi(te.tree.top);
    std::vector<double> F(te.hi - te.lo + 1);
    for (std::size_t i = tl; i <= th; ++i) F[i - te.lo] = phi[i];
    for (const auto& S : te.stopped) {
        std::size_t l = dg.lo(S), h = dg.hi(S);
        for (std::size_t i = l; i <= h; ++i) {
            double u = static_cast<double>(i - l) / static_cast<double>(h - l);
            F[i - te.lo] = phi[l] + u * (phi[h] - phi[l]);
        }
    }
    for (std::size_t i = te.lo; i < tl; ++i) F[i - te.lo] = phi[tl] + a * (phi.x(i) - phi.x(tl));
    for (std::size_t i = th + 1; i <= te.hi; ++i) F[i - te.lo] = phi[th] + a * (phi.x(i) - phi.x(th));
    return F;
}

CoronaDecomposition build_lipschitz(const SampledFn& phi, double eta, int depth, const CoronaOptions& opt) {
    if (!(eta > 0.0 && eta < 1.0)) throw DomainError("eta must lie in (0,1)");
    if (phi.lipschitz() > 1.0 + 1e-9) throw DomainError("input is not 1-Lipschitz");
    CoronaDecomposition dec;
    dec.eta = eta;
    dec.depth = depth;
    dec.dgrid = DyadicGrid::for_samples(phi.grid, depth);
    const auto& dg = dec.dgrid;
    auto cd = cube_data(phi, dg, eta, opt);

    std::vector<std::vector<int>> owner(depth + 1);
    for (int j = 0; j <= depth; ++j) owner[j].assign(std::size_t{1} << j, -2);

    for (int j = 0; j <= depth; ++j) {
        for (std::size_t k = 0; k < owner[j].size(); ++k) {
            if (owner[j][k] != -2) continue;
            if (cd.bad[j][k]) {
                owner[j][k] = -1;
                dec.bad.push_back({j, static_cast<std::int64_t>(k)});
                continue;
            }
            TreeEntry te;
            te.tree.top = {j, static_cast<std::int64_t>(k)};
            const int id = static_cast<int>(dec.trees.size());
            const double a = cd.slope[j][k];
            std::vector<DyadicInterval> frontier{te.tree.top};
            owner[j][k] = id;
            while (!frontier.empty()) {
                DyadicInterval q = frontier.back();
                frontier.pop_back();
                te.tree.members.push_back(q);
                if (q.j == depth) continue;
                bool grow = true;
                for (int side = 0; side < 2; ++side) {
                    DyadicInterval c = q.child(side);
                    if (cd.bad[c.j][c.k] || std::abs(cd.slope[c.j][c.k] - a) > opt.slope_factor * eta) grow = false;
                }
                if (!grow) {
                    te.stopped.push_back(q);
                    continue;
                }
                for (int side = 0; side < 2; ++side) {
                    DyadicInterval c = q.child(side);
                    owner[c.j][c.k] = id;
                    frontier.push_back(c);
                }
            }
            std::sort(te.tree.members.begin(), te.tree.members.end());
            std::sort(te.stopped.begin(), te.stopped.end());
            auto [l, h] = dg.doubled(te.tree.top);
            te.lo = l;
            te.hi = h;
            auto F = approximant(phi, dg, te, a);
            te.psi1.resize(F.size());
            for (std::size_t i = 0; i < F.size(); ++i) te.psi1[i] = F[i] - a * phi.x(te.lo + i);
            te.linear = {a, 0.0, 0.0};
            dec.trees.push_back(std::move(te));
        }
    }
    std::sort(dec.bad.begin(), dec.bad.end());
    return dec;
}

void check_audit(const CoronaAudit& a) {
    if (!a.ok()) throw ConstructionError("corona audit failed: " + a.failure);
}

}  // namespace

CoronaDecomposition lipschitz_corona(const SampledFn& phi, double eta, int depth, const CoronaOptions& opt) {
    auto dec = build_lipschitz(phi, eta, depth, opt);
    check_audit(audit_corona(dec, phi));
    return dec;
}

CoronaDecomposition tame_corona(const TameMapSampled& B, double eta, int depth, const CoronaOptions& opt) {
    const double N = B.declared();
    if (!(N >= 1.0)) throw DomainError("tame corona needs a declared constant N >= 1");
    if (!(eta > 0.0 && eta < 1.0)) throw DomainError("eta must lie in (0,1)");
    const double delta = std::min(eta * eta / 5.0, eta / 17.0);
    std::vector<double> p1(B.b1().begin(), B.b1().end()), p2(B.b2().begin(), B.b2().end());
    for (double& v : p1) v /= N;
    for (double& v : p2) v /= N;
    SampledFn phi1(B.grid(), p1), phi2(B.grid(), p2);

    auto dec = build_lipschitz(phi1, delta, depth, opt);
    dec.eta = eta;
    dec.tame = true;
    dec.scale = N;
    const auto& dg = dec.dgrid;
    const double h = phi1.grid.h;
    for (auto& te : dec.trees) {
        const double a = te.linear.a;
        // Corrected first component: F + triangles on the middle halves of stopped intervals.
        std::vector<double> F(te.psi1.size());
        for (std::size_t i = 0; i < F.size(); ++i) F[i] = te.psi1[i] + a * phi1.x(te.lo + i);
        for (const auto& S : te.stopped) {
            std::size_t l = dg.lo(S), r = dg.hi(S), q = (r - l) / 4;
            double mismatch = 0.0;
            for (std::size_t i = l; i < r; ++i)
                mismatch += 0.5 * h * ((phi1[i] - F[i - te.lo]) + (phi1[i + 1] - F[i + 1 - te.lo]));
            const double mass = 0.5 * static_cast<double>(2 * q) * h;  // half-length hat, unit peak
            const double peak = mismatch / mass;
            const std::size_t c = l + 2 * q;
            for (std::size_t i = l + q; i <= r - q; ++i) {
                double hat = 1.0 - std::abs(static_cast<double>(i) - static_cast<double>(c)) / static_cast<double>(q);
                F[i - te.lo] += peak * hat;
            }
        }
        const std::size_t tl = dg.lo(te.tree.top);
        const double xT = phi1.x(tl);
        std::vector<double> psi1(F.size()), psi2(F.size());
        for (std::size_t i = 0; i < F.size(); ++i) psi1[i] = F[i] - a * phi1.x(te.lo + i);
        psi2[tl - te.lo] = phi2[tl];
        for (std::size_t i = tl + 1; i <= te.hi; ++i)
            psi2[i - te.lo] = psi2[i - 1 - te.lo] + 0.5 * h * (psi1[i - 1 - te.lo] + psi1[i - te.lo]);
        for (std::size_t i = tl; i-- > te.lo;)
            psi2[i - te.lo] = psi2[i + 1 - te.lo] - 0.5 * h * (psi1[i - te.lo] + psi1[i + 1 - te.lo]);
        for (double& v : psi1) v *= N;
        for (double& v : psi2) v *= N;
        te.psi1 = std::move(psi1);
        te.psi2 = std::move(psi2);
        te.linear = TameLinear{a, -0.5 * a * xT * xT, 0.0}.scaled(N);
    }
    check_audit(audit_corona(dec, B));
    return dec;
}

namespace {

CoronaAudit structural_audit(const CoronaDecomposition& dec) {
    CoronaAudit au;
    au.partition_ok = true;
    au.axioms_ok = true;
    std::map<DyadicInterval, int> count;
    for (const auto& q : dec.bad) count[q]++;
    for (const auto& te : dec.trees) {
        for (const auto& q : te.tree.members) count[q]++;
        auto msg = te.tree.check_axioms();
        if (!msg.empty() && au.axioms_ok) {
            au.axioms_ok = false;
            au.failure = msg;
        }
    }
    for (int j = 0; j <= dec.depth; ++j)
        for (std::int64_t k = 0; k < (std::int64_t{1} << j); ++k) {
            auto it = count.find({j, k});
            if (it == count.end() || it->second != 1) {
                if (au.partition_ok) au.failure = fmt::format("interval ({},{}) is not covered exactly once", j, k);
                au.partition_ok = false;
            }
        }
    if (count.size() != (std::size_t{2} << dec.depth) - 1) au.partition_ok = false;
    au.bad_carleson = max_carleson(dec.bad, dec.depth);
    au.top_carleson = max_carleson(dec.tops(), dec.depth);
    return au;
}

}  // namespace

CoronaAudit audit_corona(const CoronaDecomposition& dec, const SampledFn& phi) {
    auto au = structural_audit(dec);
    const auto& dg = dec.dgrid;
    au.approximation_ok = au.psi_ok = au.slopes_ok = true;
    for (const auto& te : dec.trees) {
        const double a = te.linear.a;
        au.max_linear_slope = std::max(au.max_linear_slope, std::abs(a));
        for (const auto& q : te.tree.members) {
            auto [l, h] = dg.doubled(q);
            double bound = dec.eta * dg.length(q);
            for (std::size_t i = l; i <= h; ++i) {
                double err = std::abs(phi[i] - (te.psi1[i - te.lo] + a * phi.x(i)));
                au.max_approx_ratio = std::max(au.max_approx_ratio, err / bound);
                if (err > bound * (1.0 + 1e-9) && au.approximation_ok) {
                    au.approximation_ok = false;
                    au.failure = fmt::format("approximation fails on ({},{}) at node {}", q.j, q.k, i);
                }
            }
        }
        double lip = 0.0;
        for (std::size_t i = 0; i + 1 < te.psi1.size(); ++i)
            lip = std::max(lip, std::abs(te.psi1[i + 1] - te.psi1[i]) / phi.grid.h);
        au.max_psi_constant = std::max(au.max_psi_constant, lip / dec.eta);
    }
    if (au.max_psi_constant > 1.0 + 1e-9) {
        au.psi_ok = false;
        au.failure = fmt::format("psi Lipschitz ratio {}", au.max_psi_constant);
    }
    if (au.max_linear_slope > 2.0) {
        au.slopes_ok = false;
        au.failure = "linear part steeper than 2";
    }
    return au;
}

CoronaAudit audit_corona(const CoronaDecomposition& dec, const TameMapSampled& B) {
    auto au = structural_audit(dec);
    const auto& dg = dec.dgrid;
    const double N = dec.scale;
    const auto& g = B.grid();
    au.approximation_ok = au.psi_ok = au.slopes_ok = true;
    for (const auto& te : dec.trees) {
        const auto& L = te.linear;
        au.max_linear_slope = std::max(au.max_linear_slope, std::abs(L.a) / N);
        auto e1 = [&](std::size_t i) { return B.b1()[i] - te.psi1[i - te.lo] - L.b1(g.x(i)); };
        auto e2 = [&](std::size_t i) { return B.b2()[i] - te.psi2[i - te.lo] - L.b2(g.x(i)); };
        for (const auto& q : te.tree.members) {
            auto [l, h] = dg.doubled(q);
            double bound = dec.eta * N * dg.length(q);
            for (std::size_t i = l; i <= h; ++i) {
                double dpi = std::max(std::abs(e1(i)), std::sqrt(std::abs(e2(i))));
                au.max_approx_ratio = std::max(au.max_approx_ratio, dpi / bound);
                if (dpi > bound * (1.0 + 1e-9) && au.approximation_ok) {
                    au.approximation_ok = false;
                    au.failure = fmt::format("tame approximation fails on ({},{}) at node {}", q.j, q.k, i);
                }
            }
        }
        // Exactness on leaf nodes at the depth cap and at endpoints of stopped intervals.
        for (const auto& q : te.tree.members) {
            bool leaf = q.j == dec.depth;
            bool stopped = std::binary_search(te.stopped.begin(), te.stopped.end(), q);
            if (!leaf && !stopped) continue;
            std::vector<std::size_t> nodes;
            if (leaf)
                for (std::size_t i = dg.lo(q); i <= dg.hi(q); ++i) nodes.push_back(i);
            else
                nodes = {dg.lo(q), dg.hi(q)};
            for (auto i : nodes) au.max_exactness_error = std::max(au.max_exactness_error, std::abs(e2(i)));
        }
        std::vector<double> xs(te.psi1.size());
        for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = g.x(te.lo + i);
        double tc = tameness_constant(xs, te.psi1, te.psi2);
        au.max_psi_constant = std::max(au.max_psi_constant, tc / (dec.eta * N));
        double lip = 0.0;
        for (std::size_t i = 0; i + 1 < te.psi1.size(); ++i)
            lip = std::max(lip, std::abs(te.psi1[i + 1] - te.psi1[i]) / g.h);
        au.max_corrected_lipschitz = std::max(au.max_corrected_lipschitz, lip / N);
    }
    if (au.max_psi_constant > 1.0 + 1e-9) {
        au.psi_ok = false;
        au.failure = fmt::format("psi tameness ratio {}", au.max_psi_constant);
    }
    if (au.max_linear_slope > 2.0) {
        au.slopes_ok = false;
        au.failure = "linear part steeper than 2N";
    }
    return au;
}

double enlarged_approximation(const CoronaDecomposition& dec, const SampledFn& phi, double factor) {
    const auto& dg = dec.dgrid;
    double worst = 0.0;
    for (const auto& te : dec.trees) {
        const double a = te.linear.a;
        // psi outside its stored range continues with its end values.
        auto psi = [&](std::size_t i) {
            return te.psi1[std::clamp(i, te.lo, te.hi) - te.lo];
        };
        for (const auto& q : te.tree.members) {
            double half = 0.5 * (factor - 1.0) * static_cast<double>(dg.step(q.j));
            double l = std::max(0.0, static_cast<double>(dg.lo(q)) - half);
            double h = std::min(static_cast<double>(dg.cells), static_cast<double>(dg.hi(q)) + half);
            for (auto i = static_cast<std::size_t>(std::ceil(l)); i <= static_cast<std::size_t>(h); ++i) {
                double err = std::abs(phi[i] - (psi(i) + a * phi.x(i)));
                worst = std::max(worst, err / dg.length(q));
            }
        }
    }
    return worst;
}

double carleson_sum(const std::vector<DyadicInterval>& family, const DyadicInterval& q0) {
    double s = 0.0;
    for (const auto& q : family)
        if (q0.contains(q)) s += q.length();
    return s / q0.length();
}

double max_carleson(const std::vector<DyadicInterval>& family, int depth) {
    double m = 0.0;
    // Accumulate bottom-up: total length of family members inside each interval.
    std::vector<std::vector<double>> acc(depth + 1);
    for (int j = 0; j <= depth; ++j) acc[j].assign(std::size_t{1} << j, 0.0);
    for (const auto& q : family)
        if (q.j <= depth) acc[q.j][q.k] += q.length();
    for (int j = depth; j >= 0; --j) {
        for (std::size_t k = 0; k < acc[j].size(); ++k) {
            if (j < depth) acc[j][k] += acc[j + 1][2 * k] + acc[j + 1][2 * k + 1];
            m = std::max(m, acc[j][k] / std::ldexp(1.0, -j));
        }
    }
    return m;
}

TreeRegionData tree_regions(const DyadicTree& tree, const DyadicGrid& dg) {
    auto msg = tree.check_axioms();
    if (!msg.empty()) throw DomainError("invalid tree: " + msg);
    const auto g = dg.grid();
    TreeRegionData out;
    out.tree = tree;
    out.rho = 2.0 * dg.length(tree.top);
    std::vector<double> h(g.n, std::numeric_limits<double>::quiet_NaN()), d(g.n);
    const std::size_t tl = dg.lo(tree.top), th = dg.hi(tree.top);
    for (std::size_t i = 0; i < g.n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& q : tree.members) {
            double lo = dg.x(dg.lo(q)), hi = dg.x(dg.hi(q));
            double x = g.x(i);
            double dd = x < lo ? lo - x : (x > hi ? x - hi : 0.0);
            best = std::min(best, dg.length(q) + dd);
        }
        d[i] = best;
        if (i >= tl && i <= th) {
            double hm = std::numeric_limits<double>::infinity();
            for (const auto& q : tree.members)
                if (i >= dg.lo(q) && (i < dg.hi(q) || (i == dg.hi(q) && i == dg.cells))) hm = std::min(hm, dg.length(q));
            h[i] = hm;
        }
    }
    out.h_fn = SampledFn(g, std::move(h));
    out.d_fn = SampledFn(g, d);

    // Maximal dyadic intervals with inf over their nodes of d at least their length.
    int max_level = 0;
    while ((dg.cells >> max_level) > 1) ++max_level;
    std::vector<DyadicInterval> stack{{0, 0}};
    while (!stack.empty()) {
        auto q = stack.back();
        stack.pop_back();
        std::size_t s = dg.cells >> q.j;
        std::size_t lo = static_cast<std::size_t>(q.k) * s, hi = lo + s;
        double len = (dg.b - dg.a) * q.length();
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t i = lo; i <= hi; ++i) m = std::min(m, d[i]);
        if (m >= len) {
            out.whitney.push_back(q);
            for (std::size_t i = lo; i <= hi; ++i) {
                double viol = std::max(0.0, std::max(len - d[i], d[i] - 4.0 * len)) / len;
                out.whitney_violation = std::max(out.whitney_violation, viol);
            }
        } else if (q.j < max_level) {
            stack.push_back(q.child(1));
            stack.push_back(q.child(0));
        }
    }
    std::sort(out.whitney.begin(), out.whitney.end());
    return out;
}

RotatedGraph reparam_rotated_graph(const SampledFn& phi_T, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    if (!(std::abs(s) <= 2.0 * std::abs(c) + 1e-15) || c <= 0.0)
        throw DomainError("rotation angle must satisfy |tan theta| <= 2 with cos theta > 0");
    RotatedGraph out;
    const std::size_t n = phi_T.size();
    out.z.resize(n);
    out.psi.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double x = phi_T.x(i);
        out.z[i] = x * c - phi_T[i] * s;
        out.psi[i] = phi_T[i] / c;
        if (i > 0 && !(out.z[i] > out.z[i - 1])) throw DomainError("rotated parametrization is not monotone");
    }
    for (std::size_t i = 0; i + 1 < n; ++i)
        out.lipschitz = std::max(out.lipschitz, std::abs(out.psi[i + 1] - out.psi[i]) / (out.z[i + 1] - out.z[i]));
    out.linear = {s / c, 0.0, 0.0};
    return out;
}

std::string corona_to_json(const CoronaDecomposition& dec) {
    using nlohmann::json;
    json j;
    j["eta"] = dec.eta;
    j["depth"] = dec.depth;
    j["kind"] = dec.tame ? "tame" : "lipschitz";
    json bad = json::array();
    for (const auto& q : dec.bad) bad.push_back({q.j, q.k});
    j["bad"] = bad;
    json trees = json::array();
    const auto g = dec.dgrid.grid();
    for (const auto& te : dec.trees) {
        json t;
        t["top"] = {te.tree.top.j, te.tree.top.k};
        json mem = json::array();
        for (const auto& q : te.tree.members) mem.push_back({q.j, q.k});
        t["members"] = mem;
        t["linear"] = {{"a", te.linear.a}, {"b", te.linear.b}, {"c", te.linear.c}};
        json psi;
        psi["grid"] = {{"x0", g.x(te.lo)}, {"h", g.h}, {"n", te.psi1.size()}};
        psi["values"] = te.psi1;
        if (!te.psi2.empty()) psi["values2"] = te.psi2;
        t["psi"] = psi;
        trees.push_back(t);
    }
    j["trees"] = trees;
    return j.dump();
}

}  // namespace heislab
