#include "heislab/fourier.hpp"

#include <cmath>
#include <numbers>

#include "heislab/errors.hpp"

namespace heislab {

std::size_t FourierCoeffTable::index(int n1, int n2) const {
    if (std::abs(n1) > n_max || std::abs(n2) > n_max) throw DomainError("frequency outside the table");
    const int w = 2 * n_max + 1;
    return static_cast<std::size_t>((n1 + n_max) * w + (n2 + n_max));
}

std::vector<std::complex<double>> kappa_n_at(const KernelSpec& spec, double L, QFn q, double u, int n_max, int M) {
    if (u == 0.0) throw SingularityError("kappa_n evaluated at u = 0");
    if (!(L > 0.0) || n_max < 0 || M < 4 * n_max + 4) throw DomainError("invalid Fourier table parameters");
    const double pi = std::numbers::pi;
    const int w = 2 * n_max + 1;
    std::vector<double> th(M), chi(M);
    for (int j = 0; j < M; ++j) {
        th[j] = -pi + 2.0 * pi * j / M;
        chi[j] = plateau(th[j]);
    }
    // e^{-i theta_j n}
    std::vector<std::complex<double>> tw(static_cast<std::size_t>(M) * w);
    for (int j = 0; j < M; ++j)
        for (int n = -n_max; n <= n_max; ++n) tw[static_cast<std::size_t>(j) * w + (n + n_max)] = std::polar(1.0, -th[j] * n);
    const double a1 = 2.0 * L, a2 = 4.0 * L, qu = q_eval(q, u);
    std::vector<std::complex<double>> G1(static_cast<std::size_t>(M) * w, 0.0);
    parallel_for(static_cast<std::size_t>(M), [&](std::size_t j1) {
        if (chi[j1] == 0.0) return;
        for (int j2 = 0; j2 < M; ++j2) {
            if (chi[j2] == 0.0) continue;
            double g = eval_kernel(spec, {u, a1 * th[j1] * u, a2 * th[j2] * qu}) * chi[j1] * chi[j2];
            for (int n = 0; n < w; ++n) G1[j1 * w + n] += g * tw[static_cast<std::size_t>(j2) * w + n];
        }
    });
    std::vector<std::complex<double>> out(static_cast<std::size_t>(w) * w, 0.0);
    const double norm = 1.0 / (static_cast<double>(M) * M);
    for (int n1 = 0; n1 < w; ++n1)
        for (int n2 = 0; n2 < w; ++n2) {
            std::complex<double> s = 0.0;
            for (int j1 = 0; j1 < M; ++j1) s += G1[static_cast<std::size_t>(j1) * w + n2] * tw[static_cast<std::size_t>(j1) * w + n1];
            out[static_cast<std::size_t>(n1) * w + n2] = s * norm;
        }
    return out;
}

FourierCoeffTable fourier_coeffs(const KernelSpec& spec, double L, const std::vector<double>& u_samples, int n_max,
                                 int M) {
    if (u_samples.empty()) throw DomainError("u_samples must be nonempty");
    if (L < 1.0) throw DomainError("L must be at least 1");
    FourierCoeffTable t;
    t.kernel = spec;
    t.L = L;
    t.n_max = n_max;
    t.M = M;
    t.q = spec.horizontally_odd_by_design() ? QFn::Square : QFn::SignedSquare;
    t.u_samples = u_samples;
    t.F = kappa_n_at(spec, L, t.q, 1.0, n_max, M);
    const std::size_t K = t.F.size();
    t.c.assign(K, 0.0);
    for (double u : u_samples) {
        if (u == 0.0) throw SingularityError("u sample at 0");
        const double h = 1e-4 * std::abs(u);
        auto k0 = kappa_n_at(spec, L, t.q, u, n_max, M);
        auto km = kappa_n_at(spec, L, t.q, -u, n_max, M);
        auto kp = kappa_n_at(spec, L, t.q, u + h, n_max, M);
        auto kl = kappa_n_at(spec, L, t.q, u - h, n_max, M);
        for (std::size_t i = 0; i < K; ++i) {
            double d = std::abs((kp[i] - kl[i]) / (2.0 * h));
            t.c[i] = std::max({t.c[i], std::abs(u) * std::abs(k0[i]), u * u * d});
            t.odd_violation = std::max(t.odd_violation, std::abs(u) * std::abs(km[i] + k0[i]));
        }
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0, cnt = 0;
    for (int n1 = -n_max; n1 <= n_max; ++n1)
        for (int n2 = -n_max; n2 <= n_max; ++n2) {
            double cn = t.c[t.index(n1, n2)];
            if (!(cn > 0.0)) continue;
            double x = std::log(1.0 + std::hypot(n1, n2)), y = std::log(cn);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            cnt += 1;
        }
    t.decay_slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    return t;
}

ReconstructionReport reconstruct(const FourierCoeffTable& table, const IlgFunction& f, std::size_t stride) {
    if (f.sub.theta() != 0.0) throw DomainError("reconstruction expects a graph over the x-axis");
    if (stride < 1) throw DomainError("stride must be positive");
    const auto& g = f.grid();
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < g.n; i += stride) idx.push_back(i);
    std::vector<double> res(idx.size(), 0.0), mth(idx.size(), 0.0);
    const int w = 2 * table.n_max + 1;
    parallel_for(idx.size(), [&](std::size_t a) {
        const double wv = g.x(idx[a]);
        const HPoint pw = graph_map(f, wv);
        std::vector<std::complex<double>> e1(w), e2(w);
        for (std::size_t b = 0; b < idx.size(); ++b) {
            if (a == b) continue;
            const double v = g.x(idx[b]);
            HPoint p = inverse(graph_map(f, v)) * pw;
            const double u = wv - v;
            const double th1 = p.y / u / table.scale1(), th2 = p.t / q_eval(table.q, u) / table.scale2();
            mth[a] = std::max({mth[a], std::abs(th1), std::abs(th2)});
            for (int n = -table.n_max; n <= table.n_max; ++n) {
                e1[n + table.n_max] = std::polar(1.0, th1 * n);
                e2[n + table.n_max] = std::polar(1.0, th2 * n);
            }
            std::complex<double> s = 0.0;
            for (int n1 = 0; n1 < w; ++n1)
                for (int n2 = 0; n2 < w; ++n2) s += table.F[static_cast<std::size_t>(n1) * w + n2] * e1[n1] * e2[n2];
            s /= u;
            res[a] = std::max(res[a], std::abs(u) * std::abs(eval_kernel(table.kernel, p) - s));
        }
    });
    ReconstructionReport r;
    for (std::size_t a = 0; a < idx.size(); ++a) {
        r.residual = std::max(r.residual, res[a]);
        r.max_theta = std::max(r.max_theta, mth[a]);
    }
    r.pairs = idx.size() * (idx.size() - 1);
    if (r.max_theta > 1.0) throw DomainError("graph quotients leave the plateau of the cutoff");
    return r;
}

}  // namespace heislab
