#include "heislab/sio.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include <fmt/format.h>

#include "heislab/errors.hpp"

namespace heislab {

LineSamples LineSamples::midpoint(double a, double b, std::size_t n) {
    if (n < 1 || !(b > a)) throw DomainError("midpoint samples need n >= 1 and b > a");
    LineSamples s;
    const double h = (b - a) / static_cast<double>(n);
    s.x.resize(n);
    s.w.assign(n, h);
    for (std::size_t i = 0; i < n; ++i) s.x[i] = a + (static_cast<double>(i) + 0.5) * h;
    return s;
}

double LineSamples::max_gap() const {
    double g = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) g = std::max(g, std::abs(x[i + 1] - x[i]));
    return g;
}

std::complex<double> SioMatrix::operator()(std::size_t i, std::size_t j) const {
    return {re(i, j), is_complex() ? im(i, j) : 0.0};
}

double smooth_cutoff(double d, double eps) { return 1.0 - plateau(2.0 * d / eps); }

namespace {

using DistFn = std::function<double(std::size_t, std::size_t)>;
using EntryFn = std::function<std::complex<double>(std::size_t, std::size_t)>;

void guard(double eps, double gap, Truncation tr) {
    if (!(eps > 0.0)) throw DomainError("epsilon must be positive");
    if (tr == Truncation::Sharp && eps < 2.0 * gap)
        throw DiscretizationError(fmt::format("epsilon {} below the guard 2 * gap = {}", eps, 2.0 * gap));
}

SioMatrix assemble(std::size_t n, const std::vector<double>& w, const DistFn& dist_fn, const EntryFn& k,
                   double eps, Truncation tr) {
    SioMatrix m;
    m.n = n;
    m.weights = w;
    m.epsilon = eps;
    m.truncation = tr;
    m.re = Eigen::MatrixXd::Zero(n, n);
    m.im = Eigen::MatrixXd::Zero(n, n);
    parallel_for(n, [&](std::size_t i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            double d = dist_fn(i, j);
            double cut = tr == Truncation::Sharp ? (d > eps ? 1.0 : 0.0) : smooth_cutoff(d, eps);
            if (cut == 0.0) continue;
            auto v = k(i, j) * (w[j] * cut);
            m.re(i, j) = v.real();
            m.im(i, j) = v.imag();
        }
    });
    if (m.im.isZero(0.0)) m.im.resize(0, 0);
    return m;
}

}  // namespace

SioMatrix assemble_sio(const PairKernel& k, const Curve& c, double eps, Truncation tr) {
    return assemble_sio(ComplexPairKernel([&](const HPoint& p, const HPoint& q) { return std::complex<double>(k(p, q)); }),
                        c, eps, tr);
}

SioMatrix assemble_sio(const ComplexPairKernel& k, const Curve& c, double eps, Truncation tr) {
    if (tr == Truncation::ByD) throw DomainError("use assemble_sio_by_d for D truncation");
    guard(eps, c.max_gap(), tr);
    const auto& p = c.points;
    return assemble(
        c.size(), c.weights, [&](std::size_t i, std::size_t j) { return dist(p[i], p[j]); },
        [&](std::size_t i, std::size_t j) { return k(p[i], p[j]); }, eps, tr);
}

SioMatrix assemble_sio(const LineKernel& k, const LineSamples& s, double eps, Truncation tr) {
    if (tr == Truncation::ByD) throw DomainError("use assemble_sio_by_d for D truncation");
    guard(eps, s.max_gap(), tr);
    const auto& x = s.x;
    return assemble(
        s.size(), s.w, [&](std::size_t i, std::size_t j) { return std::abs(x[i] - x[j]); },
        [&](std::size_t i, std::size_t j) { return k(x[i], x[j]); }, eps, tr);
}

SioMatrix assemble_sio_by_d(const LineKernel& k, const LineSamples& s, const TreeRegionData& reg,
                            const DyadicGrid& dg) {
    const double qa = dg.x(dg.lo(reg.tree.top)), qb = dg.x(dg.hi(reg.tree.top));
    const std::size_t n = s.size();
    SioMatrix m;
    m.n = n;
    m.weights = s.w;
    m.truncation = Truncation::ByD;
    m.re = Eigen::MatrixXd::Zero(n, n);
    m.im = Eigen::MatrixXd::Zero(n, n);
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = reg.d_fn(s.x[i]);
    parallel_for(n, [&](std::size_t i) {
        if (s.x[i] < qa || s.x[i] > qb) return;
        for (std::size_t j = 0; j < n; ++j) {
            double r = std::abs(s.x[i] - s.x[j]);
            if (i == j || r < 0.25 * (d[i] + d[j]) || r > reg.rho) continue;
            auto v = k(s.x[i], s.x[j]) * s.w[j];
            m.re(i, j) = v.real();
            m.im(i, j) = v.imag();
        }
    });
    if (m.im.isZero(0.0)) m.im.resize(0, 0);
    return m;
}

namespace {

void scaled(const SioMatrix& m, bool weighted, Eigen::MatrixXd& R, Eigen::MatrixXd& I) {
    R = m.re;
    if (m.is_complex()) I = m.im;
    if (!weighted) return;
    Eigen::VectorXd sw(m.n), isw(m.n);
    for (std::size_t i = 0; i < m.n; ++i) {
        if (!(m.weights[i] > 0.0)) throw DomainError("weights must be positive for the weighted norm");
        sw(i) = std::sqrt(m.weights[i]);
        isw(i) = 1.0 / sw(i);
    }
    R = sw.asDiagonal() * R * isw.asDiagonal();
    if (m.is_complex()) I = sw.asDiagonal() * I * isw.asDiagonal();
}

}  // namespace

namespace {

Eigen::VectorXd start_vector(Eigen::Index n) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = 1.0 + 0.5 * std::cos(0.7 * static_cast<double>(i) + 0.3);
    return v.normalized();
}

// Largest eigenvalue of the Gram matrix A^* A by Lanczos with full reorthogonalization.
template <class Mat>
double lanczos_top(const Mat& A, double tol, int max_iter) {
    using Vec = Eigen::Matrix<typename Mat::Scalar, Eigen::Dynamic, 1>;
    const Eigen::Index n = A.cols();
    const Eigen::Index kmax = std::min<Eigen::Index>(n, std::max(1, max_iter));
    Eigen::Matrix<typename Mat::Scalar, Eigen::Dynamic, Eigen::Dynamic> Q(n, kmax);
    Q.col(0) = start_vector(n).template cast<typename Mat::Scalar>();
    std::vector<double> alpha, beta;
    double theta = 0.0, res = 0.0;
    for (Eigen::Index k = 0; k < kmax; ++k) {
        Vec w = A.adjoint() * (A * Q.col(k));
        alpha.push_back(std::real(Q.col(k).dot(w)));
        for (int pass = 0; pass < 2; ++pass) w -= Q.leftCols(k + 1) * (Q.leftCols(k + 1).adjoint() * w);
        const double b = w.norm();

        Eigen::VectorXd d = Eigen::Map<Eigen::VectorXd>(alpha.data(), k + 1);
        Eigen::VectorXd e = Eigen::VectorXd::Zero(std::max<Eigen::Index>(k, 1));
        for (Eigen::Index i = 0; i < k; ++i) e(i) = beta[i];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
        es.computeFromTridiagonal(d, e.head(k), Eigen::ComputeEigenvectors);
        theta = es.eigenvalues()(k);
        res = b * std::abs(es.eigenvectors()(k, k));
        if (theta <= 0.0) return 0.0;
        if (res <= tol * theta || b <= 1e-14 * theta || k + 1 == n) return std::sqrt(theta);
        beta.push_back(b);
        if (k + 1 < kmax) Q.col(k + 1) = w / b;
    }
    throw IterationError("Lanczos iteration did not converge", res / theta);
}

}  // namespace

double op_norm(const SioMatrix& m, bool weighted, double tol, int max_iter) {
    if (m.n == 0) throw DomainError("empty matrix");
    Eigen::MatrixXd R, I;
    scaled(m, weighted, R, I);
    if (!m.is_complex()) return lanczos_top(R, tol, std::min(max_iter, 2000));
    Eigen::MatrixXcd C(R.rows(), R.cols());
    C.real() = R;
    C.imag() = I;
    return lanczos_top(C, tol, std::min(max_iter, 2000));
}

double op_norm_power(const SioMatrix& m, bool weighted, double tol, int max_iter) {
    if (m.n == 0) throw DomainError("empty matrix");
    Eigen::MatrixXd R, I;
    scaled(m, weighted, R, I);
    const bool cx = m.is_complex();
    const auto n = static_cast<Eigen::Index>(m.n);
    Eigen::VectorXd vr = start_vector(n), vi = Eigen::VectorXd::Zero(n);
    double lam = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        Eigen::VectorXd zr, zi;
        if (cx) {
            Eigen::VectorXd yr = R * vr - I * vi, yi = R * vi + I * vr;
            zr = R.transpose() * yr + I.transpose() * yi;
            zi = R.transpose() * yi - I.transpose() * yr;
        } else {
            zr = R.transpose() * (R * vr);
            zi = Eigen::VectorXd::Zero(n);
        }
        lam = vr.dot(zr) + vi.dot(zi);
        const double nz = std::sqrt(zr.squaredNorm() + zi.squaredNorm());
        if (nz == 0.0) return 0.0;
        // Residual of the Rayleigh pair; a small change in lam alone can stall far from the top.
        const double res = std::sqrt((zr - lam * vr).squaredNorm() + (zi - lam * vi).squaredNorm());
        if (res <= tol * lam) return std::sqrt(lam);
        vr = zr / nz;
        vi = zi / nz;
    }
    throw IterationError("power iteration did not converge", lam);
}

double op_norm_dense(const SioMatrix& m, bool weighted) {
    Eigen::MatrixXd R, I;
    scaled(m, weighted, R, I);
    if (!m.is_complex()) return Eigen::BDCSVD<Eigen::MatrixXd>(R).singularValues()(0);
    Eigen::MatrixXcd C(R.rows(), R.cols());
    C.real() = R;
    C.imag() = I;
    return Eigen::BDCSVD<Eigen::MatrixXcd>(C).singularValues()(0);
}

std::vector<std::complex<double>> apply_sio(const SioMatrix& m, const std::vector<std::complex<double>>& f) {
    if (f.size() != m.n) throw DomainError("vector length does not match the matrix");
    std::vector<std::complex<double>> y(m.n);
    for (std::size_t i = 0; i < m.n; ++i) {
        std::complex<double> s = 0.0;
        for (std::size_t j = 0; j < m.n; ++j) s += m(i, j) * f[j];
        y[i] = s;
    }
    return y;
}

namespace {

std::vector<double> maximal_generic(std::size_t n, const std::vector<double>& w, const DistFn& dist_fn,
                                    const EntryFn& k, const std::vector<double>& f, std::vector<double> eps_grid,
                                    double gap) {
    if (eps_grid.empty()) throw DomainError("eps_grid must be nonempty");
    if (f.size() != n) throw DomainError("f does not match the samples");
    for (double e : eps_grid) guard(e, gap, Truncation::Sharp);
    std::sort(eps_grid.begin(), eps_grid.end(), std::greater<>());
    std::vector<double> out(n);
    parallel_for(n, [&](std::size_t i) {
        std::vector<std::pair<double, std::complex<double>>> terms;
        terms.reserve(n);
        for (std::size_t j = 0; j < n; ++j)
            if (j != i && f[j] != 0.0) terms.emplace_back(dist_fn(i, j), k(i, j) * (w[j] * f[j]));
        std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
        std::complex<double> acc = 0.0;
        std::size_t pos = 0;
        double best = 0.0;
        for (double e : eps_grid) {
            while (pos < terms.size() && terms[pos].first > e) acc += terms[pos++].second;
            best = std::max(best, std::abs(acc));
        }
        out[i] = best;
    });
    return out;
}

}  // namespace

std::vector<double> maximal_sio(const PairKernel& k, const Curve& c, const std::vector<double>& f,
                                const std::vector<double>& eps_grid) {
    const auto& p = c.points;
    return maximal_generic(
        c.size(), c.weights, [&](std::size_t i, std::size_t j) { return dist(p[i], p[j]); },
        [&](std::size_t i, std::size_t j) { return std::complex<double>(k(p[i], p[j])); }, f, eps_grid, c.max_gap());
}

std::vector<double> maximal_sio(const LineKernel& k, const LineSamples& s, const std::vector<double>& f,
                                const std::vector<double>& eps_grid) {
    const auto& x = s.x;
    return maximal_generic(
        s.size(), s.w, [&](std::size_t i, std::size_t j) { return std::abs(x[i] - x[j]); },
        [&](std::size_t i, std::size_t j) { return k(x[i], x[j]); }, f, eps_grid, s.max_gap());
}

std::vector<double> hardy_littlewood(const LineSamples& s, const std::vector<double>& f) {
    const std::size_t n = s.size();
    if (f.size() != n) throw DomainError("f does not match the samples");
    std::vector<double> out(n);
    parallel_for(n, [&](std::size_t i) {
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            double da = std::abs(s.x[a] - s.x[i]), db = std::abs(s.x[b] - s.x[i]);
            return da < db || (da == db && a < b);
        });
        double mass = 0.0, wsum = 0.0, best = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t j = idx[k];
            mass += s.w[j] * std::abs(f[j]);
            wsum += s.w[j];
            bool last = k + 1 == n || std::abs(s.x[idx[k + 1]] - s.x[i]) > std::abs(s.x[j] - s.x[i]);
            if (last) best = std::max(best, mass / wsum);
        }
        out[i] = best;
    });
    return out;
}

CotlarReport cotlar_audit(const LineKernel& k, const LineSamples& s, const std::vector<double>& f,
                          const std::vector<double>& eps_grid) {
    if (eps_grid.empty()) throw DomainError("eps_grid must be nonempty");
    const double emin = *std::min_element(eps_grid.begin(), eps_grid.end());
    auto m = assemble_sio(k, s, emin);
    CotlarReport rep;
    rep.norm = op_norm(m);
    std::vector<std::complex<double>> fc(f.begin(), f.end());
    auto tf = apply_sio(m, fc);
    std::vector<double> atf(tf.size());
    for (std::size_t i = 0; i < tf.size(); ++i) atf[i] = std::abs(tf[i]);
    auto mtf = hardy_littlewood(s, atf);
    auto mf = hardy_littlewood(s, f);
    auto tstar = maximal_sio(k, s, f, eps_grid);
    for (std::size_t i = 0; i < s.size(); ++i) {
        double den = mtf[i] + rep.norm * mf[i];
        if (den > 0.0) rep.constant = std::max(rep.constant, tstar[i] / den);
    }
    return rep;
}

namespace {

double test_bump(double d, double r) { return 1.0 - smooth_step((d - 2.0 * r) / r); }

T1Report t1_generic(std::size_t n, const std::vector<double>& w, const std::vector<double>& dist0,
                    const DistFn& dist_fn, const EntryFn& k, double r, double eps) {
    std::vector<double> b(n);
    for (std::size_t j = 0; j < n; ++j) b[j] = test_bump(dist0[j], r);
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < n; ++i)
        if (dist0[i] < r) rows.push_back(i);
    if (rows.empty()) throw DomainError("no samples inside the test ball");
    std::vector<double> fw(rows.size()), tr(rows.size());
    parallel_for(rows.size(), [&](std::size_t q) {
        std::size_t i = rows[q];
        std::complex<double> a = 0.0, c = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i || b[j] == 0.0) continue;
            double cut = smooth_cutoff(dist_fn(i, j), eps);
            if (cut == 0.0) continue;
            a += k(i, j) * (cut * b[j] * w[j]);
            c += k(j, i) * (cut * b[j] * w[j]);
        }
        fw[q] = std::abs(a);
        tr[q] = std::abs(c);
    });
    T1Report rep;
    double wsum = 0.0;
    for (std::size_t q = 0; q < rows.size(); ++q) {
        double wi = w[rows[q]];
        rep.forward += wi * fw[q];
        rep.transpose += wi * tr[q];
        wsum += wi;
    }
    rep.forward /= wsum;
    rep.transpose /= wsum;
    return rep;
}

}  // namespace

T1Report t1_test(const LineKernel& k, const LineSamples& s, double x0, double r, double eps) {
    if (!(r > 0.0 && eps > 0.0)) throw DomainError("radius and epsilon must be positive");
    if (s.x.front() > x0 - 3.0 * r || s.x.back() < x0 + 3.0 * r) throw DomainError("window does not contain 3B0");
    std::vector<double> d0(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) d0[i] = std::abs(s.x[i] - x0);
    const auto& x = s.x;
    return t1_generic(
        s.size(), s.w, d0, [&](std::size_t i, std::size_t j) { return std::abs(x[i] - x[j]); },
        [&](std::size_t i, std::size_t j) { return k(x[i], x[j]); }, r, eps);
}

T1Report t1_test(const PairKernel& k, const Curve& c, const HPoint& p0, double r, double eps) {
    if (!(r > 0.0 && eps > 0.0)) throw DomainError("radius and epsilon must be positive");
    std::vector<double> d0(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) d0[i] = dist(c.points[i], p0);
    if (dist(c.points.front(), p0) < 3.0 * r || dist(c.points.back(), p0) < 3.0 * r)
        throw DomainError("curve does not leave 3B0");
    const auto& p = c.points;
    return t1_generic(
        c.size(), c.weights, d0, [&](std::size_t i, std::size_t j) { return dist(p[i], p[j]); },
        [&](std::size_t i, std::size_t j) { return std::complex<double>(k(p[i], p[j])); }, r, eps);
}

AnnulusReport annulus_check(const TreeRegionData& reg, const DyadicGrid& dg, int trials, std::uint64_t seed) {
    const auto g = dg.grid();
    const std::size_t n = g.n;
    auto cut = [&](std::size_t x, std::size_t y) {
        double r = std::abs(g.x(x) - g.x(y));
        return r >= 0.25 * (reg.d_fn[x] + reg.d_fn[y]) && r <= reg.rho;
    };
    auto rng = make_rng(seed, 41);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::uniform_real_distribution<double> lr(std::log(2.0 * g.h), std::log((dg.b - dg.a) / 8.0));
    AnnulusReport rep;
    rep.trials = trials;
    for (int t = 0; t < trials; ++t) {
        std::size_t x0 = pick(rng);
        double r = std::exp(lr(rng));
        auto span = static_cast<std::size_t>(r / g.h);
        std::uniform_int_distribution<std::size_t> near(x0 >= span ? x0 - span : 0, std::min(n - 1, x0 + span));
        std::size_t x = near(rng);
        std::vector<double> ds;
        for (std::size_t y = 0; y < n; ++y) {
            double d = std::abs(g.x(y) - g.x(x0));
            if (d < 2.0 * r || d == 0.0) continue;
            if (cut(x, y) != cut(x0, y)) ds.push_back(d);
        }
        std::sort(ds.begin(), ds.end());
        int count = 0;
        for (std::size_t i = 0; i < ds.size();) {
            std::size_t j = i;
            while (j + 1 < ds.size() && ds[j + 1] <= 100.0 * ds[i]) ++j;
            rep.max_ratio_used = std::max(rep.max_ratio_used, ds[j] / ds[i]);
            ++count;
            i = j + 1;
        }
        rep.max_annuli = std::max(rep.max_annuli, count);
    }
    return rep;
}

void write_norm_csv(std::ostream& os, const std::vector<NormRow>& rows, bool timing) {
    os << "kernel,curve,epsilon,n,op_norm,assembly_seconds\n";
    for (const auto& r : rows)
        os << fmt::format("{},{},{:.17g},{},{:.17g},{}\n", r.kernel, r.curve, r.epsilon, r.n, r.op_norm,
                          timing ? fmt::format("{:.6f}", r.assembly_seconds) : std::string("0"));
}

LineKernel hilbert_kernel() {
    return [](double x, double y) { return std::complex<double>(1.0 / (x - y)); };
}

LineKernel positive_control_kernel() {
    return [](double x, double y) { return std::complex<double>(1.0 / std::abs(x - y)); };
}

}  // namespace heislab
