#pragma once

#include <complex>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "heislab/corona.hpp"
#include "heislab/ilg.hpp"
#include "heislab/kernels.hpp"

namespace heislab {

enum class Truncation { Sharp, Smooth, ByD };

using ComplexPairKernel = std::function<std::complex<double>(const HPoint&, const HPoint&)>;
using LineKernel = std::function<std::complex<double>(double, double)>;

// Sample points on the real line with quadrature weights.
struct LineSamples {
    std::vector<double> x;
    std::vector<double> w;

    // Midpoints of n equal cells of [a,b].
    static LineSamples midpoint(double a, double b, std::size_t n);
    std::size_t size() const { return x.size(); }
    double max_gap() const;
};

// M_ij = K(p_i, p_j) w_j cutoff(i,j). Real kernels leave `im` empty.
struct SioMatrix {
    std::size_t n = 0;
    Eigen::MatrixXd re;
    Eigen::MatrixXd im;
    std::vector<double> weights;
    double epsilon = 0.0;
    Truncation truncation = Truncation::Sharp;

    bool is_complex() const { return im.size() != 0; }
    std::complex<double> operator()(std::size_t i, std::size_t j) const;
};

// 1 - phi(d / eps) with phi = 1 on [0,1/2], 0 beyond 1.
double smooth_cutoff(double d, double eps);

SioMatrix assemble_sio(const PairKernel& k, const Curve& c, double eps, Truncation tr = Truncation::Sharp);
SioMatrix assemble_sio(const ComplexPairKernel& k, const Curve& c, double eps, Truncation tr = Truncation::Sharp);
SioMatrix assemble_sio(const LineKernel& k, const LineSamples& s, double eps, Truncation tr = Truncation::Sharp);
// Rows restricted to Q(T), entries kept where D(x,y) <= |x-y| <= rho.
SioMatrix assemble_sio_by_d(const LineKernel& k, const LineSamples& s, const TreeRegionData& reg,
                            const DyadicGrid& dg);

// Spectral norm of W^{1/2} M W^{-1/2} (weighted) or M, by Lanczos on the Gram matrix.
// Stops when the Ritz residual is below tol times the Ritz value.
double op_norm(const SioMatrix& m, bool weighted = true, double tol = 1e-8, int max_iter = 10000);
// Same norm by plain power iteration on the Gram matrix, same start vector and stopping rule.
double op_norm_power(const SioMatrix& m, bool weighted = true, double tol = 1e-8, int max_iter = 10000);
// Largest singular value from a dense SVD.
double op_norm_dense(const SioMatrix& m, bool weighted = true);
// y = M f.
std::vector<std::complex<double>> apply_sio(const SioMatrix& m, const std::vector<std::complex<double>>& f);

// sup over eps in eps_grid of |T_eps f| at each sample.
std::vector<double> maximal_sio(const PairKernel& k, const Curve& c, const std::vector<double>& f,
                                const std::vector<double>& eps_grid);
std::vector<double> maximal_sio(const LineKernel& k, const LineSamples& s, const std::vector<double>& f,
                                const std::vector<double>& eps_grid);

// Centred Hardy-Littlewood maximal function of |f| on the samples.
std::vector<double> hardy_littlewood(const LineSamples& s, const std::vector<double>& f);

struct CotlarReport {
    double constant = 0.0;  // max T*f / (M|T f| + ||T|| M f)
    double norm = 0.0;      // ||T_eps|| at the smallest eps
};
CotlarReport cotlar_audit(const LineKernel& k, const LineSamples& s, const std::vector<double>& f,
                          const std::vector<double>& eps_grid);

struct T1Report {
    double forward = 0.0;    // average over B0 of |T b|
    double transpose = 0.0;  // average over B0 of |T^t b|
};
// b = 1 on 2B0, 0 off 3B0, smooth truncation at eps.
T1Report t1_test(const LineKernel& k, const LineSamples& s, double x0, double r, double eps);
T1Report t1_test(const PairKernel& k, const Curve& c, const HPoint& p0, double r, double eps);

struct AnnulusReport {
    int trials = 0;
    int max_annuli = 0;        // most annuli (ratio <= 100, centred at x0) needed for one trial
    double max_ratio_used = 0.0;
};
// For random x0, x in a ball B(x0,r), covers {y : |y - x0| >= 2r, exactly one of K^D(x,y), K^D(x0,y) is cut}
// by annuli around x0 with outer/inner radius ratio <= 100.
AnnulusReport annulus_check(const TreeRegionData& reg, const DyadicGrid& dg, int trials, std::uint64_t seed);

struct NormRow {
    std::string kernel;
    std::string curve;
    double epsilon = 0.0;
    std::size_t n = 0;
    double op_norm = 0.0;
    double assembly_seconds = 0.0;
};
// Header kernel,curve,epsilon,n,op_norm,assembly_seconds.
void write_norm_csv(std::ostream& os, const std::vector<NormRow>& rows, bool timing);

// Hilbert fixture 1/(x - y) and the positive control 1/|x - y|.
LineKernel hilbert_kernel();
LineKernel positive_control_kernel();

}  // namespace heislab
