#pragma once

#include <complex>
#include <vector>

#include "heislab/ilg.hpp"
#include "heislab/kernel1d.hpp"
#include "heislab/kernels.hpp"

namespace heislab {

// Coefficients of the kernel along an intrinsic graph, in the variables
// theta1 = (y/u) / (2L), theta2 = (t/q(u)) / (4L), cut off by plateau(theta1) plateau(theta2)
// and expanded on [-pi,pi]^2 with kappa_n = (2pi)^-2 int kappa(u; theta) e^{-i n.theta}.
struct FourierCoeffTable {
    KernelSpec kernel;
    double L = 1.0;
    int n_max = 0;
    int M = 256;  // quadrature nodes per axis
    QFn q = QFn::Square;
    std::vector<double> u_samples;
    std::vector<std::complex<double>> F;  // u kappa_n(u) at u = 1, index(n1, n2)
    std::vector<double> c;                // decay constants c_n
    double decay_slope = 0.0;             // least-squares slope of log c_n against log(1 + |n|)
    double odd_violation = 0.0;           // max |u| |kappa_n(-u) + kappa_n(u)|

    std::size_t index(int n1, int n2) const;
    double scale1() const { return 2.0 * L; }
    double scale2() const { return 4.0 * L; }
    std::complex<double> kappa_n(int n1, int n2, double u) const { return F[index(n1, n2)] / u; }
};

// kappa_n(u) for |n|_inf <= n_max by periodic trapezoid quadrature, index as in the table.
std::vector<std::complex<double>> kappa_n_at(const KernelSpec& spec, double L, QFn q, double u, int n_max, int M);

FourierCoeffTable fourier_coeffs(const KernelSpec& spec, double L, const std::vector<double>& u_samples, int n_max,
                                 int M = 256);

struct ReconstructionReport {
    double residual = 0.0;  // max |w - v| |K_Phi(w,v) - partial sum|
    std::size_t pairs = 0;
    double max_theta = 0.0;
};
// Compares the partial sum with K_Phi on grid pairs (every `stride`-th node) of an intrinsic graph over the x-axis.
ReconstructionReport reconstruct(const FourierCoeffTable& table, const IlgFunction& f, std::size_t stride = 1);

}  // namespace heislab
