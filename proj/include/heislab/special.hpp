#pragma once

#include <array>
#include <complex>
#include <utility>
#include <vector>

#include "heislab/kernel1d.hpp"

namespace heislab {

// Bump on [1/4, 1] normalized so that its integral against dt/t is 1.
double eta_profile(double t);
double eta_constant();

class PsiS {
public:
    PsiS(double s, QFn q, Kappa kappa = Kappa::reciprocal());

    double s() const { return s_; }
    QFn q() const { return q_; }
    const Kappa& kappa() const { return kappa_; }

    double operator()(double z) const;
    // Fourier transform int Psi(z) e^{-2 pi i z xi} dz.
    std::complex<double> hat(double xi) const;
    std::vector<std::complex<double>> hat(const std::vector<double>& xi) const;

private:
    // Integrals over [t, 1] of eta(t) kappa(s t) / t and eta(t) kappa(s t) / t^2.
    std::pair<double, double> tails(double t) const;

    double s_ = 1.0;
    QFn q_ = QFn::Square;
    Kappa kappa_;
    // Tail integrals from each panel edge of [1/4, 1] to 1.
    std::vector<double> cum_a_, cum_b_;
};

struct PsiCertificate {
    double mean = 0.0;               // int Psi_s
    bool support_ok = false;         // Psi_s = 0 for |z| >= s on the sample grid
    double sup_constant = 0.0;       // max s |Psi_s|
    double fourier_constant = 0.0;   // max |hat Psi_s(xi)| / min(|s xi|, 1/|s xi|)
    double odd_violation = 0.0;      // max |Psi(z) + Psi(-z)|
    double even_violation = 0.0;     // max |Psi(z) - Psi(-z)|
};
PsiCertificate certify(const PsiS& psi);

// Radial kernel on R with hat = |xi|^eps near 0, |xi|^-eps beyond 2, and a C^2 quintic bridge.
class Wp {
public:
    explicit Wp(double eps);
    double eps() const { return eps_; }
    double hat(double xi) const;
    double operator()(double x) const;
    // Leading constant of wp(x) ~ C |x|^{-1-eps} at infinity.
    double tail_constant() const;
    const std::array<double, 6>& bridge() const { return c_; }

private:
    double eps_;
    std::array<double, 6> c_{};  // coefficients in (xi - 1)
};

struct WpCertificate {
    double integral = 0.0;           // int wp over R
    double envelope_constant = 0.0;  // max |wp(x)| / min(|x|^{eps-1}, |x|^{-eps-1})
    double hat_at_one = 0.0;
    double bridge_min = 0.0;         // smallest bridge value on [1,2]
};
WpCertificate certify(const Wp& wp, double R = 200.0);

}  // namespace heislab
