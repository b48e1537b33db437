#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "heislab/sio.hpp"
#include "heislab/tame.hpp"
#include "heislab/util.hpp"

namespace heislab {

enum class KappaTag { Reciprocal, Smoothed, Custom };

// Odd convolution kernel on R \ {0}.
struct Kappa {
    KappaTag tag = KappaTag::Reciprocal;
    double eps0 = 0.0;   // Smoothed: u / (u^2 + eps0^2)
    SampledFn half;      // Custom: values on a grid inside (0, inf), extended oddly, 0 beyond

    static Kappa reciprocal() { return {}; }
    static Kappa smoothed(double eps0);
    static Kappa custom(SampledFn positive_half);
    double operator()(double u) const;
    double derivative(double u) const;
};

struct KappaCertificate {
    double size = 0.0;        // max |u kappa(u)|
    double derivative = 0.0;  // max u^2 |kappa'(u)|
};
KappaCertificate certify_kappa(const Kappa& k, double umin = 1e-4, double umax = 1e4, int samples = 2001);

enum class QFn { Square, SignedSquare };
double q_eval(QFn q, double s);

// B given either as a tame-linear map (quotient identically 0) or sampled.
using TameSource = std::variant<std::monostate, TameLinear, TameMapSampled>;

struct Kernel1D {
    Kappa kappa;
    QFn q = QFn::Square;
    std::optional<SampledFn> A;  // absent means A = 0
    TameSource B;                // monostate means B = 0
    int m = 0, n = 0;
    std::optional<SampledFn> A0;
    std::optional<TameMapSampled> B0;

    double a_quotient(double x, double y) const;
    double b_quotient(double x, double y) const;
    // D_{A0} D_{B0}, 1 when neither is set.
    double d_factor(double x, double y) const;
};

double commutator_eval(const Kernel1D& k, double x, double y);
std::complex<double> exp_kernel_eval(const Kernel1D& k, double x, double y);
// sum_{j <= N} (2 pi i)^j S_j / j!, S_j = kappa [A-quotient + B-quotient]^j (times D factors).
std::complex<double> taylor_partial(const Kernel1D& k, double x, double y, int N);
// |kappa D| (2 pi |theta|)^(N+1) / (N+1)!, the remainder bound of the partial sum.
double taylor_remainder_bound(const Kernel1D& k, double x, double y, int N);

LineKernel commutator_kernel(const Kernel1D& k);
LineKernel exp_kernel(const Kernel1D& k);

struct LineTriple {
    double x, y, xp;  // |x - xp| <= |x - y| / 2
};
std::vector<LineTriple> line_triples(int count, double a, double b, std::uint64_t seed);

struct StrongReport {
    double size = 0.0;
    double holder = 0.0;
    double strong() const { return std::max(size, holder); }
};
// Size max |x-y||K| and Holder max |K(x,y)-K(x',y)| |x-y|^{1+alpha} / |x-x'|^alpha, both variables.
StrongReport strong_constants(const LineKernel& k, std::span<const LineTriple> triples, double alpha = 1.0);

struct GrowthFit {
    std::vector<double> strong;  // indexed by m + n = 0..4 (max over splits)
    double C = 0.0;              // max_k strong_k^{1/(k+1)}
    double slope = 0.0;          // least-squares slope of log strong_k against k + 1
};
GrowthFit commutator_growth(const SampledFn& A, const TameMapSampled& B, QFn q, int max_order,
                            std::span<const LineTriple> triples);

}  // namespace heislab
