#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "heislab/heis.hpp"
#include "heislab/ilg.hpp"
#include "heislab/sio.hpp"
#include "heislab/util.hpp"

namespace heislab {

using Kernel3 = std::function<double(const HPoint&)>;

// Flag {(A(y), y, t)} over a (y,t) window. The profile grid must contain y = 0.
class FlagSpec {
public:
    FlagSpec(SampledFn A, double t0, double t1);
    static FlagSpec flat(double y0, double y1, double t0, double t1, std::size_t n = 257);
    static FlagSpec from(const std::function<double(double)>& A, double y0, double y1, double t0, double t1,
                         std::size_t n = 4097);

    const SampledFn& profile() const { return A_; }
    double y0() const { return A_.grid.front(); }
    double y1() const { return A_.grid.back(); }
    double t0() const { return t0_; }
    double t1() const { return t1_; }
    double lipschitz() const { return lip_; }
    bool in_window(double y, double t) const;

    double A(double y) const { return A_(y); }
    double A_prime(double y) const;
    double primitive(double y) const;  // int_0^y A

private:
    SampledFn A_;
    SampledFn prim_;
    double t0_ = 0.0, t1_ = 0.0;
    double lip_ = 0.0;
};

// (A(y), y, t - y A(y)/2 + int_0^y A); gamma(y) is the value at t = 0.
HPoint flag_param(const FlagSpec& f, double y, double t);

// Normalizes S^3 so that the flat flag ball B(0,r) has measure r^3.
double area_constant();

// max{|y - y'|, sqrt|t - t'|}
double parabolic_distance(double y, double t, double y2, double t2);

struct FlagBilipschitz {
    RatioBounds ratios;
    double C = 0.0;  // max(max, 1/min) / (1 + L)
};
FlagBilipschitz flag_bilipschitz_audit(const FlagSpec& f, int pairs, std::uint64_t seed);

struct FlagSamples {
    std::vector<double> y, t;
    std::vector<HPoint> points;
    std::vector<double> weights;  // c sqrt(1 + A'^2) dy dt
    double dy = 0.0, dt = 0.0;
    std::size_t ny = 0, nt = 0;
    double max_gap = 0.0;  // largest distance between grid neighbours

    std::size_t index(std::size_t iy, std::size_t it) const { return iy * nt + it; }
};
FlagSamples flag_samples(const FlagSpec& f, std::size_t ny, std::size_t nt);

struct KTauSpec {
    Kernel3 K;
    double tau = 1.0;
    double rho() const { return std::sqrt(tau); }
};

// tau^-3 K(delta_{1/tau} p)
double dilated_kernel(const KTauSpec& s, const HPoint& p);

// int e^{-2 pi i theta} (delta_tau K)(p (0,0,theta)) dtheta.
std::complex<double> k_tau_eval(const KTauSpec& s, const HPoint& p, double tol = 1e-10);

// sup |z| |k_tau(p)| over deterministic samples with |z| in [1/4, 4] and |t| <= 4.
double k_tau_decay_constant(const KTauSpec& s, int samples, std::uint64_t seed);

// Components of the horizontal gradient of ||p||_Kor^-2 in closed form.
double grad_koranyi_inv_sq_x(const HPoint& p);
double grad_koranyi_inv_sq_y(const HPoint& p);
double koranyi_inv_sq(const HPoint& p);
// (X f, Y f) by central differences along p * (s,0,0) and p * (0,s,0).
std::pair<double, double> horizontal_gradient_fd(const Kernel3& f, const HPoint& p, double h = 1e-5);

Kernel3 flag_kernel(const std::string& name);

// M_ij = K(p_j^-1 p_i) w_j for d(p_i, p_j) > eps. n_y n_t is capped at 2^14.
SioMatrix assemble_flag_sio(const FlagSpec& f, const Kernel3& K, std::size_t ny, std::size_t nt, double eps);
double sio3_norm(const FlagSpec& f, const Kernel3& K, std::size_t ny, std::size_t nt, double eps);

struct FlagNormRow {
    std::string kernel;
    std::string flag;
    double epsilon = 0.0;
    std::size_t ny = 0, nt = 0;
    double op_norm = 0.0;
};
// Header kernel,flag,epsilon,ny,nt,op_norm.
void write_flag_csv(std::ostream& os, const std::vector<FlagNormRow>& rows);

}  // namespace heislab
