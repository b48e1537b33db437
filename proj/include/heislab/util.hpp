#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

namespace heislab {

// Uniform grid x_i = x0 + i*h, i = 0..n-1.
struct UniformGrid {
    double x0 = 0.0;
    double h = 1.0;
    std::size_t n = 0;

    UniformGrid() = default;
    UniformGrid(double x0, double h, std::size_t n);
    static UniformGrid over(double a, double b, std::size_t n);

    double x(std::size_t i) const { return x0 + static_cast<double>(i) * h; }
    double front() const { return x0; }
    double back() const { return x(n - 1); }
    bool contains(double s, double tol = 0.0) const;
    // Nearest node index, clamped.
    std::size_t nearest(double s) const;
    // Cell index i with x_i <= s <= x_{i+1}, clamped to [0, n-2].
    std::size_t cell(double s) const;
    std::vector<double> nodes() const;
};

// Values on a uniform grid, evaluated by linear interpolation.
struct SampledFn {
    UniformGrid grid;
    std::vector<double> v;

    SampledFn() = default;
    SampledFn(UniformGrid g, std::vector<double> values);
    static SampledFn from(UniformGrid g, const std::function<double(double)>& f);

    std::size_t size() const { return v.size(); }
    double x(std::size_t i) const { return grid.x(i); }
    double operator[](std::size_t i) const { return v[i]; }
    double operator()(double s) const;
    // Symmetric differences inside, one-sided at the ends.
    std::vector<double> derivative() const;
    // Maximum slope over adjacent nodes; equals the Lipschitz constant of the interpolant.
    double lipschitz() const;
    // Cumulative trapezoid integral starting from `c0` at the first node.
    SampledFn cumtrapz(double c0 = 0.0) const;
};

// Smooth even bump supported in [-1,1]: exp(-1/(1-x^2)), unnormalized.
double bump(double x);
double bump_derivative(double x);
// Integral of bump over [-1,1] (computed once).
double bump_mass();
// Smooth step: 0 for x <= 0, 1 for x >= 1.
double smooth_step(double x);
// 1 on [-1,1], 0 outside [-2,2], smooth and even.
double plateau(double x);

// Thread count used by parallel loops. 0 means hardware concurrency.
void set_threads(unsigned n);
unsigned threads();

// Runs body(i) for i in [0,n) across the configured threads. Each index is
// visited exactly once; callers write only to slot i so results do not
// depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

using Rng = std::mt19937_64;

// Deterministic sub-stream for (seed, stream).
Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);

double max_abs(std::span<const double> v);

// Minimax line y ~ a x + b through points sorted by x; width is the smallest
// vertical strip width containing all points.
struct ChebyshevFit {
    double a = 0.0;
    double b = 0.0;
    double width = 0.0;
};
ChebyshevFit chebyshev_line(std::span<const double> x, std::span<const double> y);

}  // namespace heislab
