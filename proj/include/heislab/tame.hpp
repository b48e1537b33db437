#pragma once

#include <span>
#include <vector>

#include "heislab/util.hpp"

namespace heislab {

// L(s) = (a s + c, a s^2/2 + c s + b).
struct TameLinear {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;

    double b1(double s) const { return a * s + c; }
    double b2(double s) const { return 0.5 * a * s * s + c * s + b; }
    TameLinear scaled(double k) const { return {k * a, k * b, k * c}; }
};

// (B1, B2) on a uniform grid with B2' = B1. Between nodes B1 is linear and
// B2 is its exact integral from the left node.
class TameMapSampled {
public:
    TameMapSampled() = default;
    // Validates the trapezoid coupling; declared = 0 skips the tameness audit.
    TameMapSampled(UniformGrid grid, std::vector<double> b1, std::vector<double> b2, double declared,
                   bool audit = true);
    // B2 from the cumulative trapezoid of B1, starting at b2_0.
    static TameMapSampled from_b1(UniformGrid grid, std::vector<double> b1, double b2_0, double declared = 0.0);
    static TameMapSampled from_linear(const TameLinear& L, UniformGrid grid);

    const UniformGrid& grid() const { return grid_; }
    std::span<const double> b1() const { return b1_; }
    std::span<const double> b2() const { return b2_; }
    double declared() const { return declared_; }
    std::size_t size() const { return b1_.size(); }

    double eval_b1(double s) const;
    double eval_b2(double s) const;
    // [B2(x) - B2(y) - (B1(x)+B1(y))(x-y)/2], computed cell by cell.
    double b_numerator(double x, double y) const;

    TameMapSampled plus(const TameMapSampled& other) const;
    TameMapSampled plus(const TameLinear& L) const;

private:
    UniformGrid grid_;
    std::vector<double> b1_, b2_;
    double declared_ = 0.0;
};

struct PartialTameData {
    std::vector<double> points;
    std::vector<double> phi1, phi2;

    void validate() const;
};

// Largest two-sided quotient |Q - B1(x)| + |Q - B1(y)| over |x - y|, Q = dB2/dx.
double tameness_constant(std::span<const double> x, std::span<const double> b1, std::span<const double> b2);
double tameness_constant(const TameMapSampled& map);
double tameness_constant(const PartialTameData& data);
// Largest |B2(y) - B2(x) - B1(x)(y - x)| / (y - x)^2 over ordered pairs.
double one_sided_constant(std::span<const double> x, std::span<const double> b1, std::span<const double> b2);
double one_sided_constant(const PartialTameData& data);

// Random data on distinct nodes of g (gaps of at least 3 cells), 2 <= |E| <= max_points, with
// phi1 a Lipschitz walk and phi2 its trapezoid sum plus O(gap^2) noise, rescaled to tameness <= L_max.
PartialTameData random_partial_tame(Rng& rng, const UniformGrid& g, std::size_t max_points, double L_max);

// Extension to an 18L-tame map on `out_grid`. Points of E are snapped to the
// nearest node (tolerance h/2) and their values copied exactly.
TameMapSampled extend_tame(const PartialTameData& data, const UniformGrid& out_grid);

// Triangle peak of the correction on one gap, exposed for testing.
double triangle_peak(double a1, double a2, double c1, double c2, double len);

TameMapSampled rescale_tame(const TameMapSampled& map, double r);

// (phi1, -phi2) as a 2L^2-tame map after checking the two defining inequalities.
TameMapSampled tame_from_ilg(const SampledFn& phi1, const SampledFn& phi2, double L);

struct IlgInequalities {
    double lipschitz = 0.0;  // Lip(phi1)
    double quadratic = 0.0;  // max |dphi2/dv + phi1(v1)| / |dv|
};
IlgInequalities ilg_inequalities(const SampledFn& phi1, const SampledFn& phi2);

}  // namespace heislab
