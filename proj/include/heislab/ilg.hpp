#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "heislab/heis.hpp"
#include "heislab/tame.hpp"
#include "heislab/util.hpp"

namespace heislab {

// Intrinsic graph over a horizontal subgroup: v -> (v, phi1(v), phi2(v) + phi1(v) v / 2),
// rotated by the subgroup angle.
struct IlgFunction {
    HorizontalSubgroup sub;
    SampledFn phi1, phi2;
    double declared_L = 0.0;

    IlgFunction() = default;
    // audit = true checks the measured constant against declared_L.
    IlgFunction(HorizontalSubgroup sub, SampledFn phi1, SampledFn phi2, double declared_L, bool audit = true);

    const UniformGrid& grid() const { return phi1.grid; }
};

enum class CurveKind { IlgGraph, HorizontalLine, Polyline };

struct Curve {
    std::vector<double> params;
    std::vector<HPoint> points;
    std::vector<double> weights;
    CurveKind kind = CurveKind::Polyline;

    std::size_t size() const { return points.size(); }
    double total_weight() const;
    double max_gap() const;  // largest metric distance between consecutive points
};

HPoint graph_map(const IlgFunction& f, double v);
double ilg_check(const IlgFunction& f);

// Trapezoid value of the integral of sqrt(1 + phi1'^2) over [a,b] with n samples
// (n = 0 uses the native grid spacing).
double h1_length(const IlgFunction& f, double a, double b, std::size_t n = 0);
// Sum of max-norm distances between consecutive graph points.
double polyline_length(const IlgFunction& f, double a, double b, std::size_t n);

IlgFunction extend_ilg(const PartialTameData& partial, const UniformGrid& grid,
                       HorizontalSubgroup sub = HorizontalSubgroup());

Curve curve_from_graph(const IlgFunction& f, double a, double b, std::size_t n);
Curve horizontal_line_curve(const HPoint& base, double theta, double a, double b, std::size_t n);
// Segment of the t-axis, weights = parameter spacing.
Curve t_axis_curve(double t0, double t1, std::size_t n);
Curve transform(const Curve& c, const std::function<HPoint(const HPoint&)>& map);

struct RatioBounds {
    double min = 0.0;
    double max = 0.0;
};
// d(Phi(v), Phi(v')) / |v - v'| over all grid pairs.
RatioBounds graph_bilipschitz(const IlgFunction& f);
// Measured C with mu(B(p,r))/r in [1/C, C].
double regularity_audit(const Curve& c, int samples, std::uint64_t seed);

void write_curve_csv(std::ostream& os, const Curve& c);

// Named intrinsic L-Lipschitz fixtures on [a,b] with phi2 = -integral of phi1:
// "zero", "line" (phi1 = 1), "slope" (phi1 = v), "zigzag", "wave".
IlgFunction ilg_fixture(const std::string& name, double L, double a, double b, std::size_t n);

}  // namespace heislab
