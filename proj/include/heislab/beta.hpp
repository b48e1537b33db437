#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "heislab/heis.hpp"
#include "heislab/ilg.hpp"
#include "heislab/util.hpp"

namespace heislab {

struct BetaReport {
    double value = 0.0;
    // Euclidean minimizer y ~ a y + b.
    double a = 0.0, b = 0.0;
    // Horizontal minimizer base * V_theta.
    HPoint base;
    double theta = 0.0;
    bool degenerate = false;
};

// inf over (a,b) of max |A(y) - (a y + b)| / s over grid nodes in [center - s, center + s].
BetaReport beta_affine(const SampledFn& A, double center, double s);

// max over grid y in B(x,s) of |A(y) - A(x) - P_s(A')(x)(y - x)| / (s beta(B(x,s))), with the
// mollified slope at node `c` and scale `s_nodes`; 0 when beta vanishes.
double mollified_beta_ratio(const SampledFn& A, std::size_t c, std::size_t s_nodes);

// sum over k < levels of ln 2 * (1/|window|) sum_y beta^2(B(y, r 2^-k)) dy, y over grid nodes in [a,b];
// balls are clipped to the grid. r defaults to (b - a) / 2.
double jones_sum(const SampledFn& A, double a, double b, int levels, double r = 0.0);

// Distance from q to the horizontal line base * V_theta.
double line_distance(const HPoint& q, const HPoint& base, double theta);

struct DyadicCube {
    int level = 0;
    std::size_t index = 0;
    std::size_t lo = 0, hi = 0;  // sample index range [lo, hi]
    HPoint center;
    double ell = 0.0;           // total weight * 2^-level
    double ball_radius = 0.0;   // 2 C0 ell
    double measure = 0.0;       // sum of weights
    double diameter = 0.0;
};

struct CubeSystem {
    std::vector<std::vector<DyadicCube>> levels;
    double c0 = 0.0;  // min over cubes of dist(z_Q, E \ Q) / ell
    double C0 = 0.0;  // max over cubes of diam(Q) / ell
    double regularity = 0.0;

    const DyadicCube& cube(int level, std::size_t index) const { return levels.at(level).at(index); }
};

// Dyadic split of the cumulative weight. audit = true requires the regularity constant <= 10.
CubeSystem dyadic_cubes_on_curve(const Curve& c, int depth, bool audit = true, std::uint64_t seed = 7);

BetaReport horizontal_beta(const Curve& c, const DyadicCube& q, int n_theta = 360);

// sum over descendants Q of Q0 with beta(Q) > eps of ell(Q) / ell(Q0).
double wgl_count(const Curve& c, const CubeSystem& sys, double eps, int level0, std::size_t index0);

// Length of the union of the projected segments between consecutive samples in [lo, hi].
double projected_length(const Curve& c, std::size_t lo, std::size_t hi, double theta);

struct GoodCubeReport {
    bool good = false;
    double proj_ratio = 0.0;  // H1(pi_V(Q)) / H1(Q)
    double beta = 0.0;
    int cone_violations = 0;
    int pairs_checked = 0;
};
GoodCubeReport good_cube_classify(const Curve& c, const DyadicCube& q, const HorizontalSubgroup& sub, double cfrac,
                                  double eps, double alpha = 0.5, double M = 4.0);

struct ProjectionReport {
    double theta = 0.0;
    double measure = 0.0;
    double ratio = 0.0;  // measure / r
};
// Best theta over a grid for the projected length of the part of the curve inside B(p0, r).
ProjectionReport projection_measure(const Curve& c, const HPoint& p0, double r, int n_theta = 360);

struct CubeRow {
    int level = 0;
    std::size_t index = 0;
    HPoint center;
    double beta = 0.0;
    double proj_ratio = 0.0;
    bool good = false;
};
// Header level,index,center_x,center_y,center_t,beta,proj_ratio,good.
void write_cube_csv(std::ostream& os, const std::vector<CubeRow>& rows);

}  // namespace heislab
