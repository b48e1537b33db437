#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "heislab/tame.hpp"
#include "heislab/util.hpp"

namespace heislab {

// [k 2^-j, (k+1) 2^-j) relative to the unit window.
struct DyadicInterval {
    int j = 0;
    std::int64_t k = 0;

    auto operator<=>(const DyadicInterval&) const = default;
    DyadicInterval parent() const { return {j - 1, k >> 1}; }
    DyadicInterval child(int side) const { return {j + 1, 2 * k + side}; }
    double length() const;  // 2^-j
    bool contains(const DyadicInterval& q) const;  // q subset of *this
};

// Dyadic intervals of a window [a,b] resolved by a uniform grid with
// 2^(depth+g) cells, g >= 2.
struct DyadicGrid {
    double a = 0.0, b = 1.0;
    int depth = 0;
    std::size_t cells = 4;  // grid cells per window

    static DyadicGrid for_samples(const UniformGrid& g, int depth);
    UniformGrid grid() const;
    std::size_t step(int j) const { return cells >> j; }
    std::size_t lo(const DyadicInterval& q) const { return static_cast<std::size_t>(q.k) * step(q.j); }
    std::size_t hi(const DyadicInterval& q) const { return lo(q) + step(q.j); }
    // Node range of 2Q clipped to the window.
    std::pair<std::size_t, std::size_t> doubled(const DyadicInterval& q) const;
    double length(const DyadicInterval& q) const { return (b - a) * q.length(); }
    double x(std::size_t node) const { return a + (b - a) * static_cast<double>(node) / static_cast<double>(cells); }
};

struct DyadicTree {
    DyadicInterval top;
    std::vector<DyadicInterval> members;  // sorted

    bool has(const DyadicInterval& q) const;
    // Members with no children in the tree.
    std::vector<DyadicInterval> minimal() const;
    // Empty string when (T1)-(T3) hold, otherwise a description of the failure.
    std::string check_axioms() const;
};

struct TreeEntry {
    DyadicTree tree;
    std::vector<DyadicInterval> stopped;  // minimal members above the depth cap
    // Approximant on the node range [lo, hi] (clipped 2Q(T)).
    std::size_t lo = 0, hi = 0;
    std::vector<double> psi1;
    std::vector<double> psi2;  // tame corona only
    TameLinear linear;
};

struct CoronaDecomposition {
    double eta = 0.0;
    int depth = 0;
    bool tame = false;
    double scale = 1.0;  // N for the tame corona
    DyadicGrid dgrid;
    std::vector<DyadicInterval> bad;
    std::vector<TreeEntry> trees;

    std::vector<DyadicInterval> tops() const;
    // Index of the tree containing q, -1 for bad, -2 if unassigned.
    int owner(const DyadicInterval& q) const;
};

struct CoronaOptions {
    double beta_factor = 1.0 / 64.0;   // bad when beta(2Q) > beta_factor * eta
    double slope_factor = 0.25;        // stop when the slope moves by more than slope_factor * eta
};

// Best-fit width of samples on nodes [lo, hi], divided by 2 * radius.
double beta_nodes(const SampledFn& phi, std::size_t lo, std::size_t hi, double radius);
// Mollified slope at node c with scale s (in nodes), exact on affine data.
double mollified_slope(const SampledFn& phi, std::size_t c, std::size_t s_nodes);

CoronaDecomposition lipschitz_corona(const SampledFn& phi, double eta, int depth, const CoronaOptions& opt = {});
CoronaDecomposition tame_corona(const TameMapSampled& B, double eta, int depth, const CoronaOptions& opt = {});

struct CoronaAudit {
    bool partition_ok = false;
    bool axioms_ok = false;
    bool approximation_ok = false;
    bool psi_ok = false;
    bool slopes_ok = false;
    double max_approx_ratio = 0.0;  // sup error / (eta |Q|) over Q in trees, s in 2Q
    double max_psi_constant = 0.0;  // Lipschitz (or tameness) constant of psi, over eta (times N)
    double max_linear_slope = 0.0;
    double max_exactness_error = 0.0;  // tame only: |phi2 - psi2 - P| on E nodes and endpoints of stopped intervals
    double max_corrected_lipschitz = 0.0;  // tame only: Lip of the corrected phi_T / N
    double bad_carleson = 0.0;
    double top_carleson = 0.0;
    std::string failure;

    bool ok() const { return partition_ok && axioms_ok && approximation_ok && psi_ok && slopes_ok; }
};

CoronaAudit audit_corona(const CoronaDecomposition& dec, const SampledFn& phi);
CoronaAudit audit_corona(const CoronaDecomposition& dec, const TameMapSampled& B);

// Achieved approximation constant sup |error| / |Q| with s ranging over factor*Q (clipped).
double enlarged_approximation(const CoronaDecomposition& dec, const SampledFn& phi, double factor = 11.0);

double carleson_sum(const std::vector<DyadicInterval>& family, const DyadicInterval& q0);
// Max of carleson_sum over Q0 in levels 0..depth.
double max_carleson(const std::vector<DyadicInterval>& family, int depth);

struct TreeRegionData {
    DyadicTree tree;
    double rho = 0.0;
    SampledFn h_fn;  // NaN outside Q(T)
    SampledFn d_fn;
    std::vector<DyadicInterval> whitney;  // levels up to depth + g
    double whitney_violation = 0.0;       // max over S and y of the relative violation of |S| <= d <= 4|S|

    double D(double x, double y) const { return (d_fn(x) + d_fn(y)) / 4.0; }
};

TreeRegionData tree_regions(const DyadicTree& tree, const DyadicGrid& dg);

struct RotatedGraph {
    std::vector<double> z;
    std::vector<double> psi;
    TameLinear linear;  // slope tan(theta)
    double lipschitz = 0.0;
};

RotatedGraph reparam_rotated_graph(const SampledFn& phi_T, double theta);

std::string corona_to_json(const CoronaDecomposition& dec);

}  // namespace heislab
