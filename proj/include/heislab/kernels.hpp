#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "heislab/heis.hpp"
#include "heislab/util.hpp"

namespace heislab {

enum class KernelTag { RieszX, RieszY, RieszT, GradLogX, GradLogY, ChousionisLi, SmoothTest, Zero };

// SmoothTest is k(x,y,t) = x^{-1} exp(-(y^2/(4x^2) + t^2/(16x^4))/0.3): -1-homogeneous,
// odd and horizontally odd, smooth off {x = 0} and flat there. Zero is the zero kernel.
struct KernelSpec {
    KernelTag tag = KernelTag::RieszX;
    double alpha = 4.0;
    NormKind norm = NormKind::Koranyi;

    static KernelSpec riesz_x() { return {KernelTag::RieszX}; }
    static KernelSpec riesz_y() { return {KernelTag::RieszY}; }
    static KernelSpec riesz_t() { return {KernelTag::RieszT}; }
    static KernelSpec grad_log_x() { return {KernelTag::GradLogX}; }
    static KernelSpec grad_log_y() { return {KernelTag::GradLogY}; }
    static KernelSpec chousionis_li(double alpha);
    static KernelSpec smooth_test() { return {KernelTag::SmoothTest}; }
    static KernelSpec zero() { return {KernelTag::Zero}; }
    static KernelSpec parse(const std::string& name);

    std::string name() const;
    bool horizontally_odd_by_design() const;
};

double eval_kernel(const KernelSpec& spec, const HPoint& p);
double pair_kernel(const KernelSpec& spec, const HPoint& p, const HPoint& q);

using PairKernel = std::function<double(const HPoint&, const HPoint&)>;
PairKernel make_pair_kernel(const KernelSpec& spec);

struct SymmetryReport {
    bool odd = false;
    bool horizontally_odd = false;
    // Scaled violations ||p|| |k(-p) + k(p)| and ||p|| |k(-x,-y,t) + k(x,y,t)|.
    double odd_violation = 0.0;
    double hodd_violation = 0.0;
    // Violation of the best-fitting class.
    double max_violation = 0.0;
};

SymmetryReport symmetry_check(const KernelSpec& spec, int samples, std::uint64_t seed);

// Random point with max norm in [rmin, rmax], log-uniform radius.
HPoint random_point(std::mt19937_64& rng, double rmin, double rmax);

struct SkTriple {
    HPoint p, q, pp;  // d(p, pp) <= d(p, q) / 2
};

std::vector<SkTriple> sk_triples(int count, std::uint64_t seed, double dmin = 1e-3, double dmax = 1e3);
std::vector<SkTriple> translate(std::span<const SkTriple> triples, const HPoint& z);
std::vector<SkTriple> dilate(std::span<const SkTriple> triples, double r);

struct SkReport {
    double size_constant = 0.0;
    double holder_constant = 0.0;
    double holder_exponent = 0.5;
};

// Distances in the max norm.
SkReport sk_constants(const KernelSpec& spec, std::span<const SkTriple> triples, double alpha);
SkReport sk_constants(const PairKernel& k, std::span<const SkTriple> triples, double alpha);

}  // namespace heislab
