#pragma once

#include <cstdint>
#include <ostream>

namespace heislab {

struct HPoint {
    double x = 0.0;
    double y = 0.0;
    double t = 0.0;

    friend bool operator==(const HPoint&, const HPoint&) = default;
};

std::ostream& operator<<(std::ostream& os, const HPoint& p);

enum class NormKind { MaxNorm, Koranyi };

// Horizontal line {(r cos th, r sin th, 0)} through the origin.
class HorizontalSubgroup {
public:
    HorizontalSubgroup() = default;
    explicit HorizontalSubgroup(double theta);
    double theta() const { return theta_; }

private:
    double theta_ = 0.0;
};

enum class Component { V, L, W, T };

HPoint mul(const HPoint& p, const HPoint& q);
HPoint inverse(const HPoint& p);
HPoint dilate(double lambda, const HPoint& p);
double norm(const HPoint& p, NormKind kind = NormKind::MaxNorm);
double dist(const HPoint& p, const HPoint& q, NormKind kind = NormKind::MaxNorm);

// Rotation by theta about the t-axis; an automorphism and an isometry.
HPoint rotate(double theta, const HPoint& p);

HPoint project(const HPoint& p, const HorizontalSubgroup& sub, Component target);

bool cone_contains(const HPoint& p, const HorizontalSubgroup& sub, double alpha);

struct GroupAudit {
    int samples = 0;
    // Errors relative to the sum of the operand norms (squared for the t-component).
    double associativity = 0.0;
    double inverse = 0.0;
    double dilation = 0.0;
    double left_invariance = 0.0;
    double koranyi_ratio_min = 0.0;  // ||p||_Kor / ||p||_max
    double koranyi_ratio_max = 0.0;
};
// Random points with log-uniform scale in [1e-2, 1e2].
GroupAudit group_audit(int samples, std::uint64_t seed);

inline HPoint operator*(const HPoint& p, const HPoint& q) { return mul(p, q); }

}  // namespace heislab
