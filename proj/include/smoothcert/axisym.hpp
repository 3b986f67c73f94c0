#pragma once

#include "smoothcert/geom.hpp"
#include "smoothcert/specfun.hpp"

#include <variant>
#include <vector>

namespace smoothcert {

/**
 * Intersection of sets of revolution about e1, described in (z, rho).
 *
 * Every supported constraint cuts a slice {z = const} down to a single
 * interval of rho, so the intersection is one interval per z. Volumes reduce
 * to a 1-D integral in z once the rho^(d-2) weight is integrated exactly.
 */
class AxisymmetricSet {
public:
    struct Slice {
        double lo = 0.0;
        double hi = 0.0;

        [[nodiscard]] bool empty() const noexcept { return !(hi > lo); }
    };

    AxisymmetricSet& inside_ball(double center, double radius);
    AxisymmetricSet& outside_ball(double center, double radius);
    AxisymmetricSet& inside(const Cone& c);
    AxisymmetricSet& outside(const Cone& c);
    AxisymmetricSet& inside(const HalfSpace& h);
    AxisymmetricSet& outside(const HalfSpace& h);
    // restrict to {h = 1}; geometry error for shapes without rotational symmetry
    AxisymmetricSet& class1(const DecisionRegion& h);
    AxisymmetricSet& class0(const DecisionRegion& h);

    [[nodiscard]] Slice slice(double z) const;
    [[nodiscard]] bool contains(double z, double rho) const;
    // z-extent of the bounded part; requires at least one inside_ball
    [[nodiscard]] std::pair<double, double> z_range() const;
    // z values where the slice bounds lose smoothness
    [[nodiscard]] std::vector<double> breakpoints() const;

private:
    struct Ball {
        double center;
        double radius;
        bool inside;
    };
    struct ConeCut {
        Cone cone;
        bool inside;
    };
    struct HalfCut {
        double offset;
        bool inside;
    };
    using Constraint = std::variant<Ball, ConeCut, HalfCut>;

    AxisymmetricSet& restrict(const DecisionRegion& h, bool want_inside);

    std::vector<Constraint> constraints_;
};

// Vol(set) / exp(reference) in dimension d >= 2
[[nodiscard]] double axisymmetric_volume_fraction(const AxisymmetricSet& set, int d,
                                                  LogVolume reference, double abs_tol = 1e-12);

} // namespace smoothcert
