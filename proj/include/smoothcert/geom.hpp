#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace smoothcert {

using Point = std::vector<double>;
using CellIndex = std::vector<std::int64_t>;

// Result of testing a whole box against a region.
enum class BoxRelation { inside, outside, mixed };

/**
 * Cone of revolution around e1 peaked at c.
 * Convex (angle <= pi/2): z > c and rho <= z tan(angle).
 * Concave (angle > pi/2): z >= c or rho >= -z tan(pi - angle).
 */
struct Cone {
    double peak_offset = 0.0;
    double angle = 0.0;

    [[nodiscard]] bool convex() const noexcept;
    [[nodiscard]] bool contains(std::span<const double> x) const noexcept;
    [[nodiscard]] BoxRelation relation(std::span<const double> lo, std::span<const double> hi) const;
};

// x1 > c
struct HalfSpace {
    double offset = 0.0;

    [[nodiscard]] bool contains(std::span<const double> x) const noexcept;
    [[nodiscard]] BoxRelation relation(std::span<const double> lo, std::span<const double> hi) const;
};

// x1 > c and atan(x2 / x1) in [-angle, angle]
struct PiecewiseLinear2 {
    double offset = 0.0;
    double angle = 0.0;

    [[nodiscard]] bool contains(std::span<const double> x) const noexcept;
    [[nodiscard]] BoxRelation relation(std::span<const double> lo, std::span<const double> hi) const;
};

// Union of half-open cells origin + step * [a, a + 1).
struct GridRegion {
    Point origin;
    double step = 1.0;
    std::set<CellIndex> active_cells;

    [[nodiscard]] CellIndex cell_of(std::span<const double> x) const;
    [[nodiscard]] bool contains(std::span<const double> x) const;
    [[nodiscard]] BoxRelation relation(std::span<const double> lo, std::span<const double> hi) const;
};

struct DecisionRegion;

struct ComplementRegion {
    std::shared_ptr<const DecisionRegion> inner;
};

// Which side of the region the base classifier labels 1.
enum class Orientation { class1_outside, class1_inside };

struct DecisionRegion {
    using Shape = std::variant<Cone, HalfSpace, PiecewiseLinear2, GridRegion, ComplementRegion>;

    Shape shape;
    Orientation orientation = Orientation::class1_outside;
    std::optional<int> dim;

    [[nodiscard]] static DecisionRegion cone(double c, double theta,
                                             Orientation o = Orientation::class1_outside);
    [[nodiscard]] static DecisionRegion half_space(double c,
                                                   Orientation o = Orientation::class1_outside);
    [[nodiscard]] static DecisionRegion piecewise_linear(double c, double theta,
                                                         Orientation o = Orientation::class1_outside);
    [[nodiscard]] static DecisionRegion grid(GridRegion g, Orientation o = Orientation::class1_inside);
    [[nodiscard]] static DecisionRegion complement_of(DecisionRegion inner,
                                                      Orientation o = Orientation::class1_inside);
    // h = 1 everywhere: the complement of an empty grid
    [[nodiscard]] static DecisionRegion everywhere(int d);

    [[nodiscard]] std::string tag() const;
    // set when membership is the same for every point (empty grid and its complement)
    [[nodiscard]] std::optional<bool> constant_membership() const;
    [[nodiscard]] bool contains(std::span<const double> x) const;
    [[nodiscard]] BoxRelation relation(std::span<const double> lo, std::span<const double> hi) const;
    // relation of the box to the class-1 set {h = 1}
    [[nodiscard]] BoxRelation class1_relation(std::span<const double> lo,
                                              std::span<const double> hi) const;
};

[[nodiscard]] int classify(const DecisionRegion& h, std::span<const double> x);
[[nodiscard]] std::optional<int> constant_class(const DecisionRegion& h);

struct HyperCylindrical {
    double z = 0.0;
    double rho = 0.0;
    std::vector<double> angles; // d - 2 angles on the complement of e1
};

[[nodiscard]] HyperCylindrical to_hypercylindrical(std::span<const double> x);
[[nodiscard]] Point from_hypercylindrical(const HyperCylindrical& c);

// distance from the e1 axis
[[nodiscard]] double axial_radius(std::span<const double> x) noexcept;

// translation fully along the cone axis
[[nodiscard]] Point optimal_attack_cone(double epsilon, int d);

} // namespace smoothcert
