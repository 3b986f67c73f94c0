#include "smoothcert/geom.hpp"

#include "smoothcert/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <type_traits>

namespace smoothcert {

namespace {

constexpr double kHalfPi = 0.5 * std::numbers::pi;

struct RhoRange {
    double min;
    double max;
};

// range of the distance to the e1 axis over an axis-aligned box
RhoRange rho_range(std::span<const double> lo, std::span<const double> hi)
{
    double min2 = 0.0;
    double max2 = 0.0;
    for (std::size_t i = 1; i < lo.size(); ++i) {
        const double nearest = std::clamp(0.0, lo[i], hi[i]);
        min2 += nearest * nearest;
        max2 += std::max(lo[i] * lo[i], hi[i] * hi[i]);
    }
    return {std::sqrt(min2), std::sqrt(max2)};
}

BoxRelation flip(BoxRelation r)
{
    switch (r) {
    case BoxRelation::inside:
        return BoxRelation::outside;
    case BoxRelation::outside:
        return BoxRelation::inside;
    default:
        return BoxRelation::mixed;
    }
}

void check_box(std::span<const double> lo, std::span<const double> hi)
{
    if (lo.size() != hi.size() || lo.empty())
        throw GeometryError("box corners must have equal, nonzero dimension");
}

} // namespace

bool Cone::convex() const noexcept
{
    return angle <= kHalfPi;
}

bool Cone::contains(std::span<const double> x) const noexcept
{
    const double z = x[0];
    const double rho = axial_radius(x);
    if (convex()) {
        if (!(z > peak_offset))
            return false;
        if (angle == kHalfPi)
            return true;
        return rho <= (z - peak_offset) * std::tan(angle);
    }
    return z >= peak_offset || rho >= (peak_offset - z) * std::tan(std::numbers::pi - angle);
}

BoxRelation Cone::relation(std::span<const double> lo, std::span<const double> hi) const
{
    check_box(lo, hi);
    const RhoRange rho = rho_range(lo, hi);
    if (convex()) {
        const double t = angle == kHalfPi ? std::numeric_limits<double>::infinity() : std::tan(angle);
        if (lo[0] > peak_offset && (std::isinf(t) || rho.max <= (lo[0] - peak_offset) * t))
            return BoxRelation::inside;
        if (hi[0] <= peak_offset || (!std::isinf(t) && rho.min > (hi[0] - peak_offset) * t))
            return BoxRelation::outside;
        return BoxRelation::mixed;
    }
    const double t = std::tan(std::numbers::pi - angle);
    if (lo[0] >= peak_offset || rho.min >= (peak_offset - lo[0]) * t)
        return BoxRelation::inside;
    if (hi[0] < peak_offset && rho.max < (peak_offset - hi[0]) * t)
        return BoxRelation::outside;
    return BoxRelation::mixed;
}

bool HalfSpace::contains(std::span<const double> x) const noexcept
{
    return x[0] > offset;
}

BoxRelation HalfSpace::relation(std::span<const double> lo, std::span<const double> hi) const
{
    check_box(lo, hi);
    if (lo[0] > offset)
        return BoxRelation::inside;
    if (hi[0] <= offset)
        return BoxRelation::outside;
    return BoxRelation::mixed;
}

bool PiecewiseLinear2::contains(std::span<const double> x) const noexcept
{
    if (!(x[0] > offset))
        return false;
    const double a = std::atan(x[1] / (x[0] - offset));
    return -angle <= a && a <= angle;
}

BoxRelation PiecewiseLinear2::relation(std::span<const double> lo, std::span<const double> hi) const
{
    check_box(lo, hi);
    if (lo.size() < 2)
        throw GeometryError("piecewise-linear region needs d >= 2");
    // for x1 > c the angle test is |x2| <= (x1 - c) tan(angle)
    const double t = std::tan(angle);
    const double abs_max = std::max(std::fabs(lo[1]), std::fabs(hi[1]));
    const double abs_min = std::fabs(std::clamp(0.0, lo[1], hi[1]));
    if (lo[0] > offset && abs_max <= (lo[0] - offset) * t)
        return BoxRelation::inside;
    if (hi[0] <= offset || abs_min > (hi[0] - offset) * t)
        return BoxRelation::outside;
    return BoxRelation::mixed;
}

CellIndex GridRegion::cell_of(std::span<const double> x) const
{
    if (x.size() != origin.size())
        throw GeometryError("grid: point dimension mismatch");
    CellIndex idx(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        idx[i] = static_cast<std::int64_t>(std::floor((x[i] - origin[i]) / step));
    return idx;
}

bool GridRegion::contains(std::span<const double> x) const
{
    if (active_cells.empty())
        return false;
    return active_cells.count(cell_of(x)) > 0;
}

BoxRelation GridRegion::relation(std::span<const double> lo, std::span<const double> hi) const
{
    check_box(lo, hi);
    if (active_cells.empty())
        return BoxRelation::outside;
    const std::size_t d = lo.size();
    CellIndex first(d);
    CellIndex last(d);
    double count = 1.0;
    for (std::size_t i = 0; i < d; ++i) {
        first[i] = static_cast<std::int64_t>(std::floor((lo[i] - origin[i]) / step));
        last[i] = static_cast<std::int64_t>(std::ceil((hi[i] - origin[i]) / step)) - 1;
        last[i] = std::max(last[i], first[i]);
        count *= static_cast<double>(last[i] - first[i] + 1);
    }
    if (count > 1e6)
        return BoxRelation::mixed;
    std::size_t active = 0;
    std::size_t total = 0;
    CellIndex cur = first;
    for (;;) {
        ++total;
        active += active_cells.count(cur);
        std::size_t k = 0;
        while (k < d && cur[k] == last[k]) {
            cur[k] = first[k];
            ++k;
        }
        if (k == d)
            break;
        ++cur[k];
    }
    if (active == 0)
        return BoxRelation::outside;
    if (active == total)
        return BoxRelation::inside;
    return BoxRelation::mixed;
}

DecisionRegion DecisionRegion::cone(double c, double theta, Orientation o)
{
    if (!(c >= 0.0) || !(theta >= 0.0 && theta <= std::numbers::pi))
        throw DomainError("cone: need c >= 0 and theta in [0, pi]");
    return {Cone{c, theta}, o, std::nullopt};
}

DecisionRegion DecisionRegion::half_space(double c, Orientation o)
{
    if (!std::isfinite(c))
        throw DomainError("half-space: offset must be finite");
    return {HalfSpace{c}, o, std::nullopt};
}

DecisionRegion DecisionRegion::piecewise_linear(double c, double theta, Orientation o)
{
    if (!(c >= 0.0) || !(theta >= 0.0 && theta <= kHalfPi))
        throw DomainError("piecewise-linear: need c >= 0 and theta in [0, pi/2]");
    return {PiecewiseLinear2{c, theta}, o, std::nullopt};
}

DecisionRegion DecisionRegion::grid(GridRegion g, Orientation o)
{
    if (!(g.step > 0.0))
        throw DomainError("grid: step must be positive");
    for (const CellIndex& cell : g.active_cells)
        if (cell.size() != g.origin.size())
            throw GeometryError("grid: cell index dimension mismatch");
    const int d = static_cast<int>(g.origin.size());
    return {std::move(g), o, d};
}

DecisionRegion DecisionRegion::complement_of(DecisionRegion inner, Orientation o)
{
    const std::optional<int> d = inner.dim;
    return {ComplementRegion{std::make_shared<const DecisionRegion>(std::move(inner))}, o, d};
}

DecisionRegion DecisionRegion::everywhere(int d)
{
    GridRegion empty;
    empty.origin.assign(static_cast<std::size_t>(d), 0.0);
    return complement_of(grid(std::move(empty)), Orientation::class1_inside);
}

std::string DecisionRegion::tag() const
{
    struct Visitor {
        std::string operator()(const Cone&) const { return "cone"; }
        std::string operator()(const HalfSpace&) const { return "half-space"; }
        std::string operator()(const PiecewiseLinear2&) const { return "piecewise-linear-2"; }
        std::string operator()(const GridRegion&) const { return "grid-union"; }
        std::string operator()(const ComplementRegion&) const { return "complement"; }
    };
    return std::visit(Visitor{}, shape);
}

std::optional<bool> DecisionRegion::constant_membership() const
{
    if (const auto* g = std::get_if<GridRegion>(&shape); g && g->active_cells.empty())
        return false;
    if (const auto* c = std::get_if<ComplementRegion>(&shape)) {
        if (const auto inner = c->inner->constant_membership())
            return !*inner;
    }
    return std::nullopt;
}

bool DecisionRegion::contains(std::span<const double> x) const
{
    if (dim && static_cast<std::size_t>(*dim) != x.size())
        throw GeometryError("region dimension mismatch");
    return std::visit(
        [&](const auto& s) -> bool {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, ComplementRegion>)
                return !s.inner->contains(x);
            else
                return s.contains(x);
        },
        shape);
}

BoxRelation DecisionRegion::relation(std::span<const double> lo, std::span<const double> hi) const
{
    return std::visit(
        [&](const auto& s) -> BoxRelation {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, ComplementRegion>)
                return flip(s.inner->relation(lo, hi));
            else
                return s.relation(lo, hi);
        },
        shape);
}

BoxRelation DecisionRegion::class1_relation(std::span<const double> lo,
                                            std::span<const double> hi) const
{
    const BoxRelation r = relation(lo, hi);
    return orientation == Orientation::class1_inside ? r : flip(r);
}

int classify(const DecisionRegion& h, std::span<const double> x)
{
    const bool in = h.contains(x);
    return (h.orientation == Orientation::class1_inside) == in ? 1 : 0;
}

std::optional<int> constant_class(const DecisionRegion& h)
{
    const std::optional<bool> in = h.constant_membership();
    if (!in)
        return std::nullopt;
    return (h.orientation == Orientation::class1_inside) == *in ? 1 : 0;
}

double axial_radius(std::span<const double> x) noexcept
{
    double s = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i)
        s += x[i] * x[i];
    return std::sqrt(s);
}

HyperCylindrical to_hypercylindrical(std::span<const double> x)
{
    if (x.size() < 3)
        throw GeometryError("hyper-cylindrical coordinates need d >= 3");
    const std::span<const double> y = x.subspan(1);
    const std::size_t m = y.size();
    HyperCylindrical out;
    out.z = x[0];
    out.angles.resize(m - 1);
    // tail[k] = |(y_k, ..., y_{m-1})|
    std::vector<double> tail(m + 1, 0.0);
    for (std::size_t k = m; k-- > 0;)
        tail[k] = std::hypot(tail[k + 1], y[k]);
    out.rho = tail[0];
    for (std::size_t k = 0; k + 2 < m; ++k)
        out.angles[k] = std::atan2(tail[k + 1], y[k]);
    out.angles[m - 2] = std::atan2(y[m - 1], y[m - 2]);
    return out;
}

Point from_hypercylindrical(const HyperCylindrical& c)
{
    const std::size_t m = c.angles.size() + 1;
    if (m < 2)
        throw GeometryError("hyper-cylindrical coordinates need d >= 3");
    Point x(m + 1);
    x[0] = c.z;
    double s = c.rho;
    for (std::size_t k = 0; k + 1 < m; ++k) {
        x[k + 1] = s * std::cos(c.angles[k]);
        s *= std::sin(c.angles[k]);
    }
    x[m] = s;
    return x;
}

Point optimal_attack_cone(double epsilon, int d)
{
    if (!(epsilon > 0.0) || d < 1)
        throw DomainError("optimal_attack_cone: need epsilon > 0 and d >= 1");
    Point delta(static_cast<std::size_t>(d), 0.0);
    delta[0] = epsilon;
    return delta;
}

} // namespace smoothcert
