#include "smoothcert/axisym.hpp"

#include "smoothcert/errors.hpp"
#include "smoothcert/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace smoothcert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

AxisymmetricSet::Slice intersect(AxisymmetricSet::Slice a, double lo, double hi)
{
    return {std::max(a.lo, lo), std::min(a.hi, hi)};
}

// rho-interval of a cone at height z; (inside, outside) complement each other
AxisymmetricSet::Slice cone_slice(const Cone& c, double z, bool inside)
{
    if (c.convex()) {
        if (!(z > c.peak_offset))
            return inside ? AxisymmetricSet::Slice{0.0, 0.0} : AxisymmetricSet::Slice{0.0, kInf};
        const double edge = c.angle == 0.5 * std::numbers::pi ? kInf : (z - c.peak_offset) * std::tan(c.angle);
        return inside ? AxisymmetricSet::Slice{0.0, edge} : AxisymmetricSet::Slice{edge, kInf};
    }
    if (z >= c.peak_offset)
        return inside ? AxisymmetricSet::Slice{0.0, kInf} : AxisymmetricSet::Slice{0.0, 0.0};
    const double edge = (c.peak_offset - z) * std::tan(std::numbers::pi - c.angle);
    return inside ? AxisymmetricSet::Slice{edge, kInf} : AxisymmetricSet::Slice{0.0, edge};
}

void add_line_circle_roots(double slope, double apex, double center, double radius, std::vector<double>& out)
{
    // (u + apex - b)^2 + slope^2 u^2 = R^2 with u = z - apex
    const double shift = center - apex;
    const double a = 1.0 + slope * slope;
    const double b = -2.0 * shift;
    const double c = shift * shift - radius * radius;
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0 || !std::isfinite(a))
        return;
    const double s = std::sqrt(disc);
    out.push_back(apex + (-b - s) / (2.0 * a));
    out.push_back(apex + (-b + s) / (2.0 * a));
}

} // namespace

AxisymmetricSet& AxisymmetricSet::inside_ball(double center, double radius)
{
    constraints_.push_back(Ball{center, radius, true});
    return *this;
}

AxisymmetricSet& AxisymmetricSet::outside_ball(double center, double radius)
{
    constraints_.push_back(Ball{center, radius, false});
    return *this;
}

AxisymmetricSet& AxisymmetricSet::inside(const Cone& c)
{
    constraints_.push_back(ConeCut{c, true});
    return *this;
}

AxisymmetricSet& AxisymmetricSet::outside(const Cone& c)
{
    constraints_.push_back(ConeCut{c, false});
    return *this;
}

AxisymmetricSet& AxisymmetricSet::inside(const HalfSpace& h)
{
    constraints_.push_back(HalfCut{h.offset, true});
    return *this;
}

AxisymmetricSet& AxisymmetricSet::outside(const HalfSpace& h)
{
    constraints_.push_back(HalfCut{h.offset, false});
    return *this;
}

AxisymmetricSet& AxisymmetricSet::restrict(const DecisionRegion& h, bool want_inside)
{
    if (const auto* c = std::get_if<Cone>(&h.shape))
        return want_inside ? inside(*c) : outside(*c);
    if (const auto* hs = std::get_if<HalfSpace>(&h.shape))
        return want_inside ? inside(*hs) : outside(*hs);
    if (const auto* comp = std::get_if<ComplementRegion>(&h.shape))
        return restrict(*comp->inner, !want_inside);
    throw GeometryError("region '" + h.tag() + "' is not a set of revolution about e1");
}

AxisymmetricSet& AxisymmetricSet::class1(const DecisionRegion& h)
{
    return restrict(h, h.orientation == Orientation::class1_inside);
}

AxisymmetricSet& AxisymmetricSet::class0(const DecisionRegion& h)
{
    return restrict(h, h.orientation != Orientation::class1_inside);
}

AxisymmetricSet::Slice AxisymmetricSet::slice(double z) const
{
    Slice s{0.0, kInf};
    for (const Constraint& c : constraints_) {
        if (const auto* b = std::get_if<Ball>(&c)) {
            const double dz = z - b->center;
            const double h2 = b->radius * b->radius - dz * dz;
            const double edge = h2 > 0.0 ? std::sqrt(h2) : 0.0;
            if (b->inside)
                s = h2 > 0.0 ? intersect(s, 0.0, edge) : Slice{0.0, 0.0};
            else
                s = intersect(s, edge, kInf);
        } else if (const auto* k = std::get_if<ConeCut>(&c)) {
            const Slice cs = cone_slice(k->cone, z, k->inside);
            s = intersect(s, cs.lo, cs.hi);
        } else {
            const auto& h = std::get<HalfCut>(c);
            const bool in = z > h.offset;
            if (in != h.inside)
                s = Slice{0.0, 0.0};
        }
        if (s.empty())
            return {0.0, 0.0};
    }
    return s;
}

bool AxisymmetricSet::contains(double z, double rho) const
{
    const Slice s = slice(z);
    return !s.empty() && s.lo <= rho && rho <= s.hi;
}

std::pair<double, double> AxisymmetricSet::z_range() const
{
    double lo = -kInf;
    double hi = kInf;
    for (const Constraint& c : constraints_) {
        if (const auto* b = std::get_if<Ball>(&c); b && b->inside) {
            lo = std::max(lo, b->center - b->radius);
            hi = std::min(hi, b->center + b->radius);
        }
    }
    if (!std::isfinite(lo) || !std::isfinite(hi))
        throw GeometryError("axisymmetric set is unbounded; add an inside_ball constraint");
    return {lo, hi};
}

std::vector<double> AxisymmetricSet::breakpoints() const
{
    std::vector<double> pts;
    std::vector<const Ball*> balls;
    for (const Constraint& c : constraints_)
        if (const auto* b = std::get_if<Ball>(&c))
            balls.push_back(b);

    for (const Constraint& c : constraints_) {
        if (const auto* b = std::get_if<Ball>(&c)) {
            pts.push_back(b->center - b->radius);
            pts.push_back(b->center + b->radius);
        } else if (const auto* k = std::get_if<ConeCut>(&c)) {
            pts.push_back(k->cone.peak_offset);
            pts.push_back(0.0);
            const double slope = k->cone.convex() ? std::tan(k->cone.angle)
                                                  : std::tan(std::numbers::pi - k->cone.angle);
            for (const Ball* b : balls)
                add_line_circle_roots(slope, k->cone.peak_offset, b->center, b->radius, pts);
        } else {
            pts.push_back(std::get<HalfCut>(c).offset);
        }
    }
    // planes through the intersection of two spheres
    for (std::size_t i = 0; i < balls.size(); ++i) {
        for (std::size_t j = i + 1; j < balls.size(); ++j) {
            const double db = balls[j]->center - balls[i]->center;
            if (db == 0.0)
                continue;
            const double r1 = balls[i]->radius;
            const double r2 = balls[j]->radius;
            pts.push_back(balls[i]->center + (db * db + r1 * r1 - r2 * r2) / (2.0 * db));
        }
    }
    return pts;
}

double axisymmetric_volume_fraction(const AxisymmetricSet& set, int d, LogVolume reference,
                                    double abs_tol)
{
    if (d < 2)
        throw DomainError("axisymmetric volume needs d >= 2");
    const auto [z0, z1] = set.z_range();
    if (!(z1 > z0))
        return 0.0;

    std::vector<double> pts{z0, z1};
    for (double p : set.breakpoints())
        if (p > z0 && p < z1)
            pts.push_back(p);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    // Vol = A * int (hi^(d-1) - lo^(d-1)) / (d-1) dz
    const double power = d - 1.0;
    const double log_scale = log_angular_constant(d) - std::log(power) - reference.value;
    auto integrand = [&](double z) {
        const AxisymmetricSet::Slice s = set.slice(z);
        if (s.empty())
            return 0.0;
        const double upper = std::exp(log_scale + power * std::log(s.hi));
        const double lower = s.lo > 0.0 ? std::exp(log_scale + power * std::log(s.lo)) : 0.0;
        return upper - lower;
    };
    const QuadratureResult r = integrate(integrand, pts, abs_tol);
    return std::max(0.0, r.value);
}

} // namespace smoothcert
