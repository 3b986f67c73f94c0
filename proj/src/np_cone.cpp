#include "smoothcert/axisym.hpp"
#include "smoothcert/errors.hpp"
#include "smoothcert/np.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace smoothcert {

namespace {

void check_radii(double c, double r1, double r2, int d)
{
    if (d < 2)
        throw GeometryError("cone identification needs d >= 2");
    if (!(c >= 0.0) || !(r1 > c) || !(r2 > r1))
        throw DomainError("cone identification needs r2 > r1 > c >= 0");
}

} // namespace

double cone_growth(double theta, double c, double r1, double r2, int d)
{
    check_radii(c, r1, r2, d);
    if (!(theta >= 0.0 && theta <= 0.5 * std::numbers::pi))
        throw DomainError("cone_growth: theta outside [0, pi/2]");
    if (theta == 0.0)
        return 0.0;
    AxisymmetricSet set;
    set.inside_ball(0.0, r2).outside_ball(0.0, r1).inside(Cone{c, theta});
    return axisymmetric_volume_fraction(set, d, log_ball_volume(d, r2));
}

double observed_growth(double p1, double p2, double r1, double r2, int d)
{
    if (!(p1 >= 0.0 && p1 <= 1.0 && p2 >= 0.0 && p2 <= 1.0))
        throw DomainError("observed_growth: probabilities outside [0, 1]");
    if (!(r1 > 0.0) || !(r2 > r1))
        throw DomainError("observed_growth: need 0 < r1 < r2");
    // class-0 mass inside B(r2) minus the part already inside B(r1)
    return (1.0 - p2) - (1.0 - p1) * std::pow(r1 / r2, d);
}

ConeAngleEstimate identify_cone_angle(double p1, double p2, double r1, double r2, double c, int d,
                                      double tol)
{
    check_radii(c, r1, r2, d);
    ConeAngleEstimate out;
    out.growth = observed_growth(p1, p2, r1, r2, d);
    out.half_space_growth = cone_growth(0.5 * std::numbers::pi, c, r1, r2, d);
    if (out.growth > out.half_space_growth + 1e-12)
        throw InconsistencyError("identify_cone_angle: growth exceeds the half-space bound");
    if (out.growth <= 0.0)
        return out;
    double lo = 0.0;
    double hi = 0.5 * std::numbers::pi;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (cone_growth(mid, c, r1, r2, d) < out.growth)
            lo = mid;
        else
            hi = mid;
    }
    out.theta = 0.5 * (lo + hi);
    return out;
}

OffsetBracket identify_cone_offset(const DecisionRegion& h, std::span<const double> x,
                                   std::span<const double> radii, const MonteCarloConfig& mc, double tol)
{
    if (radii.empty())
        throw DomainError("identify_cone_offset: empty radii grid");
    for (std::size_t i = 0; i < radii.size(); ++i)
        if (!(radii[i] > 0.0) || (i > 0 && !(radii[i] > radii[i - 1])))
            throw DomainError("identify_cone_offset: radii must be positive and increasing");
    if (!(tol > 0.0))
        throw DomainError("identify_cone_offset: tolerance must be positive");

    const Point origin(x.size(), 0.0);
    std::uint64_t tag = 0;
    auto saw_class0 = [&](double r) {
        const BinomialEstimate e =
            smoothed_probability(h, NoiseSpec::uniform_ball(origin, r), x, mc.derived(tag++));
        return e.successes < e.trials;
    };

    OffsetBracket out;
    std::size_t first_hit = radii.size();
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (saw_class0(radii[i])) {
            first_hit = i;
            break;
        }
    }
    if (first_hit == radii.size()) {
        out.lower = radii.back();
        out.upper = std::numeric_limits<double>::infinity();
        out.estimate = std::numeric_limits<double>::infinity();
        return out;
    }
    out.lower = first_hit == 0 ? 0.0 : radii[first_hit - 1];
    out.upper = radii[first_hit];
    while (out.upper - out.lower > tol) {
        const double mid = 0.5 * (out.lower + out.upper);
        if (saw_class0(mid))
            out.upper = mid;
        else
            out.lower = mid;
    }
    out.estimate = 0.5 * (out.lower + out.upper);
    return out;
}

CertificateReport ncp_certificate(double theta, double c, double r, double epsilon, int d)
{
    CertificateReport rep;
    if (c == 0.0) {
        rep = pc_cone(theta, r, epsilon, d, std::nullopt);
    } else {
        if (!(c > 0.0))
            throw DomainError("ncp_certificate: offset must be nonnegative");
        if (!(epsilon > 0.0) || epsilon > r)
            throw BudgetError("ncp_certificate: need 0 < epsilon <= r");
        rep.epsilon = epsilon;
        rep.theta_m = theta_max(epsilon, r);
        rep.value = axis_attack_probability(Cone{c, theta}, r, epsilon, d);
    }
    rep.method = CertificateMethod::ncp;
    return rep;
}

} // namespace smoothcert
