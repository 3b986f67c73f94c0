#include "smoothcert/certs.hpp"

#include "smoothcert/axisym.hpp"
#include "smoothcert/errors.hpp"
#include "smoothcert/noise.hpp"
#include "smoothcert/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <sstream>
#include <string>

namespace smoothcert {

namespace {

void check_budget(double epsilon, double r)
{
    if (!(r > 0.0) || !std::isfinite(r))
        throw DomainError("radius must be positive");
    if (!(epsilon > 0.0))
        throw DomainError("epsilon must be positive");
    if (epsilon > r)
        throw BudgetError("attack budget epsilon exceeds the smoothing radius");
}

bool on_axis(std::span<const double> x)
{
    for (std::size_t i = 1; i < x.size(); ++i)
        if (x[i] != 0.0)
            return false;
    return true;
}

Interval shifted_down(const Interval& ci, double by)
{
    return {std::max(0.0, ci.lower - by), std::max(0.0, ci.upper - by)};
}

// p(x, h, uniform ball r) for an axisymmetric h and x on the axis
double closed_probability(const DecisionRegion& h, double r, std::span<const double> x)
{
    if (const auto c = constant_class(h))
        return static_cast<double>(*c);
    if (!on_axis(x))
        throw GeometryError("closed path needs x on the e1 axis");
    const int d = static_cast<int>(x.size());
    AxisymmetricSet set;
    set.inside_ball(x[0], r).class1(h);
    return std::min(1.0, axisymmetric_volume_fraction(set, d, log_ball_volume(d, r)));
}

void check_theta(double theta, double epsilon, double r)
{
    const double tm = theta_max(epsilon, r);
    if (!(theta >= 0.0) || theta > tm + 1e-12)
        throw DomainError("theta outside [0, theta_m]; the axis attack is only proven optimal there");
}

} // namespace

std::string_view to_string(CertificateMethod m) noexcept
{
    switch (m) {
    case CertificateMethod::pc_closed:
        return "PC-closed";
    case CertificateMethod::pc_mc:
        return "PC-mc";
    case CertificateMethod::nc_single_closed:
        return "NC-single-closed";
    case CertificateMethod::nc_single_mc:
        return "NC-single-mc";
    case CertificateMethod::ncp:
        return "NCP";
    case CertificateMethod::np_lower:
        return "NP-lower";
    }
    return "unknown";
}

std::optional<CertificateMethod> parse_certificate_method(std::string_view s) noexcept
{
    for (CertificateMethod m :
         {CertificateMethod::pc_closed, CertificateMethod::pc_mc, CertificateMethod::nc_single_closed,
          CertificateMethod::nc_single_mc, CertificateMethod::ncp, CertificateMethod::np_lower}) {
        if (to_string(m) == s)
            return m;
    }
    return std::nullopt;
}

double theta_max(double epsilon, double r)
{
    if (!(r > 0.0) || !(epsilon >= 0.0) || epsilon > 2.0 * r)
        throw DomainError("theta_max: need 0 <= epsilon <= 2r");
    return std::acos(epsilon / (2.0 * r));
}

double crescent_fraction(int d, double epsilon, double r)
{
    if (!(epsilon >= 0.0) || epsilon > 2.0 * r)
        throw DomainError("crescent_fraction: need 0 <= epsilon <= 2r");
    const double t = epsilon / (2.0 * r);
    // the lens B(0,r) ∩ B(delta,r) is two caps of height r - epsilon/2
    return 1.0 - reg_inc_beta(1.0 - t * t, 0.5 * (d + 1), 0.5);
}

CertificateReport nc_single_uniform(const DecisionRegion& h, double r, std::span<const double> x,
                                    double epsilon, const Evaluation& eval)
{
    check_budget(epsilon, r);
    const int d = static_cast<int>(x.size());
    if (d < 2)
        throw GeometryError("nc_single_uniform needs d >= 2");
    const double crescent = crescent_fraction(d, epsilon, r);

    CertificateReport rep;
    rep.epsilon = epsilon;
    rep.theta_m = theta_max(epsilon, r);
    if (!eval) {
        rep.method = CertificateMethod::nc_single_closed;
        rep.value = std::max(0.0, closed_probability(h, r, x) - crescent);
        return rep;
    }
    const Point origin(x.size(), 0.0);
    const BinomialEstimate p = smoothed_probability(h, NoiseSpec::uniform_ball(origin, r), x, *eval);
    rep.method = CertificateMethod::nc_single_mc;
    rep.value = std::max(0.0, p.p_hat - crescent);
    rep.ci = shifted_down(p.ci, crescent);
    rep.samples = eval->samples;
    rep.seed = eval->seed;
    return rep;
}

double axis_attack_probability(const Cone& cone, double r, double epsilon, int d)
{
    if (d < 2)
        throw GeometryError("axis_attack_probability needs d >= 2");
    if (cone.convex() && cone.angle == 0.0)
        return 1.0;
    AxisymmetricSet set;
    set.inside_ball(epsilon, r).outside(cone);
    return std::min(1.0, axisymmetric_volume_fraction(set, d, log_ball_volume(d, r)));
}

CertificateReport pc_cone(double theta, double r, double epsilon, int d, const Evaluation& eval)
{
    check_budget(epsilon, r);
    check_theta(theta, epsilon, r);
    CertificateReport rep;
    rep.epsilon = epsilon;
    rep.theta_m = theta_max(epsilon, r);
    if (!eval) {
        rep.method = CertificateMethod::pc_closed;
        rep.value = axis_attack_probability(Cone{0.0, theta}, r, epsilon, d);
        return rep;
    }
    const Point origin(static_cast<std::size_t>(d), 0.0);
    const BinomialEstimate p = smoothed_probability(DecisionRegion::cone(0.0, theta),
                                                    NoiseSpec::uniform_ball(origin, r),
                                                    optimal_attack_cone(epsilon, d), *eval);
    rep.method = CertificateMethod::pc_mc;
    rep.value = p.p_hat;
    rep.ci = p.ci;
    rep.samples = eval->samples;
    rep.seed = eval->seed;
    return rep;
}

namespace detail {

double underestimation_quadrature(double theta, double r, double epsilon, int d)
{
    AxisymmetricSet set;
    set.inside_ball(epsilon, r).outside_ball(0.0, r).outside(Cone{0.0, theta});
    return axisymmetric_volume_fraction(set, d, log_ball_volume(d, r));
}

} // namespace detail

Underestimation underestimation(double theta, double r, double epsilon, int d, const Evaluation& eval)
{
    check_budget(epsilon, r);
    check_theta(theta, epsilon, r);
    if (d < 2)
        throw GeometryError("underestimation needs d >= 2");
    Underestimation out;
    if (!eval) {
        // a zero-angle cone is a ray, so the whole crescent is class 1
        out.value = theta == 0.0 ? crescent_fraction(d, epsilon, r)
                                 : detail::underestimation_quadrature(theta, r, epsilon, d);
        return out;
    }
    const Cone cone{0.0, theta};
    const double r2 = r * r;
    const BinomialEstimate e = estimate_indicator(
        [&](std::span<const double> u) {
            double n2 = 0.0;
            for (double v : u)
                n2 += v * v;
            return n2 > r2 && !cone.contains(u);
        },
        NoiseSpec::uniform_ball(optimal_attack_cone(epsilon, d), r), *eval);
    out.value = e.p_hat;
    out.ci = e.ci;
    out.samples = eval->samples;
    out.seed = eval->seed;
    return out;
}

std::string_view to_string(Trend t) noexcept
{
    switch (t) {
    case Trend::increasing:
        return "increasing";
    case Trend::decreasing:
        return "decreasing";
    case Trend::undetermined:
        return "undetermined";
    }
    return "undetermined";
}

Trend compare_trend(const BinomialEstimate& at_r0, const BinomialEstimate& at_r1)
{
    if (at_r1.ci.lower > at_r0.ci.upper)
        return Trend::increasing;
    if (at_r1.ci.upper < at_r0.ci.lower)
        return Trend::decreasing;
    return Trend::undetermined;
}

ZetaResult zeta_probe(const DecisionRegion& h, std::span<const Point> points, double r0, double r1,
                      const MonteCarloConfig& mc)
{
    if (points.empty())
        throw DomainError("zeta_probe: empty dataset");
    if (!(r0 > 0.0) || !(r1 > r0))
        throw DomainError("zeta_probe: need 0 < r0 < r1");
    ZetaResult out;
    std::size_t inc = 0;
    std::size_t dec = 0;
    for (std::size_t j = 0; j < points.size(); ++j) {
        const Point& x = points[j];
        const Point origin(x.size(), 0.0);
        ZetaRow row;
        row.x = x;
        row.at_r0 = smoothed_probability(h, NoiseSpec::uniform_ball(origin, r0), x, mc.derived(2 * j));
        row.at_r1 =
            smoothed_probability(h, NoiseSpec::uniform_ball(origin, r1), x, mc.derived(2 * j + 1));
        row.trend = compare_trend(row.at_r0, row.at_r1);
        inc += row.trend == Trend::increasing;
        dec += row.trend == Trend::decreasing;
        out.rows.push_back(std::move(row));
    }
    const double n = static_cast<double>(points.size());
    out.zeta = static_cast<double>(inc) / n;
    out.decreasing_fraction = static_cast<double>(dec) / n;
    out.undetermined_fraction = static_cast<double>(points.size() - inc - dec) / n;
    return out;
}

SuboptimalityProbe detect_suboptimal(const DecisionRegion& h, std::span<const double> x, double r1,
                                     double epsilon, std::span<const double> radii,
                                     const MonteCarloConfig& mc)
{
    if (radii.size() < 2)
        throw DomainError("detect_suboptimal: need at least two radii");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (radii[i] < r1 || radii[i] >= r1 + epsilon)
            throw DomainError("detect_suboptimal: radii must lie in [r1, r1 + epsilon)");
        if (i > 0 && !(radii[i] > radii[i - 1]))
            throw DomainError("detect_suboptimal: radii must be increasing");
    }
    SuboptimalityProbe out;
    out.radii.assign(radii.begin(), radii.end());
    const Point origin(x.size(), 0.0);
    for (std::size_t i = 0; i < radii.size(); ++i)
        out.profile.push_back(
            smoothed_probability(h, NoiseSpec::uniform_ball(origin, radii[i]), x, mc.derived(i)));
    for (std::size_t i = 0; i + 1 < radii.size(); ++i)
        out.flagged = out.flagged || compare_trend(out.profile[i], out.profile[i + 1]) == Trend::increasing;
    return out;
}

void write_underestimation_csv(std::ostream& os, std::span<const UnderestimationRow> rows)
{
    os << "theta,d,epsilon,r,nu_closed,nu_mc,ci_lo,ci_hi,samples,seed\n";
    std::ostringstream line;
    line << std::setprecision(17);
    for (const UnderestimationRow& row : rows) {
        line.str("");
        line << row.theta << ',' << row.d << ',' << row.epsilon << ',' << row.r << ','
             << row.nu_closed << ',' << row.nu_mc << ',' << row.ci_lo << ',' << row.ci_hi << ','
             << row.samples << ',' << row.seed << '\n';
        os << line.str();
    }
}

std::vector<UnderestimationRow> read_underestimation_csv(std::istream& is)
{
    std::vector<UnderestimationRow> rows;
    std::string line;
    if (!std::getline(is, line))
        return rows;
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        std::istringstream ss(line);
        UnderestimationRow row;
        char comma = 0;
        ss >> row.theta >> comma >> row.d >> comma >> row.epsilon >> comma >> row.r >> comma >>
            row.nu_closed >> comma >> row.nu_mc >> comma >> row.ci_lo >> comma >> row.ci_hi >>
            comma >> row.samples >> comma >> row.seed;
        if (!ss)
            throw DomainError("malformed underestimation CSV row: " + line);
        rows.push_back(row);
    }
    return rows;
}

} // namespace smoothcert
