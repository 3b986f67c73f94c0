#include "smoothcert/specfun.hpp"

#include "smoothcert/errors.hpp"
#include "smoothcert/rng.hpp"

#include <algorithm>
#include <array>
#include <numbers>
#include <stdexcept>
#include <string>

namespace smoothcert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// g = 7, n = 9 coefficients
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7,
};

void require_finite(double v, const char* name)
{
    if (!std::isfinite(v))
        throw DomainError(std::string(name) + " must be finite");
}

// Continued fraction for I_z(a,b), Numerical Recipes form with modified Lentz.
double beta_continued_fraction(double z, double a, double b)
{
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-16;
    constexpr int max_iter = 200000;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * z / qap;
    if (std::fabs(d) < tiny)
        d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * z / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny)
            d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny)
            c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * z / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny)
            d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny)
            c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps)
            return h;
    }
    throw std::runtime_error("reg_inc_beta: continued fraction did not converge");
}

// I = exp(log_value), or 1 - exp(log_value) when complement is set.
struct BetaTail {
    double log_value;
    bool complement;
};

BetaTail beta_tail(double z, double a, double b)
{
    require_finite(z, "z");
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
        throw DomainError("reg_inc_beta: a and b must be positive");
    if (z < 0.0 || z > 1.0)
        throw DomainError("reg_inc_beta: z outside [0, 1]");
    if (z == 0.0)
        return {-kInf, false};
    if (z == 1.0)
        return {-kInf, true};

    const double log_front = a * std::log(z) + b * std::log1p(-z) - log_beta(a, b);
    if (z < (a + 1.0) / (a + b + 2.0))
        return {log_front + std::log(beta_continued_fraction(z, a, b) / a), false};
    return {log_front + std::log(beta_continued_fraction(1.0 - z, b, a) / b), true};
}

} // namespace

LogVolume log_sum(LogVolume a, LogVolume b) noexcept
{
    if (a.is_empty())
        return b;
    if (b.is_empty())
        return a;
    const double hi = std::max(a.value, b.value);
    const double lo = std::min(a.value, b.value);
    return {hi + std::log1p(std::exp(lo - hi))};
}

LogVolume log_difference(LogVolume a, LogVolume b)
{
    if (b.is_empty())
        return a;
    if (b.value > a.value) {
        // rounding in the caller can put b a hair above a
        if (b.value - a.value > 1e-9)
            throw DomainError("log_difference: subtrahend exceeds minuend");
        return LogVolume::empty();
    }
    if (a.value == b.value)
        return LogVolume::empty();
    return {a.value + std::log(-std::expm1(b.value - a.value))};
}

double volume_ratio(LogVolume num, LogVolume den) noexcept
{
    if (num.is_empty())
        return 0.0;
    return std::exp(num.value - den.value);
}

double log_gamma(double x)
{
    require_finite(x, "x");
    if (x <= 0.0)
        throw DomainError("log_gamma: argument must be positive");
    if (x < 0.5) {
        // reflection; only positive arguments reach here so sin(pi x) > 0
        return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - log_gamma(1.0 - x);
    }
    x -= 1.0;
    double sum = kLanczos[0];
    for (std::size_t i = 1; i < kLanczos.size(); ++i)
        sum += kLanczos[i] / (x + static_cast<double>(i));
    const double t = x + 7.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (x + 0.5) * std::log(t) - t + std::log(sum);
}

double log_beta(double a, double b)
{
    return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

double reg_inc_beta(double z, double a, double b)
{
    const BetaTail t = beta_tail(z, a, b);
    if (t.complement)
        return -std::expm1(t.log_value);
    return std::exp(t.log_value);
}

double log_reg_inc_beta(double z, double a, double b)
{
    const BetaTail t = beta_tail(z, a, b);
    if (t.complement)
        return std::log1p(-std::exp(t.log_value));
    return t.log_value;
}

double inverse_reg_inc_beta(double p, double a, double b)
{
    if (!(p >= 0.0 && p <= 1.0))
        throw DomainError("inverse_reg_inc_beta: p outside [0, 1]");
    if (p == 0.0)
        return 0.0;
    if (p == 1.0)
        return 1.0;
    double lo = 0.0;
    double hi = 1.0;
    for (int i = 0; i < 200 && hi - lo > 1e-17; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (reg_inc_beta(mid, a, b) < p)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

LogVolume log_ball_volume(int d, double r)
{
    if (d < 1)
        throw DomainError("log_ball_volume: dimension must be >= 1");
    require_finite(r, "r");
    if (!(r > 0.0))
        throw DomainError("log_ball_volume: radius must be positive");
    return {0.5 * d * std::log(std::numbers::pi) - log_gamma(0.5 * d + 1.0) + d * std::log(r)};
}

LogVolume log_cap_volume(double a, double r, int d)
{
    require_finite(a, "a");
    if (!(r > 0.0))
        throw DomainError("log_cap_volume: radius must be positive");
    if (a < 0.0 || a > 2.0 * r)
        throw DomainError("log_cap_volume: height outside [0, 2r]");
    if (a == 0.0)
        return LogVolume::empty();
    const LogVolume ball = log_ball_volume(d, r);
    if (a > r)
        return log_difference(ball, log_cap_volume(2.0 * r - a, r, d));
    const double z = std::min(1.0, a * (2.0 * r - a) / (r * r));
    return {std::log(0.5) + ball.value + log_reg_inc_beta(z, 0.5 * (d + 1), 0.5)};
}

LogVolume log_lens_volume(double r1, double r2, double s, int d)
{
    if (!(r1 > 0.0) || !(r2 > 0.0))
        throw DomainError("log_lens_volume: radii must be positive");
    require_finite(s, "s");
    s = std::fabs(s);
    if (s >= r1 + r2)
        return LogVolume::empty();
    if (s + std::min(r1, r2) <= std::max(r1, r2))
        return log_ball_volume(d, std::min(r1, r2));
    // the plane through both boundary spheres sits at z* from the first center
    const double z_star = (s * s + r1 * r1 - r2 * r2) / (2.0 * s);
    const double h1 = std::clamp(r1 - z_star, 0.0, 2.0 * r1);
    const double h2 = std::clamp(r2 - (s - z_star), 0.0, 2.0 * r2);
    return log_sum(log_cap_volume(h1, r1, d), log_cap_volume(h2, r2, d));
}

double log_angular_constant(int d)
{
    if (d < 2)
        throw DomainError("angular_constant: dimension must be >= 2");
    const double half = 0.5 * (d - 1);
    return std::log(2.0) + half * std::log(std::numbers::pi) - log_gamma(half);
}

double angular_constant(int d)
{
    // peaks near d = 8 and decays after, so exp is always safe
    return std::exp(log_angular_constant(d));
}

double sample_chi(int dof, CounterRng& rng)
{
    if (dof < 1)
        throw DomainError("sample_chi: dof must be >= 1");
    return std::sqrt(2.0 * rng.gamma(0.5 * dof));
}

} // namespace smoothcert
