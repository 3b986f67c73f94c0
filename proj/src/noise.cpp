#include "smoothcert/noise.hpp"

#include "smoothcert/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace smoothcert {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double squared_distance(std::span<const double> x, std::span<const double> c)
{
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double t = x[i] - c[i];
        s += t * t;
    }
    return s;
}

} // namespace

std::string_view to_string(NoiseFamily f) noexcept
{
    switch (f) {
    case NoiseFamily::uniform_l2_ball:
        return "uniform-l2-ball";
    case NoiseFamily::uniform_linf_box:
        return "uniform-linf-box";
    case NoiseFamily::gaussian:
        return "gaussian-isotropic";
    }
    return "unknown";
}

std::optional<NoiseFamily> parse_noise_family(std::string_view s) noexcept
{
    for (NoiseFamily f : {NoiseFamily::uniform_l2_ball, NoiseFamily::uniform_linf_box,
                          NoiseFamily::gaussian}) {
        if (to_string(f) == s)
            return f;
    }
    return std::nullopt;
}

NoiseSpec NoiseSpec::uniform_ball(Point center, double radius)
{
    NoiseSpec q{NoiseFamily::uniform_l2_ball, std::move(center), radius};
    q.validate();
    return q;
}

NoiseSpec NoiseSpec::uniform_box(Point center, double radius)
{
    NoiseSpec q{NoiseFamily::uniform_linf_box, std::move(center), radius};
    q.validate();
    return q;
}

NoiseSpec NoiseSpec::gaussian(Point center, double sigma)
{
    NoiseSpec q{NoiseFamily::gaussian, std::move(center), sigma};
    q.validate();
    return q;
}

void NoiseSpec::validate() const
{
    if (center.empty())
        throw GeometryError("noise: center must have dimension >= 1");
    if (!(scale > 0.0) || !std::isfinite(scale))
        throw DomainError("noise: scale must be positive and finite");
    for (double c : center)
        if (!std::isfinite(c))
            throw DomainError("noise: center must be finite");
}

NoiseSpec NoiseSpec::shifted(std::span<const double> delta) const
{
    if (delta.size() != center.size())
        throw GeometryError("noise: shift dimension mismatch");
    NoiseSpec out = *this;
    for (std::size_t i = 0; i < delta.size(); ++i)
        out.center[i] += delta[i];
    return out;
}

LogVolume log_support_volume(const NoiseSpec& q)
{
    const int d = static_cast<int>(q.dim());
    switch (q.family) {
    case NoiseFamily::uniform_l2_ball:
        return log_ball_volume(d, q.scale);
    case NoiseFamily::uniform_linf_box:
        return {d * std::log(2.0 * q.scale)};
    case NoiseFamily::gaussian:
        break;
    }
    throw DomainError("log_support_volume: Gaussian support is unbounded");
}

double log_density_radial(const NoiseSpec& q, double squared_distance)
{
    const double d = static_cast<double>(q.dim());
    switch (q.family) {
    case NoiseFamily::uniform_l2_ball:
        if (squared_distance > q.scale * q.scale)
            return kNegInf;
        return -log_support_volume(q).value;
    case NoiseFamily::gaussian:
        return -0.5 * d * std::log(2.0 * std::numbers::pi * q.scale * q.scale) -
               squared_distance / (2.0 * q.scale * q.scale);
    case NoiseFamily::uniform_linf_box:
        break;
    }
    throw IsotropyError("log_density_radial: box noise is not isotropic");
}

double log_density(const NoiseSpec& q, std::span<const double> x)
{
    if (x.size() != q.dim())
        throw GeometryError("log_density: dimension mismatch");
    if (q.family == NoiseFamily::uniform_linf_box) {
        for (std::size_t i = 0; i < x.size(); ++i)
            if (std::fabs(x[i] - q.center[i]) > q.scale)
                return kNegInf;
        return -log_support_volume(q).value;
    }
    return log_density_radial(q, squared_distance(x, q.center));
}

void sample(const NoiseSpec& q, CounterRng& rng, std::span<double> out)
{
    const std::size_t d = q.dim();
    switch (q.family) {
    case NoiseFamily::gaussian:
        for (std::size_t i = 0; i < d; ++i)
            out[i] = q.center[i] + q.scale * rng.normal();
        return;
    case NoiseFamily::uniform_linf_box:
        for (std::size_t i = 0; i < d; ++i)
            out[i] = q.center[i] + q.scale * (2.0 * rng.uniform() - 1.0);
        return;
    case NoiseFamily::uniform_l2_ball: {
        double norm2 = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            out[i] = rng.normal();
            norm2 += out[i] * out[i];
        }
        const double radius = q.scale * std::pow(rng.uniform(), 1.0 / static_cast<double>(d));
        const double k = radius / std::sqrt(norm2);
        for (std::size_t i = 0; i < d; ++i)
            out[i] = q.center[i] + k * out[i];
        return;
    }
    }
}

BinomialEstimate smoothed_probability(const DecisionRegion& h, const NoiseSpec& q,
                                      std::span<const double> x, const MonteCarloConfig& mc)
{
    if (x.size() != q.dim())
        throw GeometryError("smoothed_probability: point and noise dimensions differ");
    const Point base(x.begin(), x.end());
    const std::size_t d = q.dim();
    return estimate_bernoulli(mc, [&](CounterRng& rng) {
        thread_local std::vector<double> z;
        z.resize(d);
        sample(q, rng, z);
        for (std::size_t i = 0; i < d; ++i)
            z[i] += base[i];
        return classify(h, z) == 1;
    });
}

} // namespace smoothcert
