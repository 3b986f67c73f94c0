#include "smoothcert/errors.hpp"
#include "smoothcert/np.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace smoothcert {

namespace {

double norm(std::span<const double> v)
{
    double s = 0.0;
    for (double x : v)
        s += x * x;
    return std::sqrt(s);
}

bool member(const NeymanPearsonSet& k, const TieRule& tie, std::span<const double> z, CounterRng& rng)
{
    switch (k.side(z)) {
    case NpSide::inside:
        return true;
    case NpSide::outside:
        return false;
    case NpSide::tie:
        break;
    }
    if (!tie)
        return true;
    return rng.uniform() < tie(z);
}

} // namespace

NpSide compare_log_densities(double lhs, double rhs) noexcept
{
    if (lhs == -std::numeric_limits<double>::infinity())
        return rhs == lhs ? NpSide::tie : NpSide::inside;
    if (rhs == std::numeric_limits<double>::infinity())
        return NpSide::inside;
    if (rhs == -std::numeric_limits<double>::infinity())
        return NpSide::outside;
    const double tol = 1e-12 * std::max({1.0, std::fabs(lhs), std::fabs(rhs)});
    const double diff = lhs - rhs;
    if (diff < -tol)
        return NpSide::inside;
    if (diff > tol)
        return NpSide::outside;
    return NpSide::tie;
}

NeymanPearsonSet::NeymanPearsonSet(NoiseSpec q0_shifted, std::vector<WeightedNoise> weights)
    : q0_shifted_(std::move(q0_shifted)), weights_(std::move(weights))
{
    q0_shifted_.validate();
    for (const WeightedNoise& w : weights_) {
        w.noise.validate();
        if (w.noise.dim() != q0_shifted_.dim())
            throw GeometryError("NeymanPearsonSet: noise dimensions differ");
        if (std::isnan(w.log_k))
            throw DomainError("NeymanPearsonSet: ln k is NaN");
    }
}

double NeymanPearsonSet::log_rhs(std::span<const double> z) const
{
    LogVolume acc;
    for (const WeightedNoise& w : weights_) {
        if (w.log_k == -std::numeric_limits<double>::infinity())
            continue;
        if (w.log_k == std::numeric_limits<double>::infinity())
            return w.log_k;
        acc = log_sum(acc, LogVolume{w.log_k + log_density(w.noise, z)});
    }
    return acc.value;
}

NpSide NeymanPearsonSet::side(std::span<const double> z) const
{
    return compare_log_densities(log_density(q0_shifted_, z), log_rhs(z));
}

BinomialEstimate np_set_probability(const NeymanPearsonSet& k, const NoiseSpec& q,
                                    const MonteCarloConfig& mc, const TieRule& tie_fraction)
{
    if (q.dim() != k.dim())
        throw GeometryError("np_set_probability: dimension mismatch");
    const std::size_t d = q.dim();
    return estimate_bernoulli(mc, [&](CounterRng& rng) {
        thread_local std::vector<double> z;
        z.resize(d);
        sample(q, rng, z);
        return member(k, tie_fraction, z, rng);
    });
}

CertificateReport np_lower_bound(const NeymanPearsonSet& k, const NoiseSpec& q0,
                                 std::span<const double> delta, const MonteCarloConfig& mc,
                                 const NpLowerBoundOptions& options)
{
    const NoiseSpec expected = q0.shifted(delta);
    if (expected.family != k.q0_shifted().family || expected.scale != k.q0_shifted().scale)
        throw GeometryError("np_lower_bound: set was built for a different q0");
    for (std::size_t i = 0; i < expected.dim(); ++i)
        if (std::fabs(expected.center[i] - k.q0_shifted().center[i]) > 1e-12)
            throw GeometryError("np_lower_bound: set was built for a different attack");

    if (!options.verify_against.empty()) {
        if (options.verify_against.size() != k.weights().size())
            throw DomainError("np_lower_bound: one observation per weighted noise is required");
        for (std::size_t i = 0; i < k.weights().size(); ++i) {
            const BinomialEstimate e = np_set_probability(k, k.weights()[i].noise,
                                                          mc.derived(1000 + i), options.tie_fraction);
            if (e.ci.lower > options.verify_against[i].upper)
                throw ConstraintViolation("np_lower_bound: p(x, Phi_K, q_" + std::to_string(i + 1) +
                                          ") exceeds the observed response");
        }
    }

    const BinomialEstimate e = np_set_probability(k, k.q0_shifted(), mc, options.tie_fraction);
    CertificateReport rep;
    rep.method = CertificateMethod::np_lower;
    rep.value = e.p_hat;
    rep.ci = e.ci;
    rep.samples = mc.samples;
    rep.seed = mc.seed;
    rep.epsilon = norm(delta);
    return rep;
}

} // namespace smoothcert
