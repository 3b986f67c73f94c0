#include "smoothcert/mc.hpp"

#include "smoothcert/errors.hpp"
#include "smoothcert/noise.hpp"
#include "smoothcert/specfun.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

namespace smoothcert {

void MonteCarloConfig::validate() const
{
    if (samples < 1)
        throw DomainError("mc: samples must be >= 1");
    if (!(confidence > 0.0 && confidence < 1.0))
        throw DomainError("mc: confidence must lie in (0, 1)");
    if (streams < 1)
        throw DomainError("mc: streams must be >= 1");
}

MonteCarloConfig MonteCarloConfig::derived(std::uint64_t tag) const
{
    MonteCarloConfig out = *this;
    out.seed = derive_seed(seed, tag);
    return out;
}

MonteCarloConfig MonteCarloConfig::with_samples(std::uint64_t n) const
{
    MonteCarloConfig out = *this;
    out.samples = n;
    return out;
}

Interval clopper_pearson(std::uint64_t k, std::uint64_t n, double confidence)
{
    if (n == 0 || k > n)
        throw DomainError("clopper_pearson: need 0 <= k <= n, n >= 1");
    const double alpha = 1.0 - confidence;
    const double kk = static_cast<double>(k);
    const double nn = static_cast<double>(n);
    Interval ci;
    if (k == 0)
        ci.lower = 0.0;
    else if (k == n)
        ci.lower = std::pow(0.5 * alpha, 1.0 / nn);
    else
        ci.lower = inverse_reg_inc_beta(0.5 * alpha, kk, nn - kk + 1.0);

    if (k == n)
        ci.upper = 1.0;
    else if (k == 0)
        ci.upper = 1.0 - std::pow(0.5 * alpha, 1.0 / nn);
    else
        ci.upper = inverse_reg_inc_beta(1.0 - 0.5 * alpha, kk + 1.0, nn - kk);
    return ci;
}

BinomialEstimate binomial_estimate(std::uint64_t successes, std::uint64_t trials, double confidence)
{
    BinomialEstimate e;
    e.successes = successes;
    e.trials = trials;
    e.p_hat = static_cast<double>(successes) / static_cast<double>(trials);
    e.ci = clopper_pearson(successes, trials, confidence);
    return e;
}

unsigned default_thread_count()
{
    if (const char* env = std::getenv("SMOOTHCERT_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1)
            return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

BinomialEstimate estimate_indicator(const PointEvent& event, const NoiseSpec& q,
                                    const MonteCarloConfig& cfg)
{
    const std::size_t d = q.dim();
    return estimate_bernoulli(cfg, [&](CounterRng& rng) {
        thread_local std::vector<double> point;
        point.resize(d);
        sample(q, rng, point);
        return event(point);
    });
}

} // namespace smoothcert
