#pragma once

#include "smoothcert/rng.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <span>
#include <thread>
#include <vector>

namespace smoothcert {

struct NoiseSpec;

struct MonteCarloConfig {
    std::uint64_t samples = 200'000;
    double confidence = 0.99;
    std::uint64_t seed = 0;
    unsigned streams = 16;

    void validate() const;
    // same budget, independent randomness
    [[nodiscard]] MonteCarloConfig derived(std::uint64_t tag) const;
    [[nodiscard]] MonteCarloConfig with_samples(std::uint64_t n) const;
};

struct Interval {
    double lower = 0.0;
    double upper = 1.0;

    [[nodiscard]] bool contains(double v) const noexcept { return lower <= v && v <= upper; }
    [[nodiscard]] double width() const noexcept { return upper - lower; }

    friend bool operator==(const Interval&, const Interval&) = default;
};

[[nodiscard]] inline bool overlaps(const Interval& a, const Interval& b) noexcept
{
    return a.lower <= b.upper && b.lower <= a.upper;
}

struct BinomialEstimate {
    std::uint64_t successes = 0;
    std::uint64_t trials = 0;
    double p_hat = 0.0;
    Interval ci;
};

[[nodiscard]] Interval clopper_pearson(std::uint64_t successes, std::uint64_t trials, double confidence);
[[nodiscard]] BinomialEstimate binomial_estimate(std::uint64_t successes, std::uint64_t trials,
                                                 double confidence);

// SMOOTHCERT_THREADS, else hardware concurrency
[[nodiscard]] unsigned default_thread_count();

/**
 * Sums body(rng, i) over sample indices i in [0, cfg.samples).
 *
 * Indices are split into cfg.streams contiguous ranges spread over worker
 * threads. Sample i always draws from CounterRng(cfg.seed, i), so the total
 * does not depend on how the range is partitioned.
 */
template <class Body>
std::uint64_t sum_over_samples(const MonteCarloConfig& cfg, Body&& body)
{
    const std::uint64_t n = cfg.samples;
    const unsigned streams = std::max(1u, cfg.streams);
    const unsigned workers = std::max(1u, std::min(streams, default_thread_count()));

    auto run_stream = [&](unsigned s) {
        const std::uint64_t begin = n * s / streams;
        const std::uint64_t end = n * (s + 1) / streams;
        std::uint64_t total = 0;
        for (std::uint64_t i = begin; i < end; ++i) {
            CounterRng rng(cfg.seed, i);
            total += static_cast<std::uint64_t>(body(rng, i));
        }
        return total;
    };

    if (workers == 1) {
        std::uint64_t total = 0;
        for (unsigned s = 0; s < streams; ++s)
            total += run_stream(s);
        return total;
    }

    std::vector<std::uint64_t> partial(workers, 0);
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (unsigned s = w; s < streams; s += workers)
                    partial[w] += run_stream(s);
            });
        }
    }
    std::uint64_t total = 0;
    for (std::uint64_t p : partial)
        total += p;
    return total;
}

template <class Trial>
BinomialEstimate estimate_bernoulli(const MonteCarloConfig& cfg, Trial&& trial)
{
    cfg.validate();
    const std::uint64_t k = sum_over_samples(cfg, [&](CounterRng& rng, std::uint64_t) {
        return trial(rng) ? 1 : 0;
    });
    return binomial_estimate(k, cfg.samples, cfg.confidence);
}

using PointEvent = std::function<bool(std::span<const double>)>;

// P[event(Z)] for Z ~ q
[[nodiscard]] BinomialEstimate estimate_indicator(const PointEvent& event, const NoiseSpec& q,
                                                  const MonteCarloConfig& cfg);

} // namespace smoothcert
