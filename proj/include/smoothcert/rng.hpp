#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace smoothcert {

// SplitMix64 finalizer; used to turn (seed, tag) pairs into keys.
[[nodiscard]] std::uint64_t mix64(std::uint64_t x) noexcept;
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) noexcept;

[[nodiscard]] std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                                      std::array<std::uint32_t, 2> key) noexcept;

/**
 * Philox4x32-10 stream. Each (key, stream) pair is an independent sequence;
 * the stream index occupies the upper counter words and the block index the
 * lower ones, so no state is shared between streams.
 *
 * Satisfies UniformRandomBitGenerator.
 */
class CounterRng {
public:
    using result_type = std::uint64_t;

    CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept;

    // open interval (0, 1)
    double uniform() noexcept;
    double normal() noexcept;
    // Gamma(shape, 1), Marsaglia-Tsang
    double gamma(double shape) noexcept;

private:
    void refill() noexcept;

    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint64_t, 2> buffer_{};
    int used_ = 2;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

} // namespace smoothcert
