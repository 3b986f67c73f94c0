#pragma once

#include <cmath>
#include <limits>

namespace smoothcert {

class CounterRng;

/// Natural log of a nonnegative volume. -inf is the empty set.
struct LogVolume {
    double value = -std::numeric_limits<double>::infinity();

    [[nodiscard]] static constexpr LogVolume empty() noexcept { return {}; }
    [[nodiscard]] bool is_empty() const noexcept { return std::isinf(value) && value < 0; }
    [[nodiscard]] double linear() const noexcept { return std::exp(value); }

    friend bool operator==(LogVolume, LogVolume) = default;
};

// log(e^a + e^b)
[[nodiscard]] LogVolume log_sum(LogVolume a, LogVolume b) noexcept;
// log(e^a - e^b); requires a >= b, tiny negative differences from rounding collapse to empty
[[nodiscard]] LogVolume log_difference(LogVolume a, LogVolume b);
// e^(num - den), the only way volumes leave log space
[[nodiscard]] double volume_ratio(LogVolume num, LogVolume den) noexcept;

[[nodiscard]] double log_gamma(double x);
[[nodiscard]] double log_beta(double a, double b);

/**
 * Regularized incomplete beta I_z(a, b).
 *
 * Continued fraction (modified Lentz) on whichever side of
 * z = (a+1)/(a+b+2) converges fastest.
 */
[[nodiscard]] double reg_inc_beta(double z, double a, double b);
// log I_z(a, b); stays finite where I underflows
[[nodiscard]] double log_reg_inc_beta(double z, double a, double b);
// smallest z with I_z(a, b) >= p, by bisection
[[nodiscard]] double inverse_reg_inc_beta(double p, double a, double b);

[[nodiscard]] LogVolume log_ball_volume(int d, double r);
// cap of height a cut from B(0, r) in dimension d
[[nodiscard]] LogVolume log_cap_volume(double a, double r, int d);
// B(0, r1) ∩ B(s e1, r2)
[[nodiscard]] LogVolume log_lens_volume(double r1, double r2, double s, int d);

// surface measure of the unit (d-2)-sphere
[[nodiscard]] double log_angular_constant(int d);
[[nodiscard]] double angular_constant(int d);

[[nodiscard]] double sample_chi(int dof, CounterRng& rng);

} // namespace smoothcert
