#pragma once

#include "smoothcert/geom.hpp"
#include "smoothcert/mc.hpp"
#include "smoothcert/specfun.hpp"

#include <optional>
#include <span>
#include <string_view>

namespace smoothcert {

enum class NoiseFamily { uniform_l2_ball, uniform_linf_box, gaussian };

[[nodiscard]] std::string_view to_string(NoiseFamily f) noexcept;
[[nodiscard]] std::optional<NoiseFamily> parse_noise_family(std::string_view s) noexcept;

// scale is the radius for ball/box and sigma for the Gaussian
struct NoiseSpec {
    NoiseFamily family = NoiseFamily::uniform_l2_ball;
    Point center;
    double scale = 1.0;

    [[nodiscard]] static NoiseSpec uniform_ball(Point center, double radius);
    [[nodiscard]] static NoiseSpec uniform_box(Point center, double radius);
    [[nodiscard]] static NoiseSpec gaussian(Point center, double sigma);

    [[nodiscard]] std::size_t dim() const noexcept { return center.size(); }
    [[nodiscard]] bool is_uniform() const noexcept { return family != NoiseFamily::gaussian; }
    [[nodiscard]] bool is_isotropic() const noexcept { return family != NoiseFamily::uniform_linf_box; }
    [[nodiscard]] NoiseSpec shifted(std::span<const double> delta) const;
    void validate() const;

    friend bool operator==(const NoiseSpec&, const NoiseSpec&) = default;
};

[[nodiscard]] double log_density(const NoiseSpec& q, std::span<const double> x);
// isotropic families only; argument is |x - center|^2
[[nodiscard]] double log_density_radial(const NoiseSpec& q, double squared_distance);
// uniform families only
[[nodiscard]] LogVolume log_support_volume(const NoiseSpec& q);

void sample(const NoiseSpec& q, CounterRng& rng, std::span<double> out);

/**
 * Monte Carlo estimate of p(x, h, q) = P[h(x + s) = 1], s ~ q, with
 * Clopper-Pearson bounds at mc.confidence.
 */
[[nodiscard]] BinomialEstimate smoothed_probability(const DecisionRegion& h, const NoiseSpec& q,
                                                    std::span<const double> x,
                                                    const MonteCarloConfig& mc);

} // namespace smoothcert
