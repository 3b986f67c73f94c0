#pragma once

#include "smoothcert/geom.hpp"
#include "smoothcert/mc.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

namespace smoothcert {

enum class CertificateMethod { pc_closed, pc_mc, nc_single_closed, nc_single_mc, ncp, np_lower };

[[nodiscard]] std::string_view to_string(CertificateMethod m) noexcept;
[[nodiscard]] std::optional<CertificateMethod> parse_certificate_method(std::string_view s) noexcept;

struct CertificateReport {
    double value = 0.0;
    CertificateMethod method = CertificateMethod::pc_closed;
    std::optional<Interval> ci;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    double epsilon = 0.0;
    std::optional<double> theta_m;

    // an epsilon-certificate succeeds when it exceeds 1/2
    [[nodiscard]] bool successful() const noexcept { return value > 0.5; }

    friend bool operator==(const CertificateReport&, const CertificateReport&) = default;
};

// Empty means the closed (quadrature / special-function) path.
using Evaluation = std::optional<MonteCarloConfig>;

[[nodiscard]] double theta_max(double epsilon, double r);

// Vol(B(delta, r) \ B(0, r)) / Vol(B(0, r)) for |delta| = epsilon
[[nodiscard]] double crescent_fraction(int d, double epsilon, double r);

/**
 * Single uniform-ball noise certificate: the worst classifier consistent
 * with p(x, h, q_r) moves all lost mass into the crescent, so
 * NC = max(0, p - crescent).
 *
 * The closed path integrates p exactly and needs a cone or half-space
 * region with x on the e1 axis; the Monte Carlo path works for any region.
 */
[[nodiscard]] CertificateReport nc_single_uniform(const DecisionRegion& h, double r,
                                                  std::span<const double> x, double epsilon,
                                                  const Evaluation& eval);

// Uniform noise of radius r at epsilon e1 against h = 1{x not in C(0, theta)}.
[[nodiscard]] CertificateReport pc_cone(double theta, double r, double epsilon, int d,
                                        const Evaluation& eval);

// Same probability for a cone peaked at c under the axis attack. Optimality
// of the axis attack is only established for c = 0.
[[nodiscard]] double axis_attack_probability(const Cone& cone, double r, double epsilon, int d);

struct Underestimation {
    double value = 0.0;
    std::optional<Interval> ci;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
};

// nu = PC - NC = Vol(B(delta, r) \ B(0, r) \ C(0, theta)) / V
[[nodiscard]] Underestimation underestimation(double theta, double r, double epsilon, int d,
                                              const Evaluation& eval);

namespace detail {
// quadrature route even at theta = 0, kept for cross-checks
[[nodiscard]] double underestimation_quadrature(double theta, double r, double epsilon, int d);
}

enum class Trend { increasing, decreasing, undetermined };

[[nodiscard]] std::string_view to_string(Trend t) noexcept;

// CI-separated comparison of two estimates taken at increasing radii
[[nodiscard]] Trend compare_trend(const BinomialEstimate& at_r0, const BinomialEstimate& at_r1);

struct ZetaRow {
    Point x;
    BinomialEstimate at_r0;
    BinomialEstimate at_r1;
    Trend trend = Trend::undetermined;
};

struct ZetaResult {
    double zeta = 0.0;
    double undetermined_fraction = 0.0;
    double decreasing_fraction = 0.0;
    std::vector<ZetaRow> rows;
};

[[nodiscard]] ZetaResult zeta_probe(const DecisionRegion& h, std::span<const Point> points, double r0,
                                    double r1, const MonteCarloConfig& mc);

struct SuboptimalityProbe {
    bool flagged = false;
    std::vector<double> radii;
    std::vector<BinomialEstimate> profile;
};

// Flags a CI-separated increase of p(x, h, q_r) between adjacent radii.
[[nodiscard]] SuboptimalityProbe detect_suboptimal(const DecisionRegion& h, std::span<const double> x,
                                                   double r1, double epsilon,
                                                   std::span<const double> radii,
                                                   const MonteCarloConfig& mc);

struct UnderestimationRow {
    double theta = 0.0;
    int d = 2;
    double epsilon = 0.0;
    double r = 1.0;
    double nu_closed = 0.0;
    double nu_mc = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 1.0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;

    friend bool operator==(const UnderestimationRow&, const UnderestimationRow&) = default;
};

void write_underestimation_csv(std::ostream& os, std::span<const UnderestimationRow> rows);
[[nodiscard]] std::vector<UnderestimationRow> read_underestimation_csv(std::istream& is);

} // namespace smoothcert
