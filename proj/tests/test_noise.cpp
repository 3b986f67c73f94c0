#include "support/oracles.hpp"

#include <smoothcert/errors.hpp>
#include <smoothcert/noise.hpp>

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace smoothcert;

TEST_CASE("family names round trip")
{
    for (NoiseFamily f : {NoiseFamily::uniform_l2_ball, NoiseFamily::uniform_linf_box, NoiseFamily::gaussian})
        CHECK(parse_noise_family(to_string(f)) == f);
    CHECK_FALSE(parse_noise_family("laplace").has_value());
}

TEST_CASE("validation")
{
    CHECK_THROWS_AS((void)NoiseSpec::uniform_ball(Point{0.0, 0.0}, -1.0), DomainError);
    CHECK_THROWS_AS((void)NoiseSpec::gaussian(Point{}, 1.0), GeometryError);
}

TEST_CASE("densities")
{
    const NoiseSpec ball = NoiseSpec::uniform_ball(Point{0.0, 0.0, 0.0}, 2.0);
    CHECK(log_density(ball, Point{1.0, 1.0, 0.0}) == doctest::Approx(-std::log(oracle::ball_volume(3, 2.0))));
    CHECK(log_density(ball, Point{2.0, 1.0, 0.0}) == -std::numeric_limits<double>::infinity());
    const NoiseSpec box = NoiseSpec::uniform_box(Point{1.0, 0.0}, 0.5);
    CHECK(log_density(box, Point{1.4, -0.4}) == doctest::Approx(0.0));
    CHECK(log_density(box, Point{1.6, 0.0}) == -std::numeric_limits<double>::infinity());
    CHECK_THROWS_AS((void)log_density_radial(box, 0.1), IsotropyError);
    const NoiseSpec g = NoiseSpec::gaussian(Point{0.0, 0.0}, 2.0);
    CHECK(log_density(g, Point{1.0, 1.0}) ==
          doctest::Approx(-std::log(2 * std::numbers::pi * 4.0) - 2.0 / 8.0));
    CHECK(log_density_radial(g, 2.0) == doctest::Approx(log_density(g, Point{1.0, 1.0})));
    CHECK(log_support_volume(box).linear() == doctest::Approx(1.0));
}

TEST_CASE("samples stay in the support and have the right spread")
{
    CounterRng rng(4, 0);
    const NoiseSpec ball = NoiseSpec::uniform_ball(Point{1.0, -1.0, 0.5}, 0.7);
    const NoiseSpec g = NoiseSpec::gaussian(Point{0.0, 0.0, 0.0}, 1.5);
    Point z(3);
    double r2 = 0.0;
    double g2 = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        sample(ball, rng, z);
        const double d2 = (z[0] - 1) * (z[0] - 1) + (z[1] + 1) * (z[1] + 1) + (z[2] - 0.5) * (z[2] - 0.5);
        CHECK_LE(d2, 0.49 + 1e-12);
        r2 += d2;
        sample(g, rng, z);
        g2 += z[0] * z[0] + z[1] * z[1] + z[2] * z[2];
    }
    // E|U|^2 = d r^2 / (d + 2) for the uniform ball
    CHECK(r2 / n == doctest::Approx(3 * 0.49 / 5).epsilon(0.01));
    CHECK(g2 / n == doctest::Approx(3 * 2.25).epsilon(0.01));
}

TEST_CASE("smoothed probability of a half-plane")
{
    MonteCarloConfig mc;
    mc.samples = 200000;
    mc.seed = 21;
    const DecisionRegion h = DecisionRegion::half_space(0.3, Orientation::class1_inside);
    const BinomialEstimate e =
        smoothed_probability(h, NoiseSpec::uniform_ball(Point{0.0, 0.0}, 1.0), Point{0.0, 0.0}, mc);
    // circular segment beyond x1 = 0.3
    const double a = std::acos(0.3);
    const double want = (a - 0.3 * std::sin(a)) / std::numbers::pi;
    CHECK(e.ci.contains(want));
    const BinomialEstimate b =
        smoothed_probability(h, NoiseSpec::uniform_box(Point{0.0, 0.0}, 1.0), Point{0.5, 0.0}, mc);
    CHECK(b.ci.contains(oracle::box_halfplane(1.0, 0.5, 0.3)));
}

TEST_CASE("shifted moves only the center")
{
    const NoiseSpec q = NoiseSpec::uniform_ball(Point{0.0, 1.0}, 2.0);
    const NoiseSpec s = q.shifted(Point{0.5, -1.0});
    CHECK(s.center == Point{0.5, 0.0});
    CHECK(s.scale == 2.0);
    CHECK(s.family == q.family);
    CHECK_THROWS_AS((void)q.shifted(Point{1.0}), GeometryError);
}
