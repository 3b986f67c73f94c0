#include "support/oracles.hpp"

#include <smoothcert/certs.hpp>
#include <smoothcert/errors.hpp>
#include <smoothcert/noise.hpp>

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace smoothcert;

namespace {

constexpr double kPi = std::numbers::pi;

MonteCarloConfig mc(std::uint64_t seed, std::uint64_t samples = 200000)
{
    MonteCarloConfig c;
    c.seed = seed;
    c.samples = samples;
    return c;
}

} // namespace

TEST_CASE("theta_m and budget checks")
{
    CHECK(theta_max(1.0, 1.0) == doctest::Approx(kPi / 3));
    CHECK(theta_max(0.0, 1.0) == doctest::Approx(kPi / 2));
    CHECK_THROWS_AS((void)pc_cone(0.2, 1.0, 1.5, 2, std::nullopt), BudgetError);
    CHECK_THROWS_AS((void)pc_cone(1.2, 1.0, 1.0, 2, std::nullopt), DomainError);
    CHECK_THROWS_AS((void)underestimation(-0.1, 1.0, 0.5, 2, std::nullopt), DomainError);
}

TEST_CASE("underestimation at theta = 0 is the crescent")
{
    const Underestimation u = underestimation(0.0, 1.0, 1.0, 3, std::nullopt);
    CHECK(u.value == doctest::Approx(0.6875).epsilon(1e-14));
    CHECK(detail::underestimation_quadrature(0.0, 1.0, 1.0, 3) == doctest::Approx(0.6875).epsilon(1e-10));
    const Underestimation m = underestimation(0.0, 1.0, 1.0, 3, mc(1));
    REQUIRE(m.ci);
    CHECK(m.ci->contains(0.6875));
}

TEST_CASE("underestimation quadrature against an independent oracle")
{
    for (int d : {2, 3, 5}) {
        for (double eps : {0.5, 1.0}) {
            const double tm = theta_max(eps, 1.0);
            for (double f : {0.1, 0.4, 0.8}) {
                const double theta = f * tm;
                CAPTURE(d);
                CAPTURE(theta);
                CHECK(underestimation(theta, 1.0, eps, d, std::nullopt).value ==
                      doctest::Approx(oracle::underestimation(d, theta, 1.0, eps)).epsilon(1e-9).scale(1e-9));
            }
        }
    }
}

TEST_CASE("underestimation vanishes at theta_m and decreases before")
{
    for (int d : {2, 3}) {
        const double tm = theta_max(0.5, 1.0);
        CHECK(underestimation(tm, 1.0, 0.5, d, std::nullopt).value < 1e-9);
        double prev = 2.0;
        for (int k = 0; k <= 12; ++k) {
            const double v = underestimation(tm * k / 12, 1.0, 0.5, d, std::nullopt).value;
            CHECK(v <= prev + 1e-9);
            prev = v;
        }
    }
}

TEST_CASE("PC for cones: closed form, Monte Carlo and oracle")
{
    for (int d : {2, 3}) {
        const double theta = 0.4;
        const CertificateReport closed = pc_cone(theta, 1.0, 0.5, d, std::nullopt);
        CHECK(closed.method == CertificateMethod::pc_closed);
        CHECK(closed.value == doctest::Approx(1.0 - oracle::ball_in_cone(d, 0.5, 1.0, 0.0, theta)).epsilon(1e-10));
        const CertificateReport m = pc_cone(theta, 1.0, 0.5, d, mc(2));
        CHECK(m.method == CertificateMethod::pc_mc);
        REQUIRE(m.ci);
        CHECK(m.ci->contains(closed.value));
        REQUIRE(closed.theta_m);
        CHECK(*closed.theta_m == doctest::Approx(theta_max(0.5, 1.0)));
    }
}

TEST_CASE("single-noise NC equals PC minus the underestimation")
{
    for (int d : {2, 3, 6}) {
        const double theta = 0.3;
        const DecisionRegion h = DecisionRegion::cone(0.0, theta);
        const Point x(static_cast<std::size_t>(d), 0.0);
        const CertificateReport nc = nc_single_uniform(h, 1.0, x, 0.5, std::nullopt);
        const double pc = pc_cone(theta, 1.0, 0.5, d, std::nullopt).value;
        const double nu = underestimation(theta, 1.0, 0.5, d, std::nullopt).value;
        CHECK(nc.method == CertificateMethod::nc_single_closed);
        CHECK(nc.value == doctest::Approx(pc - nu).epsilon(1e-9));
        const CertificateReport m = nc_single_uniform(h, 1.0, x, 0.5, mc(3));
        REQUIRE(m.ci);
        CHECK(m.ci->contains(nc.value));
    }
}

TEST_CASE("NC for constant classifiers")
{
    const Point x{0.0, 0.0};
    const CertificateReport one = nc_single_uniform(DecisionRegion::everywhere(2), 1.0, x, 0.5, std::nullopt);
    CHECK(one.value == doctest::Approx(1.0 - crescent_fraction(2, 0.5, 1.0)));
    CHECK_THROWS_AS((void)nc_single_uniform(DecisionRegion::cone(0.0, 0.3), 1.0, Point{0.0, 0.2}, 0.5,
                                            std::nullopt),
                    GeometryError);
}

TEST_CASE("trend comparison needs separated intervals")
{
    BinomialEstimate a;
    a.ci = {0.2, 0.3};
    BinomialEstimate b;
    b.ci = {0.31, 0.4};
    CHECK(compare_trend(a, b) == Trend::increasing);
    CHECK(compare_trend(b, a) == Trend::decreasing);
    b.ci = {0.29, 0.4};
    CHECK(compare_trend(a, b) == Trend::undetermined);
}

TEST_CASE("zeta fractions partition the dataset")
{
    const DecisionRegion concave = DecisionRegion::cone(0.0, 3 * kPi / 4, Orientation::class1_inside);
    const std::vector<Point> pts = {{0.0, 0.0}, {5.0, 0.0}, {-0.3, 0.0}, {-4.0, 0.0}, {0.5, 0.5}};
    const ZetaResult z = zeta_probe(concave, pts, 0.5, 1.0, mc(4, 40000));
    CHECK(z.zeta + z.decreasing_fraction + z.undetermined_fraction == doctest::Approx(1.0));
    CHECK(z.rows.size() == pts.size());
    // deep inside class 1: constant probability, never counted as increasing
    CHECK(z.rows[1].trend == Trend::undetermined);
    // the peak itself is scale invariant; just behind it the class-1 share grows
    CHECK(z.rows[0].trend == Trend::undetermined);
    CHECK(z.rows[2].trend == Trend::increasing);
    CHECK_THROWS_AS((void)zeta_probe(concave, pts, 1.0, 0.5, mc(4)), DomainError);
}

TEST_CASE("suboptimality probe")
{
    const std::vector<double> radii = {1.0, 1.2, 1.4};
    const DecisionRegion concave = DecisionRegion::cone(0.0, 3 * kPi / 4, Orientation::class1_inside);
    CHECK(detect_suboptimal(concave, Point{-0.3, 0.0}, 1.0, 0.5, radii, mc(5)).flagged);
    const DecisionRegion half = DecisionRegion::half_space(0.2, Orientation::class1_outside);
    CHECK_FALSE(detect_suboptimal(half, Point{0.0, 0.0}, 1.0, 0.5, radii, mc(5)).flagged);
    CHECK_THROWS_AS((void)detect_suboptimal(half, Point{0.0, 0.0}, 1.0, 0.5, std::vector<double>{1.0, 1.6}, mc(5)),
                    DomainError);
}

TEST_CASE("underestimation CSV round trip")
{
    std::vector<UnderestimationRow> rows(2);
    rows[0] = {0.1, 2, 0.5, 1.0, 0.123456789012345678, 0.12, 0.11, 0.13, 200000, 7};
    rows[1] = {1.0 / 3.0, 5, 1.0, 1.0, 1e-17, 0.0, 0.0, 2.3e-5, 10, 18446744073709551615ULL};
    std::stringstream ss;
    write_underestimation_csv(ss, rows);
    CHECK(read_underestimation_csv(ss) == rows);
    std::stringstream bad("theta,d\n0.1,x\n");
    CHECK_THROWS_AS((void)read_underestimation_csv(bad), DomainError);
}

TEST_CASE("method names round trip")
{
    for (CertificateMethod m : {CertificateMethod::pc_closed, CertificateMethod::pc_mc,
                                CertificateMethod::nc_single_closed, CertificateMethod::nc_single_mc,
                                CertificateMethod::ncp, CertificateMethod::np_lower})
        CHECK(parse_certificate_method(to_string(m)) == m);
}
