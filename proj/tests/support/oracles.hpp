#pragma once

// Reference values computed without the library's quadrature or special
// functions: Boost.Math integrators and closed forms worked out by hand.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

inline double integrate(const std::function<double(double)>& f, double a, double b)
{
    if (!(b > a))
        return 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, 1e-13);
}

// integrate with extra breakpoints where f has kinks
inline double integrate(const std::function<double(double)>& f, std::vector<double> pts)
{
    std::sort(pts.begin(), pts.end());
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        s += integrate(f, pts[i], pts[i + 1]);
    return s;
}

inline double ball_volume(int d, double r)
{
    return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0) * std::pow(r, d);
}

// Vol_d of the set whose slice at axial position z is the annulus
// lo(z) <= rho <= hi(z), by the shell formula with the (d-2)-sphere measure
inline double revolution_volume(int d, const std::function<double(double)>& lo,
                                const std::function<double(double)>& hi, std::vector<double> pts)
{
    const double area = d == 2 ? 2.0 : 2.0 * std::pow(std::numbers::pi, 0.5 * (d - 1)) / std::tgamma(0.5 * (d - 1));
    return area * integrate(
                      [&](double z) {
                          const double a = std::max(0.0, lo(z));
                          const double b = hi(z);
                          if (!(b > a))
                              return 0.0;
                          return (std::pow(b, d - 1) - std::pow(a, d - 1)) / (d - 1);
                      },
                      std::move(pts));
}

inline double disc_half_width(double z, double center, double r)
{
    const double t = r * r - (z - center) * (z - center);
    return t > 0.0 ? std::sqrt(t) : 0.0;
}

// fraction of B(center e1, r) inside the convex cone C(c, theta), theta < pi/2
inline double ball_in_cone(int d, double center, double r, double c, double theta)
{
    const double t = std::tan(theta);
    auto hi = [&](double z) { return z > c ? std::min(disc_half_width(z, center, r), (z - c) * t) : 0.0; };
    auto lo = [](double) { return 0.0; };
    std::vector<double> pts = {center - r, center + r};
    if (c > center - r && c < center + r)
        pts.push_back(c);
    // where the cone line meets the sphere
    const double a = 1.0 + t * t;
    const double b = -2.0 * (center + c * t * t);
    const double q = center * center + c * c * t * t - r * r;
    const double disc = b * b - 4.0 * a * q;
    if (disc > 0.0) {
        for (double z : {(-b - std::sqrt(disc)) / (2 * a), (-b + std::sqrt(disc)) / (2 * a)})
            if (z > center - r && z < center + r)
                pts.push_back(z);
    }
    return revolution_volume(d, lo, hi, pts) / ball_volume(d, r);
}

// nu = Vol(B(eps, r) \ B(0, r) \ C(0, theta)) / V for a convex cone
inline double underestimation(int d, double theta, double r, double eps)
{
    const double t = std::tan(theta);
    auto lo = [&](double z) {
        const double inner = disc_half_width(z, 0.0, r);
        const double cone = z > 0.0 ? z * t : 0.0;
        return std::max(inner, cone);
    };
    auto hi = [&](double z) { return disc_half_width(z, eps, r); };
    std::vector<double> pts = {eps - r, eps + r, 0.0, 0.5 * eps, r};
    for (double zc : {0.0, eps}) {
        const double a = 1.0 + t * t;
        const double disc = 4 * zc * zc - 4 * a * (zc * zc - r * r);
        if (disc > 0)
            for (double z : {(2 * zc - std::sqrt(disc)) / (2 * a), (2 * zc + std::sqrt(disc)) / (2 * a)})
                pts.push_back(z);
    }
    pts.erase(std::remove_if(pts.begin(), pts.end(), [&](double z) { return z < eps - r || z > eps + r; }),
              pts.end());
    return revolution_volume(d, lo, hi, pts) / ball_volume(d, r);
}

// Vol of two balls of radius r with centers eps apart in d = 3
inline double lens3(double r, double eps)
{
    return std::numbers::pi * (4 * r + eps) * (2 * r - eps) * (2 * r - eps) / 12.0;
}

// area of B(0, r1) ∩ B(s, r2) in the plane
inline double lens2(double r1, double r2, double s)
{
    if (s >= r1 + r2)
        return 0.0;
    if (s <= std::fabs(r1 - r2)) {
        const double m = std::min(r1, r2);
        return std::numbers::pi * m * m;
    }
    const double a1 = std::acos((s * s + r1 * r1 - r2 * r2) / (2 * s * r1));
    const double a2 = std::acos((s * s + r2 * r2 - r1 * r1) / (2 * s * r2));
    return r1 * r1 * (a1 - std::sin(2 * a1) / 2) + r2 * r2 * (a2 - std::sin(2 * a2) / 2);
}

// fraction of the box [-r, r]^2 shifted by a along x with first coordinate > c
inline double box_halfplane(double r, double a, double c)
{
    return std::clamp((a + r - c) / (2 * r), 0.0, 1.0);
}

// area fraction of the square [a - r, a + r] x [-r, r] outside C(0, theta)
inline double square_outside_cone(double r, double a, double theta)
{
    const double t = std::tan(theta);
    auto inside = [&](double z) { return z > 0.0 ? 2.0 * std::min(r, z * t) : 0.0; };
    std::vector<double> pts = {a - r, a + r};
    if (a - r < 0 && a + r > 0)
        pts.push_back(0.0);
    if (r / t > a - r && r / t < a + r)
        pts.push_back(r / t);
    return 1.0 - integrate(inside, pts) / (4 * r * r);
}

// Clopper-Pearson bounds from Boost's beta quantiles
inline std::pair<double, double> clopper_pearson(std::uint64_t k, std::uint64_t n, double conf)
{
    const double alpha = 1.0 - conf;
    const double lo = k == 0 ? 0.0 : boost::math::ibeta_inv(double(k), double(n - k + 1), alpha / 2);
    const double hi = k == n ? 1.0 : boost::math::ibetac_inv(double(k + 1), double(n - k), alpha / 2);
    return {lo, hi};
}

} // namespace oracle
