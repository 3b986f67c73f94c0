#pragma once

#include <functional>
#include <span>

namespace smoothcert {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    int evaluations = 0;
    bool converged = true;
};

using Integrand = std::function<double(double)>;

// Global adaptive Gauss-Kronrod (7/15). points are sorted and include both ends;
// interior points are where the integrand has kinks or endpoint singularities.
[[nodiscard]] QuadratureResult integrate(const Integrand& f, std::span<const double> points,
                                         double abs_tol, double rel_tol = 0.0,
                                         int max_intervals = 20000);

[[nodiscard]] QuadratureResult integrate(const Integrand& f, double a, double b, double abs_tol,
                                         double rel_tol = 0.0, int max_intervals = 20000);

// int_{x0}^{x1} int_{ylo(x)}^{yhi(x)} f(x, y) dy dx, nested 1-D rules
[[nodiscard]] QuadratureResult integrate_2d(const std::function<double(double, double)>& f,
                                            double x0, double x1,
                                            const std::function<double(double)>& ylo,
                                            const std::function<double(double)>& yhi,
                                            double abs_tol);

} // namespace smoothcert
