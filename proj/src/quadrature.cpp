#include "smoothcert/quadrature.hpp"

#include "smoothcert/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace smoothcert {

namespace {

// QUADPACK qk15 abscissae and weights
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
};

struct Segment {
    double a;
    double b;
    double value;
    double error;

    bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gauss_kronrod(const Integrand& f, double a, double b)
{
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double resk = fc * kWgk[7];
    double resg = fc * kWg[3];
    double resabs = std::fabs(resk);
    double fv1[7];
    double fv2[7];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        fv1[j] = f(center - dx);
        fv2[j] = f(center + dx);
        const double pair = fv1[j] + fv2[j];
        resk += kWgk[j] * pair;
        resabs += kWgk[j] * (std::fabs(fv1[j]) + std::fabs(fv2[j]));
        if (j % 2 == 1)
            resg += kWg[j / 2] * pair;
    }
    const double mean = 0.5 * resk;
    double resasc = kWgk[7] * std::fabs(fc - mean);
    for (int j = 0; j < 7; ++j)
        resasc += kWgk[j] * (std::fabs(fv1[j] - mean) + std::fabs(fv2[j] - mean));

    const double scale = std::fabs(half);
    double err = std::fabs((resk - resg) * half);
    resasc *= scale;
    resabs *= scale;
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double round_floor = 50.0 * std::numeric_limits<double>::epsilon() * resabs;
    if (resabs > std::numeric_limits<double>::min() / (50.0 * std::numeric_limits<double>::epsilon()))
        err = std::max(err, round_floor);
    return {a, b, resk * half, err};
}

} // namespace

QuadratureResult integrate(const Integrand& f, std::span<const double> points, double abs_tol,
                           double rel_tol, int max_intervals)
{
    if (points.size() < 2)
        throw DomainError("integrate: need at least two points");
    std::priority_queue<Segment> heap;
    QuadratureResult out;
    double total = 0.0;
    double total_err = 0.0;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        if (!(points[i + 1] > points[i]))
            continue;
        Segment s = gauss_kronrod(f, points[i], points[i + 1]);
        out.evaluations += 15;
        total += s.value;
        total_err += s.error;
        heap.push(s);
    }
    int intervals = static_cast<int>(heap.size());
    while (!heap.empty() && total_err > std::max(abs_tol, rel_tol * std::fabs(total))) {
        if (intervals >= max_intervals) {
            out.converged = false;
            break;
        }
        const Segment worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // interval cannot be split further in double precision
            out.converged = false;
            break;
        }
        heap.pop();
        const Segment left = gauss_kronrod(f, worst.a, mid);
        const Segment right = gauss_kronrod(f, mid, worst.b);
        out.evaluations += 30;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++intervals;
    }
    // re-sum to shed accumulated cancellation from the running updates
    total = 0.0;
    total_err = 0.0;
    while (!heap.empty()) {
        total += heap.top().value;
        total_err += heap.top().error;
        heap.pop();
    }
    out.value = total;
    out.error = total_err;
    return out;
}

QuadratureResult integrate(const Integrand& f, double a, double b, double abs_tol, double rel_tol,
                           int max_intervals)
{
    if (a == b)
        return {};
    if (a > b) {
        QuadratureResult r = integrate(f, b, a, abs_tol, rel_tol, max_intervals);
        r.value = -r.value;
        return r;
    }
    const double pts[2] = {a, b};
    return integrate(f, std::span<const double>(pts, 2), abs_tol, rel_tol, max_intervals);
}

QuadratureResult integrate_2d(const std::function<double(double, double)>& f, double x0, double x1,
                              const std::function<double(double)>& ylo,
                              const std::function<double(double)>& yhi, double abs_tol)
{
    const double span = std::max(std::fabs(x1 - x0), 1e-300);
    bool inner_ok = true;
    int inner_evals = 0;
    auto outer = [&](double x) {
        const double lo = ylo(x);
        const double hi = yhi(x);
        if (!(hi > lo))
            return 0.0;
        const QuadratureResult r =
            integrate([&](double y) { return f(x, y); }, lo, hi, 0.1 * abs_tol / span);
        inner_ok = inner_ok && r.converged;
        inner_evals += r.evaluations;
        return r.value;
    };
    QuadratureResult out = integrate(outer, x0, x1, abs_tol);
    out.evaluations += inner_evals;
    out.converged = out.converged && inner_ok;
    return out;
}

} // namespace smoothcert
