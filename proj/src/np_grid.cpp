#include "smoothcert/errors.hpp"
#include "smoothcert/np.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace smoothcert {

namespace {

constexpr int kProbes = 32;
constexpr int kNetSize = 64;

// radical inverse in base b, for deterministic probe placement
double radical_inverse(unsigned k, unsigned b)
{
    double inv = 1.0 / b;
    double f = inv;
    double out = 0.0;
    while (k > 0) {
        out += f * static_cast<double>(k % b);
        k /= b;
        f *= inv;
    }
    return out;
}

constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

// fraction of probe points labelled class 1 inside the box
double probe_fraction(const DecisionRegion& h, const Point& lo, const Point& hi)
{
    const std::size_t d = lo.size();
    Point p(d);
    int ones = 0;
    for (int k = 0; k < kProbes; ++k) {
        for (std::size_t i = 0; i < d; ++i) {
            const double u = i == 0 ? (k + 0.5) / kProbes
                                    : radical_inverse(static_cast<unsigned>(k) + 1,
                                                      kPrimes[(i - 1) % std::size(kPrimes)]);
            p[i] = lo[i] + u * (hi[i] - lo[i]);
        }
        ones += classify(h, p);
    }
    return static_cast<double>(ones) / kProbes;
}

} // namespace

std::vector<Point> attack_net(int d, double epsilon, bool direction_net)
{
    if (d < 1)
        throw GeometryError("attack_net: d must be positive");
    if (!(epsilon >= 0.0))
        throw DomainError("attack_net: epsilon must be nonnegative");
    const auto n = static_cast<std::size_t>(d);
    std::vector<Point> out;
    auto axis = [&](std::size_t i, double sign) {
        Point p(n, 0.0);
        p[i] = sign * epsilon;
        out.push_back(std::move(p));
    };
    axis(0, 1.0);
    axis(0, -1.0);
    if (d >= 2) {
        axis(1, 1.0);
        axis(1, -1.0);
    }
    if (!direction_net || d > 3 || d < 2)
        return out;
    if (d == 2) {
        for (int k = 0; k < kNetSize; ++k) {
            const double a = 2.0 * std::numbers::pi * k / kNetSize;
            out.push_back({epsilon * std::cos(a), epsilon * std::sin(a)});
        }
        return out;
    }
    // Fibonacci sphere
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < kNetSize; ++k) {
        const double z = 1.0 - (k + 0.5) * 2.0 / kNetSize;
        const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double a = golden * k;
        out.push_back({epsilon * z, epsilon * s * std::cos(a), epsilon * s * std::sin(a)});
    }
    return out;
}

GridCertificate grid_certificate(const DecisionRegion& h, const NoiseSpec& q0, std::span<const double> x,
                                 double epsilon, int n, const GridOptions& options)
{
    q0.validate();
    if (q0.family != NoiseFamily::uniform_linf_box)
        throw GeometryError("grid_certificate: q0 must be a uniform l-infinity box");
    if (q0.dim() != x.size())
        throw GeometryError("grid_certificate: dimension mismatch");
    if (n < 1)
        throw DomainError("grid_certificate: refinement must be at least 1");
    if (!(epsilon >= 0.0))
        throw DomainError("grid_certificate: epsilon must be nonnegative");

    const std::size_t d = x.size();
    const double r = q0.scale;
    Point center(d);
    for (std::size_t i = 0; i < d; ++i)
        center[i] = x[i] + q0.center[i];

    // cells [a/n, (a+1)/n) covering B_inf(center, r + epsilon); the cover has
    // about (2n(r + epsilon))^d cells
    CellIndex first(d);
    CellIndex last(d);
    for (std::size_t i = 0; i < d; ++i) {
        first[i] = static_cast<std::int64_t>(std::floor((center[i] - r - epsilon) * n));
        last[i] = static_cast<std::int64_t>(std::ceil((center[i] + r + epsilon) * n)) - 1;
    }

    GridCertificate out;
    out.level = n;
    out.heuristic = options.sampled;
    out.grid.origin.assign(d, 0.0);
    out.grid.step = 1.0 / n;

    std::vector<CellIndex> active;
    CellIndex cur = first;
    Point lo(d);
    Point hi(d);
    for (;;) {
        for (std::size_t i = 0; i < d; ++i) {
            lo[i] = static_cast<double>(cur[i]) / n;
            hi[i] = static_cast<double>(cur[i] + 1) / n;
        }
        double response;
        if (options.sampled) {
            response = probe_fraction(h, lo, hi);
        } else {
            const BoxRelation rel = h.class1_relation(lo, hi);
            response = rel == BoxRelation::inside    ? 1.0
                       : rel == BoxRelation::outside ? 0.0
                                                     : std::min(probe_fraction(h, lo, hi),
                                                                1.0 - 1.0 / kProbes);
        }
        out.responses.emplace(cur, response);
        ++out.covered_cells;
        if (response == 1.0)
            active.push_back(cur);

        std::size_t i = 0;
        for (; i < d; ++i) {
            if (cur[i] < last[i]) {
                ++cur[i];
                break;
            }
            cur[i] = first[i];
        }
        if (i == d)
            break;
    }

    const double log_norm = static_cast<double>(d) * std::log(2.0 * r);
    out.value = 1.0;
    for (const Point& delta : attack_net(static_cast<int>(d), epsilon, options.direction_net)) {
        double total = 0.0;
        for (const CellIndex& c : active) {
            double log_overlap = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                const double a = std::max(static_cast<double>(c[i]) / n, center[i] + delta[i] - r);
                const double b = std::min(static_cast<double>(c[i] + 1) / n, center[i] + delta[i] + r);
                if (!(b > a)) {
                    log_overlap = -std::numeric_limits<double>::infinity();
                    break;
                }
                log_overlap += std::log(b - a);
            }
            total += std::exp(log_overlap - log_norm);
        }
        total = std::min(1.0, total);
        if (out.worst_attack.empty() || total < out.value) {
            out.value = total;
            out.worst_attack = delta;
        }
    }
    out.grid.active_cells.insert(active.begin(), active.end());
    return out;
}

} // namespace smoothcert
