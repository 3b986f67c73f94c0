#include "smoothcert/errors.hpp"
#include "smoothcert/np.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace smoothcert {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kSlack = 1e-12;

void check_concentric(std::span<const NoiseSpec> noises)
{
    if (noises.empty())
        return;
    const NoiseSpec& first = noises.front();
    if (!first.is_uniform())
        throw GeometryError("uniform patterns need uniform noises");
    for (const NoiseSpec& q : noises) {
        q.validate();
        if (q.family != first.family)
            throw GeometryError("uniform patterns need a single noise family");
        if (q.dim() != first.dim())
            throw GeometryError("noise dimensions differ");
        for (std::size_t i = 0; i < q.dim(); ++i)
            if (std::fabs(q.center[i] - first.center[i]) > 1e-12)
                throw GeometryError("information noises are not concentric");
    }
}

// log Vol(support of q centered at c with radius r ∩ support of s)
LogVolume log_support_overlap(const NoiseSpec& s, const Point& c, double r)
{
    const int d = static_cast<int>(s.dim());
    if (s.family == NoiseFamily::uniform_l2_ball) {
        double dist2 = 0.0;
        for (std::size_t i = 0; i < s.dim(); ++i)
            dist2 += (s.center[i] - c[i]) * (s.center[i] - c[i]);
        return log_lens_volume(r, s.scale, std::sqrt(dist2), d);
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < s.dim(); ++i) {
        const double lo = std::max(c[i] - r, s.center[i] - s.scale);
        const double hi = std::min(c[i] + r, s.center[i] + s.scale);
        if (!(hi > lo))
            return LogVolume::empty();
        acc += std::log(hi - lo);
    }
    return {acc};
}

struct Choice {
    bool feasible = false;
    std::size_t m1 = 0;
    std::size_t m2 = 0;
    double value = 0.0;
    std::vector<double> fractions;
};

// cap_for(m2)[i]: room left for noise i once the off-support part of annuli
// 1..m2 (forced in by k > 0 there) is counted
Choice best_choice(const std::vector<double>& omega,
                   const std::function<std::vector<double>(std::size_t)>& cap_for)
{
    const std::size_t n = omega.size();
    Choice best;
    for (std::size_t m2 = 0; m2 <= n; ++m2) {
        const std::vector<double> cap = cap_for(m2);
        for (std::size_t m1 = 0; m1 <= m2; ++m1) {
            std::vector<double> s(n);
            double prefix = 0.0;
            bool ok = true;
            for (std::size_t i = 0; i < n; ++i) {
                if (i < m1)
                    prefix += omega[i];
                s[i] = cap[i] - prefix;
                if (s[i] < -kSlack)
                    ok = false;
                s[i] = std::max(0.0, s[i]);
            }
            if (!ok)
                continue;
            std::vector<double> frac(n, 0.0);
            double value = prefix;
            for (std::size_t i = 0; i < m1; ++i)
                frac[i] = 1.0;
            // outermost tie annulus first: it enters the fewest constraints
            for (std::size_t j = m2; j-- > m1;) {
                double room = omega[j];
                for (std::size_t i = j; i < n; ++i)
                    room = std::min(room, s[i]);
                room = std::max(0.0, room);
                for (std::size_t i = j; i < n; ++i)
                    s[i] -= room;
                value += room;
                frac[j] = omega[j] > 0.0 ? room / omega[j] : 0.0;
            }
            // fully activated tie annuli belong to the prefix
            std::size_t full = m1;
            while (full < m2 && frac[full] >= 1.0)
                ++full;
            if (!best.feasible || value > best.value + 1e-15)
                best = {true, full, m2, value, std::move(frac)};
        }
    }
    return best;
}

} // namespace

std::size_t ActivationPattern::active_count() const noexcept
{
    return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), true));
}

std::vector<PatternCandidate> enumerate_uniform_patterns(std::span<const NoiseSpec> noises)
{
    if (noises.size() > 20)
        throw DomainError("enumerate_uniform_patterns: at most 20 noises");
    check_concentric(noises);
    const std::size_t n = noises.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return noises[a].scale < noises[b].scale; });
    std::vector<double> radii(n);
    for (std::size_t j = 0; j < n; ++j) {
        radii[j] = noises[order[j]].scale;
        if (j > 0 && radii[j] == radii[j - 1])
            throw GeometryError("enumerate_uniform_patterns: duplicate radii");
    }

    std::vector<PatternCandidate> out;
    for (std::size_t m = 0; m <= n; ++m) {
        PatternCandidate c;
        c.pattern.bits.assign(n, false);
        std::fill_n(c.pattern.bits.begin(), m, true);
        c.radii = radii;
        c.order = order;
        c.unit_log_k.assign(n, kNegInf);
        if (m > 0) {
            // twice the level on annuli 1..m, zero beyond
            const NoiseSpec& q = noises[order[m - 1]];
            c.unit_log_k[order[m - 1]] = std::log(2.0) + log_support_volume(q).value;
        }
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<double> witness_log_k(const PatternCandidate& c, LogVolume log_v0)
{
    std::vector<double> out = c.unit_log_k;
    for (double& v : out)
        if (v != kNegInf)
            v -= log_v0.value;
    return out;
}

PatternSelection select_pattern(std::span<const PatternCandidate> candidates,
                                std::span<const NoiseSpec> noises, std::span<const Interval> observed,
                                const NoiseSpec& q0, std::span<const double> delta)
{
    check_concentric(noises);
    const std::size_t n = noises.size();
    if (candidates.size() != n + 1)
        throw DomainError("select_pattern: candidates do not match the noises");
    if (observed.size() != n)
        throw DomainError("select_pattern: one observation per information noise is required");
    for (const Interval& o : observed)
        if (!(o.lower >= 0.0 && o.upper <= 1.0 && o.lower <= o.upper))
            throw DomainError("select_pattern: observations must lie in [0, 1]");
    q0.validate();
    if (n > 0) {
        if (q0.family != noises[0].family)
            throw GeometryError("select_pattern: q0 must share the information noises' family");
        for (std::size_t i = 0; i < q0.dim(); ++i)
            if (std::fabs(q0.center[i] - noises[0].center[i]) > 1e-12)
                throw GeometryError("select_pattern: q0 must be concentric with the information noises");
    } else if (!q0.is_uniform()) {
        throw GeometryError("select_pattern: q0 must be uniform");
    }

    const NoiseSpec s0 = q0.shifted(delta);
    const LogVolume log_v0 = log_support_volume(q0);
    const std::vector<std::size_t>& order = candidates.front().order;

    // cumulative share of the attacked q0 inside each ball, then per annulus
    std::vector<double> omega(n);
    std::vector<double> cum(n);
    std::vector<LogVolume> log_v(n);
    double prev = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const NoiseSpec& q = noises[order[j]];
        cum[j] = std::min(1.0, volume_ratio(log_support_overlap(s0, q.center, q.scale), log_v0));
        omega[j] = std::max(0.0, cum[j] - prev);
        prev = cum[j];
        log_v[j] = log_support_volume(q);
    }
    auto caps_for = [&](bool upper) {
        return [&, upper](std::size_t m2) {
            std::vector<double> cap(n);
            for (std::size_t i = 0; i < n; ++i) {
                const double obs = upper ? observed[order[i]].upper : observed[order[i]].lower;
                const double ratio = volume_ratio(log_v0, log_v[i]); // V0 / V_i
                // q_i mass off the attacked support, inside ball min(i, m2); beyond
                // the last weighted annulus both sides vanish and the tie is left out
                const std::size_t j = std::min(i + 1, m2);
                const double off = j == 0 ? 0.0 : std::max(0.0, volume_ratio(log_v[j - 1], log_v[i]) - cum[j - 1] * ratio);
                cap[i] = (obs - off) / ratio;
            }
            return cap;
        };
    };

    const Choice lo = best_choice(omega, caps_for(false));
    const Choice hi = best_choice(omega, caps_for(true));

    PatternSelection out;
    out.feasible = lo.feasible;
    out.report.method = CertificateMethod::np_lower;
    double eps2 = 0.0;
    for (double v : delta)
        eps2 += v * v;
    out.report.epsilon = std::sqrt(eps2);
    out.log_k.assign(n, kNegInf);
    out.fractions.assign(n, 0.0);
    if (!lo.feasible) {
        out.report.value = 0.0;
        out.report.ci = Interval{0.0, hi.feasible ? std::min(1.0, hi.value) : 0.0};
        return out;
    }
    out.full_prefix = lo.m1;
    out.tie_end = lo.m2;
    out.fractions = lo.fractions;
    out.report.value = std::min(1.0, lo.value);
    out.report.ci = Interval{out.report.value, std::min(1.0, std::max(lo.value, hi.value))};

    auto log_level_weight = [&](std::size_t sorted) {
        return log_support_volume(noises[order[sorted]]).value - log_v0.value;
    };
    if (lo.m2 > lo.m1) {
        // annuli m1+1..m2 sit exactly on the level, the prefix strictly above
        out.log_k[order[lo.m2 - 1]] = log_level_weight(lo.m2 - 1);
        if (lo.m1 > 0)
            out.log_k[order[lo.m1 - 1]] = log_level_weight(lo.m1 - 1);
    } else if (lo.m1 > 0) {
        out.log_k[order[lo.m1 - 1]] = std::log(2.0) + log_level_weight(lo.m1 - 1);
    }
    return out;
}

std::pair<NeymanPearsonSet, TieRule> selection_set(const PatternSelection& s,
                                                   std::span<const NoiseSpec> noises,
                                                   const NoiseSpec& q0, std::span<const double> delta)
{
    std::vector<WeightedNoise> weights;
    for (std::size_t i = 0; i < noises.size(); ++i)
        weights.push_back({s.log_k[i], noises[i]});
    NeymanPearsonSet set(q0.shifted(delta), std::move(weights));

    std::vector<double> radii;
    for (const NoiseSpec& q : noises)
        radii.push_back(q.scale);
    std::sort(radii.begin(), radii.end());
    const bool box = !noises.empty() && noises[0].family == NoiseFamily::uniform_linf_box;
    const Point center = noises.empty() ? q0.center : noises[0].center;
    std::vector<double> fractions = s.fractions;
    TieRule rule = [radii, fractions, box, center](std::span<const double> z) {
        double dist = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) {
            const double t = std::fabs(z[i] - center[i]);
            dist = box ? std::max(dist, t) : dist + t * t;
        }
        if (!box)
            dist = std::sqrt(dist);
        for (std::size_t j = 0; j < radii.size(); ++j)
            if (dist <= radii[j])
                return fractions[j];
        return 0.0;
    };
    return {std::move(set), std::move(rule)};
}

} // namespace smoothcert
