#include "smoothcert/errors.hpp"
#include "smoothcert/np.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace smoothcert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ln q0(z - delta) - ln q1(z); the set is {statistic <= ln k1}
double log_ratio(const NoiseSpec& q0s, const NoiseSpec& q1, std::span<const double> z)
{
    const double a = log_density(q0s, z);
    if (a == -kInf)
        return -kInf;
    const double b = log_density(q1, z);
    if (b == -kInf)
        return kInf;
    return a - b;
}

bool below_threshold(double stat, double log_k, double tie_fraction, CounterRng& rng)
{
    if (stat < log_k)
        return true;
    if (stat > log_k)
        return false;
    return rng.uniform() < tie_fraction;
}

double dot(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

struct AxisFrame {
    Point center;     // common center x of the information noises
    Point axis;       // unit attack direction
    double epsilon;   // attack length
    double offset;    // sampling center along the axis
    double sigma;
};

AxisFrame reduced_frame(const NeymanPearsonSet& k, const NoiseSpec& sampling)
{
    const NoiseSpec& q0s = k.q0_shifted();
    if (!q0s.is_isotropic())
        throw IsotropyError("gaussian_reduced_probability: q0 must be isotropic");
    if (sampling.family != NoiseFamily::gaussian)
        throw IsotropyError("gaussian_reduced_probability: sampling noise must be Gaussian");
    const std::size_t d = k.dim();
    AxisFrame f;
    f.center = k.weights().empty() ? sampling.center : k.weights().front().noise.center;
    for (const WeightedNoise& w : k.weights()) {
        if (w.noise.family != NoiseFamily::gaussian)
            throw IsotropyError("gaussian_reduced_probability: information noises must be Gaussian");
        for (std::size_t i = 0; i < d; ++i)
            if (std::fabs(w.noise.center[i] - f.center[i]) > 1e-12)
                throw GeometryError("gaussian_reduced_probability: information noises must share a center");
    }
    Point a(d);
    for (std::size_t i = 0; i < d; ++i)
        a[i] = q0s.center[i] - f.center[i];
    f.epsilon = std::sqrt(dot(a, a));
    f.axis.assign(d, 0.0);
    if (f.epsilon > 0.0)
        for (std::size_t i = 0; i < d; ++i)
            f.axis[i] = a[i] / f.epsilon;
    else
        f.axis[0] = 1.0;

    Point o(d);
    for (std::size_t i = 0; i < d; ++i)
        o[i] = sampling.center[i] - f.center[i];
    f.offset = dot(o, f.axis);
    for (std::size_t i = 0; i < d; ++i)
        if (std::fabs(o[i] - f.offset * f.axis[i]) > 1e-12)
            throw GeometryError("gaussian_reduced_probability: sampling center off the attack axis");
    f.sigma = sampling.scale;
    return f;
}

} // namespace

KFit fit_k_bisection(const NoiseSpec& q0, std::span<const double> delta, const NoiseSpec& q1,
                     double target, const MonteCarloConfig& mc, double tol)
{
    mc.validate();
    if (!(target >= 0.0 && target <= 1.0))
        throw DomainError("fit_k_bisection: target outside [0, 1]");
    if (q0.dim() != q1.dim() || delta.size() != q0.dim())
        throw GeometryError("fit_k_bisection: dimension mismatch");
    const NoiseSpec q0s = q0.shifted(delta);
    const std::size_t d = q0.dim();

    const MonteCarloConfig fit_cfg = mc.derived(1);
    const std::uint64_t n = fit_cfg.samples;
    std::vector<double> stats(n);
    (void)sum_over_samples(fit_cfg, [&](CounterRng& rng, std::uint64_t i) {
        thread_local std::vector<double> z;
        z.resize(d);
        sample(q1, rng, z);
        stats[i] = log_ratio(q0s, q1, z);
        return 0;
    });
    std::sort(stats.begin(), stats.end());

    // p(x, Phi_K, q1) as a function of ln k is the empirical CDF of the
    // statistic; binary search on the sorted values is exact bisection
    const double want = target * static_cast<double>(n);
    const auto idx = static_cast<std::uint64_t>(std::floor(want));
    KFit fit;
    if (idx >= n) {
        fit.log_k = kInf;
        fit.tie_fraction = 1.0;
    } else {
        const double t = stats[idx];
        const auto lower = std::lower_bound(stats.begin(), stats.end(), t);
        const auto upper = std::upper_bound(stats.begin(), stats.end(), t);
        const double strict = static_cast<double>(lower - stats.begin());
        const double ties = static_cast<double>(upper - lower);
        if (t == -kInf) {
            throw NonBracketingError("fit_k_bisection: target below the mass that is always in S_K",
                                     ties / static_cast<double>(n));
        }
        fit.log_k = t;
        fit.tie_fraction = std::clamp((want - strict) / ties, 0.0, 1.0);
        const double achieved = (strict + fit.tie_fraction * ties) / static_cast<double>(n);
        if (std::fabs(achieved - target) > tol)
            throw NonBracketingError("fit_k_bisection: target not reached within tolerance", achieved);
    }

    auto member_under = [&](const NoiseSpec& q) {
        return [&, q](CounterRng& rng) {
            thread_local std::vector<double> z;
            z.resize(d);
            sample(q, rng, z);
            return below_threshold(log_ratio(q0s, q1, z), fit.log_k, fit.tie_fraction, rng);
        };
    };
    fit.constraint = estimate_bernoulli(mc.derived(3), member_under(q1));
    const BinomialEstimate cert = estimate_bernoulli(mc.derived(2), member_under(q0s));

    fit.report.method = CertificateMethod::np_lower;
    fit.report.value = cert.p_hat;
    fit.report.ci = cert.ci;
    fit.report.samples = mc.samples;
    fit.report.seed = mc.seed;
    fit.report.epsilon = std::sqrt(dot(delta, delta));
    return fit;
}

ReducedEstimate gaussian_reduced_probability(const NeymanPearsonSet& k, const NoiseSpec& sampling,
                                             const MonteCarloConfig& mc)
{
    const AxisFrame f = reduced_frame(k, sampling);
    const int d = static_cast<int>(k.dim());
    const NoiseSpec& q0s = k.q0_shifted();
    ReducedEstimate out;
    out.estimate = estimate_bernoulli(mc, [&](CounterRng& rng) {
        const double mu = f.offset + f.sigma * rng.normal();
        const double rho = d > 1 ? f.sigma * sample_chi(d - 1, rng) : 0.0;
        const double rho2 = rho * rho;
        const double lhs = log_density_radial(q0s, (mu - f.epsilon) * (mu - f.epsilon) + rho2);
        LogVolume rhs;
        for (const WeightedNoise& w : k.weights()) {
            if (w.log_k == -kInf)
                continue;
            if (w.log_k == kInf)
                return true;
            rhs = log_sum(rhs, LogVolume{w.log_k + log_density_radial(w.noise, mu * mu + rho2)});
        }
        return compare_log_densities(lhs, rhs.value) != NpSide::outside;
    });
    out.coordinate_evaluations = 2 * mc.samples;
    return out;
}

ReducedEstimate gaussian_full_probability(const NeymanPearsonSet& k, const NoiseSpec& sampling,
                                          const MonteCarloConfig& mc)
{
    ReducedEstimate out;
    out.estimate = np_set_probability(k, sampling, mc);
    out.coordinate_evaluations = sampling.dim() * mc.samples;
    return out;
}

} // namespace smoothcert
