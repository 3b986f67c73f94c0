#pragma once

#include "smoothcert/certs.hpp"
#include "smoothcert/geom.hpp"
#include "smoothcert/mc.hpp"
#include "smoothcert/noise.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace smoothcert {

struct WeightedNoise {
    double log_k = 0.0; // -inf encodes k = 0
    NoiseSpec noise;
};

enum class NpSide { inside, tie, outside };

/**
 * S_K = {z : q0(z - delta) <= sum_i k_i q_i(z)}, compared in log space.
 * Points off the support of the attacked density are inside wherever the
 * right side is positive; where both vanish the point is a tie. Values
 * within a relative 1e-12 of each other are also reported as ties so that
 * randomized tests can split them.
 */
class NeymanPearsonSet {
public:
    NeymanPearsonSet(NoiseSpec q0_shifted, std::vector<WeightedNoise> weights);

    [[nodiscard]] const NoiseSpec& q0_shifted() const noexcept { return q0_shifted_; }
    [[nodiscard]] const std::vector<WeightedNoise>& weights() const noexcept { return weights_; }
    [[nodiscard]] std::size_t dim() const noexcept { return q0_shifted_.dim(); }

    // log of the right-hand side sum
    [[nodiscard]] double log_rhs(std::span<const double> z) const;
    [[nodiscard]] NpSide side(std::span<const double> z) const;
    [[nodiscard]] bool contains(std::span<const double> z) const { return side(z) != NpSide::outside; }

private:
    NoiseSpec q0_shifted_;
    std::vector<WeightedNoise> weights_;
};

[[nodiscard]] NpSide compare_log_densities(double lhs, double rhs) noexcept;

// probability that a point on the tie boundary counts as a member
using TieRule = std::function<double(std::span<const double>)>;

struct NpLowerBoundOptions {
    TieRule tie_fraction; // empty means ties are members
    // observed p(x, h, q_i) per weighted noise; checked when non-empty
    std::vector<Interval> verify_against;
};

/**
 * Monte Carlo estimate of p(x + delta, Phi_K, q0). A valid lower bound on
 * the multi-noise certificate once p(x, Phi_K, q_i) <= p(x, h, q_i) holds
 * for every i.
 */
[[nodiscard]] CertificateReport np_lower_bound(const NeymanPearsonSet& k, const NoiseSpec& q0,
                                               std::span<const double> delta,
                                               const MonteCarloConfig& mc,
                                               const NpLowerBoundOptions& options = {});

// p(x, Phi_K, q) with the same tie handling, for constraint checks
[[nodiscard]] BinomialEstimate np_set_probability(const NeymanPearsonSet& k, const NoiseSpec& q,
                                                  const MonteCarloConfig& mc,
                                                  const TieRule& tie_fraction = {});

// ---- uniform noises: combinatorial search -------------------------------

struct ActivationPattern {
    std::vector<bool> bits; // one per annulus, innermost first

    [[nodiscard]] std::size_t active_count() const noexcept;
    friend bool operator==(const ActivationPattern&, const ActivationPattern&) = default;
};

struct PatternCandidate {
    ActivationPattern pattern;
    std::vector<double> radii;          // sorted outer radii of the annuli
    std::vector<std::size_t> order;     // sorted position -> input index
    std::vector<double> unit_log_k;     // witness weights for a unit q0 density level
};

/**
 * For concentric uniform noises of one family the weighted density sum is
 * constant on the nested annuli and nonincreasing outward, so every
 * achievable Phi_K activates a prefix of annuli: n + 1 shapes in total.
 */
[[nodiscard]] std::vector<PatternCandidate> enumerate_uniform_patterns(std::span<const NoiseSpec> noises);

// witness weights shifted to the level 1/Vol(supp q0)
[[nodiscard]] std::vector<double> witness_log_k(const PatternCandidate& c, LogVolume log_v0);

struct PatternSelection {
    bool feasible = false;
    std::size_t full_prefix = 0;    // annuli 1..full_prefix fully activated
    std::size_t tie_end = 0;        // annuli full_prefix+1..tie_end on the tie boundary
    std::vector<double> fractions;  // activated fraction per annulus
    std::vector<double> log_k;      // input order
    CertificateReport report;
};

/**
 * Best Neyman-Pearson shape whose responses stay below the observed lower
 * bounds. The tie block is filled from the outermost annulus inward, which
 * is optimal because inner annuli enter more constraints. Cell masses are
 * exact (lens or box overlaps), so this needs q0 from the same family as
 * the information noises.
 */
[[nodiscard]] PatternSelection select_pattern(std::span<const PatternCandidate> candidates,
                                              std::span<const NoiseSpec> noises,
                                              std::span<const Interval> observed,
                                              const NoiseSpec& q0, std::span<const double> delta);

// NP-form classifier for a selection, for Monte Carlo cross-checks
[[nodiscard]] std::pair<NeymanPearsonSet, TieRule>
selection_set(const PatternSelection& s, std::span<const NoiseSpec> noises, const NoiseSpec& q0,
              std::span<const double> delta);

// ---- Gaussian information noises ----------------------------------------

struct KFit {
    double log_k = 0.0;
    double tie_fraction = 1.0;
    BinomialEstimate constraint;   // p(x, Phi_K, q1) on an independent sample
    CertificateReport report;
};

/**
 * Fits k1 so that p(x, Phi_K, q1) meets target from below, by bisection on
 * ln k1 over the sorted likelihood-ratio statistics of a q1 sample, with a
 * randomized tie at the final threshold.
 */
[[nodiscard]] KFit fit_k_bisection(const NoiseSpec& q0, std::span<const double> delta,
                                   const NoiseSpec& q1, double target, const MonteCarloConfig& mc,
                                   double tol = 1e-3);

struct ReducedEstimate {
    BinomialEstimate estimate;
    std::uint64_t coordinate_evaluations = 0;
};

/**
 * P[z in S_K] for z ~ sampling, with every weighted noise Gaussian at x and
 * q0 isotropic. By rotational symmetry about the attack axis only the axial
 * coordinate mu and the orthogonal radius rho = sigma * chi(d - 1) matter.
 */
[[nodiscard]] ReducedEstimate gaussian_reduced_probability(const NeymanPearsonSet& k,
                                                           const NoiseSpec& sampling,
                                                           const MonteCarloConfig& mc);
// the same probability by sampling all d coordinates
[[nodiscard]] ReducedEstimate gaussian_full_probability(const NeymanPearsonSet& k,
                                                        const NoiseSpec& sampling,
                                                        const MonteCarloConfig& mc);

// ---- grid approximation ----------------------------------------------------

struct GridOptions {
    // decide activation by 32 probe points instead of interval arithmetic
    bool sampled = false;
    // 64 extra directions in d <= 3 besides +-e1, +-e2
    bool direction_net = true;
};

struct GridCertificate {
    GridRegion grid;                       // activated cells
    std::map<CellIndex, double> responses; // per covered cell
    std::size_t covered_cells = 0;
    double value = 0.0;
    int level = 1;
    Point worst_attack;
    bool heuristic = false;
};

[[nodiscard]] std::vector<Point> attack_net(int d, double epsilon, bool direction_net);

[[nodiscard]] GridCertificate grid_certificate(const DecisionRegion& h, const NoiseSpec& q0,
                                               std::span<const double> x, double epsilon, int n,
                                               const GridOptions& options = {});

// ---- cones identified from two concentric noises --------------------------

// Vol(C(c, theta) ∩ B(r2) \ B(r1)) / Vol(B(r2))
[[nodiscard]] double cone_growth(double theta, double c, double r1, double r2, int d);

// growth implied by p = P[class 1] at radii r1 < r2 around the point
[[nodiscard]] double observed_growth(double p1, double p2, double r1, double r2, int d);

struct ConeAngleEstimate {
    double theta = 0.0;
    double growth = 0.0;
    double half_space_growth = 0.0;
};

[[nodiscard]] ConeAngleEstimate identify_cone_angle(double p1, double p2, double r1, double r2,
                                                    double c, int d, double tol = 1e-10);

struct OffsetBracket {
    double lower = 0.0;
    double upper = 0.0;
    double estimate = 0.0; // +inf when no radius saw class 0
};

/**
 * Brackets the peak offset between the largest radius whose noise saw only
 * class 1 and the smallest that saw class 0. The upper end is certain; the
 * lower end only says no class-0 sample was drawn.
 */
[[nodiscard]] OffsetBracket identify_cone_offset(const DecisionRegion& h, std::span<const double> x,
                                                 std::span<const double> radii,
                                                 const MonteCarloConfig& mc, double tol = 0.01);

// PC of the identified cone under the axis attack
[[nodiscard]] CertificateReport ncp_certificate(double theta, double c, double r, double epsilon, int d);

} // namespace smoothcert
