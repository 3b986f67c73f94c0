#include "smoothcert/commands.hpp"

#include "smoothcert/axisym.hpp"
#include "smoothcert/np.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

namespace smoothcert {

using nlohmann::json;

namespace {

// k = 0 and unbounded offsets have no JSON number; null stands in
json finite_or_null(double v)
{
    return std::isfinite(v) ? json(v) : json(nullptr);
}

std::ostringstream csv_stream()
{
    std::ostringstream os;
    os << std::setprecision(17);
    return os;
}

DecisionRegion region_of(const json& p)
{
    if (!p.contains("region"))
        throw DescriptorError("/region", "missing field");
    return p.at("region").get<DecisionRegion>();
}

Point point_of(const json& p, const std::string& key, std::size_t d)
{
    Point x = optional_field<Point>(p, key, Point(d, 0.0));
    if (x.size() != d)
        throw DescriptorError("/" + key, "expected " + std::to_string(d) + " coordinates");
    return x;
}

bool on_axis(std::span<const double> x)
{
    for (std::size_t i = 1; i < x.size(); ++i)
        if (x[i] != 0.0)
            return false;
    return true;
}

// class-1 mass of the ball at x + epsilon e1; the exact PC for cones at the
// origin and half-spaces, where the axis attack is the worst one
std::optional<double> axis_pc(const DecisionRegion& h, const NoiseSpec& q0, std::span<const double> x,
                              double epsilon)
{
    const int d = static_cast<int>(x.size());
    if (q0.family != NoiseFamily::uniform_l2_ball || d < 2 || !on_axis(x) || !on_axis(q0.center))
        return std::nullopt;
    try {
        AxisymmetricSet set;
        set.inside_ball(x[0] + q0.center[0] + epsilon, q0.scale).class1(h);
        return std::min(1.0, axisymmetric_volume_fraction(set, d, log_ball_volume(d, q0.scale)));
    } catch (const GeometryError&) {
        return std::nullopt;
    }
}

std::string trend_name(Trend t)
{
    return std::string(to_string(t));
}

} // namespace

CommandResult run_underestimation(const json& p, const MonteCarloConfig& mc)
{
    const double epsilon = require<double>(p, "epsilon");
    const double r = require<double>(p, "r");
    const auto dims = optional_field<std::vector<int>>(p, "dims", {2});
    const double tm = theta_max(epsilon, r);
    std::vector<double> thetas = optional_field<std::vector<double>>(p, "thetas", {});
    if (thetas.empty()) {
        const int n = optional_field<int>(p, "theta_points", 10);
        if (n < 2)
            throw DescriptorError("/theta_points", "need at least 2 points");
        // both anchors, theta = 0 and theta = theta_m, are always present
        for (int i = 0; i < n; ++i)
            thetas.push_back(i + 1 == n ? tm : tm * i / (n - 1));
    }

    std::vector<UnderestimationRow> rows;
    std::uint64_t tag = 0;
    for (int d : dims) {
        for (double theta : thetas) {
            const MonteCarloConfig cfg = mc.derived(tag++);
            UnderestimationRow row;
            row.theta = theta;
            row.d = d;
            row.epsilon = epsilon;
            row.r = r;
            row.nu_closed = underestimation(theta, r, epsilon, d, std::nullopt).value;
            const Underestimation m = underestimation(theta, r, epsilon, d, cfg);
            row.nu_mc = m.value;
            row.ci_lo = m.ci->lower;
            row.ci_hi = m.ci->upper;
            row.samples = cfg.samples;
            row.seed = cfg.seed;
            rows.push_back(row);
        }
    }

    CommandResult out;
    out.result["rows"] = json::array();
    for (const UnderestimationRow& row : rows) {
        out.result["rows"].push_back({{"theta", row.theta},
                                      {"d", row.d},
                                      {"epsilon", row.epsilon},
                                      {"r", row.r},
                                      {"nu_closed", row.nu_closed},
                                      {"nu_mc", row.nu_mc},
                                      {"ci", Interval{row.ci_lo, row.ci_hi}},
                                      {"samples", row.samples},
                                      {"seed", row.seed}});
    }
    std::ostringstream os;
    write_underestimation_csv(os, rows);
    out.csv = os.str();
    return out;
}

CommandResult run_np_certify(const json& p, const MonteCarloConfig& mc)
{
    const DecisionRegion h = region_of(p);
    if (!p.contains("q0"))
        throw DescriptorError("/q0", "missing field");
    const NoiseSpec q0 = p.at("q0").get<NoiseSpec>();
    const std::size_t d = q0.dim();
    const Point x = point_of(p, "x", d);
    const double epsilon = require<double>(p, "epsilon");
    const auto noises = optional_field<std::vector<NoiseSpec>>(p, "information_noises", {});
    for (const NoiseSpec& q : noises)
        if (q.dim() != d)
            throw DescriptorError("/information_noises", "dimension differs from q0");

    CommandResult out;
    std::vector<Interval> observed;
    json observed_json = json::array();
    for (std::size_t i = 0; i < noises.size(); ++i) {
        const BinomialEstimate e = smoothed_probability(h, noises[i], x, mc.derived(10 + i));
        observed.push_back(e.ci);
        observed_json.push_back(e);
    }
    out.result["observed"] = observed_json;

    std::optional<CertificateReport> nc;
    if (q0.family == NoiseFamily::uniform_l2_ball && d >= 2) {
        try {
            nc = nc_single_uniform(h, q0.scale, x, epsilon, std::nullopt);
        } catch (const GeometryError&) {
            nc = nc_single_uniform(h, q0.scale, x, epsilon, mc.derived(1));
        }
    }
    out.result["nc"] = nc ? json(*nc) : json(nullptr);

    // ball noises are rotation invariant, so one attack direction suffices
    std::vector<Point> attacks = q0.family == NoiseFamily::uniform_l2_ball
                                     ? std::vector<Point>{attack_net(static_cast<int>(d), epsilon, false)[0]}
                                     : attack_net(static_cast<int>(d), epsilon, true);
    const std::vector<PatternCandidate> candidates = enumerate_uniform_patterns(noises);
    std::optional<PatternSelection> best;
    Point worst;
    for (const Point& delta : attacks) {
        PatternSelection s = select_pattern(candidates, noises, observed, q0, delta);
        if (!best || s.report.value < best->report.value) {
            best = std::move(s);
            worst = delta;
        }
    }
    best->report.samples = mc.samples;
    best->report.seed = mc.seed;
    json k_log = json::array();
    for (double v : best->log_k)
        k_log.push_back(finite_or_null(v));
    out.result["np"] = best->report;
    out.result["feasible"] = best->feasible;
    out.result["pattern"] = {{"full_prefix", best->full_prefix},
                             {"tie_end", best->tie_end},
                             {"fractions", best->fractions}};
    out.result["k_log"] = k_log;
    out.result["attack"] = worst;

    const std::optional<double> pc = axis_pc(h, q0, x, epsilon);
    out.result["pc"] = pc ? json(*pc) : json(nullptr);
    const double np = best->report.value;
    const Interval np_ci = best->report.ci.value_or(Interval{np, np});
    json ordering = json::object();
    json gap = json::object();
    if (nc) {
        const Interval nc_ci = nc->ci.value_or(Interval{nc->value, nc->value});
        ordering["nc_le_np"] = nc_ci.lower <= np_ci.upper + 1e-12;
        gap["np_minus_nc"] = np - nc->value;
    }
    if (pc) {
        ordering["np_le_pc"] = np <= *pc + 1e-9;
        gap["pc_minus_np"] = *pc - np;
    }
    out.result["ordering"] = ordering;
    out.result["gap"] = gap;
    if (!best->feasible)
        out.exit_code = kExitInfeasible;
    return out;
}

CommandResult run_grid(const json& p)
{
    const DecisionRegion h = region_of(p);
    const int d = optional_field<int>(p, "d", h.dim.value_or(2));
    const Point x = point_of(p, "x", static_cast<std::size_t>(d));
    const double r = require<double>(p, "r");
    const double epsilon = require<double>(p, "epsilon");
    const auto levels = optional_field<std::vector<int>>(p, "levels", {4, 8, 16, 32});
    GridOptions opts;
    opts.sampled = optional_field<bool>(p, "sampled", false);
    opts.direction_net = optional_field<bool>(p, "direction_net", true);
    const NoiseSpec q0 = NoiseSpec::uniform_box(Point(static_cast<std::size_t>(d), 0.0), r);

    CommandResult out;
    out.result["rows"] = json::array();
    std::ostringstream os = csv_stream();
    os << "n,value,covered_cells,activated_cells,heuristic\n";
    for (int n : levels) {
        const GridCertificate g = grid_certificate(h, q0, x, epsilon, n, opts);
        out.result["rows"].push_back({{"n", n},
                                      {"value", g.value},
                                      {"covered_cells", g.covered_cells},
                                      {"activated_cells", g.grid.active_cells.size()},
                                      {"heuristic", g.heuristic},
                                      {"worst_attack", g.worst_attack}});
        os << n << ',' << g.value << ',' << g.covered_cells << ',' << g.grid.active_cells.size() << ','
           << (g.heuristic ? "true" : "false") << '\n';
    }
    out.csv = os.str();
    return out;
}

CommandResult run_zeta(const json& p, const MonteCarloConfig& mc)
{
    const DecisionRegion h = region_of(p);
    const double r0 = require<double>(p, "r0");
    const double r1 = require<double>(p, "r1");
    std::vector<Point> points = optional_field<std::vector<Point>>(p, "points", {});
    if (p.contains("synthetic")) {
        // uniform draws in a box around a center
        const json& s = p.at("synthetic");
        const auto count = require<std::size_t>(s, "count", "/synthetic");
        const Point center = require<Point>(s, "center", "/synthetic");
        const double spread = require<double>(s, "spread", "/synthetic");
        CounterRng rng(derive_seed(mc.seed, 0x7a657461), 0);
        for (std::size_t i = 0; i < count; ++i) {
            Point x(center.size());
            for (std::size_t k = 0; k < x.size(); ++k)
                x[k] = center[k] + spread * (2.0 * rng.uniform() - 1.0);
            points.push_back(std::move(x));
        }
    }
    if (points.empty())
        throw DescriptorError("/points", "dataset is empty");

    const ZetaResult z = zeta_probe(h, points, r0, r1, mc);
    CommandResult out;
    out.result["label"] = optional_field<std::string>(p, "label", "synthetic");
    out.result["zeta"] = z.zeta;
    out.result["decreasing_fraction"] = z.decreasing_fraction;
    out.result["undetermined_fraction"] = z.undetermined_fraction;
    out.result["rows"] = json::array();
    std::ostringstream os = csv_stream();
    os << "index,x,p_r0,ci_r0_lo,ci_r0_hi,p_r1,ci_r1_lo,ci_r1_hi,trend\n";
    for (std::size_t i = 0; i < z.rows.size(); ++i) {
        const ZetaRow& row = z.rows[i];
        out.result["rows"].push_back(
            {{"x", row.x}, {"at_r0", row.at_r0}, {"at_r1", row.at_r1}, {"trend", trend_name(row.trend)}});
        os << i << ',';
        for (std::size_t k = 0; k < row.x.size(); ++k)
            os << (k ? ";" : "") << row.x[k];
        os << ',' << row.at_r0.p_hat << ',' << row.at_r0.ci.lower << ',' << row.at_r0.ci.upper << ','
           << row.at_r1.p_hat << ',' << row.at_r1.ci.lower << ',' << row.at_r1.ci.upper << ','
           << trend_name(row.trend) << '\n';
    }
    out.csv = os.str();
    return out;
}

CommandResult run_identify_cone(const json& p, const MonteCarloConfig& mc)
{
    const DecisionRegion h = region_of(p);
    const int d = require<int>(p, "d");
    const double r1 = require<double>(p, "r1");
    const double r2 = require<double>(p, "r2");
    const double r = require<double>(p, "r");
    const double epsilon = require<double>(p, "epsilon");
    const Point x(static_cast<std::size_t>(d), 0.0);

    CommandResult out;
    double c = 0.0;
    if (p.contains("c")) {
        c = require<double>(p, "c");
    } else {
        const auto radii = require<std::vector<double>>(p, "radii");
        const OffsetBracket b =
            identify_cone_offset(h, x, radii, mc.derived(100), optional_field<double>(p, "offset_tol", 0.01));
        out.result["offset"] = {{"lower", b.lower},
                                {"upper", finite_or_null(b.upper)},
                                {"estimate", finite_or_null(b.estimate)}};
        if (!std::isfinite(b.estimate))
            throw InconsistencyError("identify-cone: no class-0 sample at any radius; h looks constant");
        c = b.estimate;
    }
    const Point origin(x.size(), 0.0);
    const BinomialEstimate p1 = smoothed_probability(h, NoiseSpec::uniform_ball(origin, r1), x, mc.derived(1));
    const BinomialEstimate p2 = smoothed_probability(h, NoiseSpec::uniform_ball(origin, r2), x, mc.derived(2));
    const ConeAngleEstimate a = identify_cone_angle(p1.p_hat, p2.p_hat, r1, r2, c, d);
    out.result["c"] = c;
    out.result["p1"] = p1;
    out.result["p2"] = p2;
    out.result["angle"] = {{"theta", a.theta}, {"growth", a.growth}, {"half_space_growth", a.half_space_growth}};
    out.result["ncp"] = ncp_certificate(a.theta, c, r, epsilon, d);
    return out;
}

CommandResult run_specfun_check()
{
    struct Check {
        std::string name;
        double value;
        double expected;
        double tol;
    };
    const std::vector<Check> checks = {
        {"crescent_fraction(d=3,eps=r=1)", crescent_fraction(3, 1.0, 1.0), 0.6875, 1e-12},
        {"log_ball_volume(784,1)", log_ball_volume(784, 1.0).value, -1503.90, 0.01},
        {"reg_inc_beta(0.5,2,3)", reg_inc_beta(0.5, 2.0, 3.0), 0.6875, 1e-14},
        {"log_gamma(0.5)", log_gamma(0.5), 0.5 * std::log(std::numbers::pi), 1e-14},
        {"theta_max(eps=1,r=1)", theta_max(1.0, 1.0), std::numbers::pi / 3.0, 1e-15},
    };
    CommandResult out;
    out.result["rows"] = json::array();
    std::ostringstream os = csv_stream();
    os << "name,value,expected,abs_error,pass\n";
    bool all = true;
    for (const Check& c : checks) {
        const double err = std::fabs(c.value - c.expected);
        const bool pass = err <= c.tol;
        all = all && pass;
        out.result["rows"].push_back({{"name", c.name},
                                      {"value", c.value},
                                      {"expected", c.expected},
                                      {"abs_error", err},
                                      {"pass", pass}});
        os << c.name << ',' << c.value << ',' << c.expected << ',' << err << ',' << (pass ? "true" : "false")
           << '\n';
    }
    out.result["all_pass"] = all;
    out.csv = os.str();
    return out;
}

RunOutput execute(const RunSpec& spec)
{
    spec.mc.validate();
    const auto start = std::chrono::steady_clock::now();
    CommandResult res;
    bool tabular = true;
    const json& p = spec.parameters;
    if (spec.command == "underestimation") {
        res = run_underestimation(p, spec.mc);
    } else if (spec.command == "np-certify") {
        res = run_np_certify(p, spec.mc);
        tabular = false;
    } else if (spec.command == "grid-approx") {
        res = run_grid(p);
    } else if (spec.command == "zeta-probe") {
        res = run_zeta(p, spec.mc);
    } else if (spec.command == "identify-cone") {
        res = run_identify_cone(p, spec.mc);
        tabular = false;
    } else if (spec.command == "specfun-check") {
        res = run_specfun_check();
    } else {
        throw DescriptorError("/command", "unknown command " + spec.command);
    }
    if (spec.format == OutputFormat::csv && !tabular)
        throw DescriptorError("/output/format", spec.command + " only supports json");
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    RunOutput out;
    out.exit_code = res.exit_code;
    out.record = {{"command", spec.command},
                  {"version", std::string(kVersion)},
                  {"seed", spec.mc.seed},
                  {"samples", spec.mc.samples},
                  {"confidence", spec.mc.confidence},
                  {"streams", spec.mc.streams},
                  {"parameters", spec.parameters},
                  {"duration_s", seconds}};
    if (spec.format == OutputFormat::csv)
        out.payload = res.csv;
    else
        out.payload = json{{"run", out.record}, {"result", res.result}}.dump(2) + "\n";
    return out;
}

json without_duration(json payload)
{
    if (payload.contains("run"))
        payload["run"].erase("duration_s");
    payload.erase("duration_s");
    return payload;
}

} // namespace smoothcert
