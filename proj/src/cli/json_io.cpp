#include "smoothcert/json_io.hpp"

#include <algorithm>
#include <cmath>

namespace smoothcert {

using nlohmann::json;

namespace {

std::string_view orientation_name(Orientation o)
{
    return o == Orientation::class1_inside ? "class1-inside" : "class1-outside";
}

Orientation parse_orientation(const json& j, Orientation fallback)
{
    const std::string s = optional_field<std::string>(j, "orientation", std::string(orientation_name(fallback)));
    if (s == "class1-inside")
        return Orientation::class1_inside;
    if (s == "class1-outside")
        return Orientation::class1_outside;
    throw DescriptorError("/orientation", "expected class1-inside or class1-outside, got " + s);
}

} // namespace

DescriptorError::DescriptorError(std::string field, const std::string& what, int line)
    : DomainError(field.empty() ? what : field + ": " + what), field_(std::move(field)), line_(line)
{
}

json parse_descriptor(std::string_view text)
{
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        const auto upto = std::min<std::size_t>(e.byte, text.size());
        const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + upto, '\n'));
        throw DescriptorError("", e.what(), line);
    }
}

std::string_view to_string(OutputFormat f) noexcept
{
    return f == OutputFormat::csv ? "csv" : "json";
}

OutputFormat parse_output_format(std::string_view s)
{
    if (s == "csv")
        return OutputFormat::csv;
    if (s == "json")
        return OutputFormat::json;
    throw DescriptorError("/output/format", "expected csv or json, got " + std::string(s));
}

void to_json(json& j, const Interval& v)
{
    j = json::array({v.lower, v.upper});
}

void from_json(const json& j, Interval& v)
{
    if (!j.is_array() || j.size() != 2)
        throw DescriptorError("", "interval must be [lower, upper]");
    v.lower = j[0].get<double>();
    v.upper = j[1].get<double>();
}

void to_json(json& j, const BinomialEstimate& v)
{
    j = {{"successes", v.successes}, {"trials", v.trials}, {"p_hat", v.p_hat}, {"ci", v.ci}};
}

void to_json(json& j, const MonteCarloConfig& v)
{
    j = {{"samples", v.samples}, {"confidence", v.confidence}, {"seed", v.seed}, {"streams", v.streams}};
}

void from_json(const json& j, MonteCarloConfig& v)
{
    const MonteCarloConfig defaults;
    v.samples = optional_field<std::uint64_t>(j, "samples", defaults.samples, "/mc");
    v.confidence = optional_field<double>(j, "confidence", defaults.confidence, "/mc");
    v.seed = optional_field<std::uint64_t>(j, "seed", defaults.seed, "/mc");
    v.streams = optional_field<unsigned>(j, "streams", defaults.streams, "/mc");
    try {
        v.validate();
    } catch (const DomainError& e) {
        throw DescriptorError("/mc", e.what());
    }
}

void to_json(json& j, const NoiseSpec& v)
{
    j = {{"family", std::string(to_string(v.family))}, {"center", v.center}, {"scale", v.scale}};
}

void from_json(const json& j, NoiseSpec& v)
{
    const std::string family = require<std::string>(j, "family", "/noise");
    const auto f = parse_noise_family(family);
    if (!f)
        throw DescriptorError("/noise/family", "unknown noise family " + family);
    v.family = *f;
    v.center = require<std::vector<double>>(j, "center", "/noise");
    v.scale = require<double>(j, "scale", "/noise");
    try {
        v.validate();
    } catch (const std::exception& e) {
        throw DescriptorError("/noise", e.what());
    }
}

void to_json(json& j, const DecisionRegion& v)
{
    j = json::object();
    j["tag"] = v.tag();
    if (const auto* c = std::get_if<Cone>(&v.shape)) {
        j["c"] = c->peak_offset;
        j["theta"] = c->angle;
    } else if (const auto* h = std::get_if<HalfSpace>(&v.shape)) {
        j["c"] = h->offset;
    } else if (const auto* p = std::get_if<PiecewiseLinear2>(&v.shape)) {
        j["c"] = p->offset;
        j["theta"] = p->angle;
    } else if (const auto* g = std::get_if<GridRegion>(&v.shape)) {
        j["origin"] = g->origin;
        j["step"] = g->step;
        j["cells"] = json::array();
        for (const CellIndex& cell : g->active_cells)
            j["cells"].push_back(cell);
    } else if (const auto* c = std::get_if<ComplementRegion>(&v.shape)) {
        j["inner"] = *c->inner;
    }
    j["orientation"] = orientation_name(v.orientation);
    if (v.dim)
        j["d"] = *v.dim;
}

void from_json(const json& j, DecisionRegion& v)
{
    const std::string tag = require<std::string>(j, "tag", "/region");
    try {
        if (tag == "cone") {
            v = DecisionRegion::cone(require<double>(j, "c", "/region"), require<double>(j, "theta", "/region"),
                                     parse_orientation(j, Orientation::class1_outside));
        } else if (tag == "half-space") {
            v = DecisionRegion::half_space(require<double>(j, "c", "/region"),
                                           parse_orientation(j, Orientation::class1_outside));
        } else if (tag == "piecewise-linear-2") {
            v = DecisionRegion::piecewise_linear(require<double>(j, "c", "/region"),
                                                 require<double>(j, "theta", "/region"),
                                                 parse_orientation(j, Orientation::class1_outside));
        } else if (tag == "grid-union") {
            GridRegion g;
            g.origin = require<std::vector<double>>(j, "origin", "/region");
            g.step = require<double>(j, "step", "/region");
            for (const CellIndex& cell : optional_field<std::vector<CellIndex>>(j, "cells", {}, "/region"))
                g.active_cells.insert(cell);
            v = DecisionRegion::grid(std::move(g), parse_orientation(j, Orientation::class1_inside));
        } else if (tag == "complement") {
            if (!j.contains("inner"))
                throw DescriptorError("/region/inner", "missing field");
            v = DecisionRegion::complement_of(j.at("inner").get<DecisionRegion>(),
                                              parse_orientation(j, Orientation::class1_inside));
        } else {
            throw DescriptorError("/region/tag", "unknown region tag " + tag);
        }
    } catch (const DescriptorError&) {
        throw;
    } catch (const std::exception& e) {
        throw DescriptorError("/region", e.what());
    }
    if (j.contains("d"))
        v.dim = require<int>(j, "d", "/region");
}

void to_json(json& j, const CertificateReport& v)
{
    j = {{"value", v.value},
         {"method", std::string(to_string(v.method))},
         {"ci", v.ci ? json(*v.ci) : json(nullptr)},
         {"samples", v.samples},
         {"seed", v.seed},
         {"epsilon", v.epsilon},
         {"theta_m", v.theta_m ? json(*v.theta_m) : json(nullptr)}};
}

void from_json(const json& j, CertificateReport& v)
{
    v.value = require<double>(j, "value", "/report");
    const std::string method = require<std::string>(j, "method", "/report");
    const auto m = parse_certificate_method(method);
    if (!m)
        throw DescriptorError("/report/method", "unknown method " + method);
    v.method = *m;
    v.ci = j.contains("ci") && !j.at("ci").is_null() ? std::optional<Interval>(j.at("ci").get<Interval>())
                                                      : std::nullopt;
    v.samples = optional_field<std::uint64_t>(j, "samples", 0, "/report");
    v.seed = optional_field<std::uint64_t>(j, "seed", 0, "/report");
    v.epsilon = require<double>(j, "epsilon", "/report");
    v.theta_m = j.contains("theta_m") && !j.at("theta_m").is_null()
                    ? std::optional<double>(j.at("theta_m").get<double>())
                    : std::nullopt;
}

void to_json(json& j, const RunSpec& v)
{
    j = {{"command", v.command},
         {"parameters", v.parameters},
         {"output", {{"path", v.output}, {"format", std::string(to_string(v.format))}}},
         {"mc", v.mc}};
}

void from_json(const json& j, RunSpec& v)
{
    if (!j.is_object())
        throw DescriptorError("", "run descriptor must be an object");
    v.command = optional_field<std::string>(j, "command", v.command);
    if (j.contains("parameters")) {
        if (!j.at("parameters").is_object())
            throw DescriptorError("/parameters", "must be an object");
        v.parameters = j.at("parameters");
    }
    if (j.contains("output")) {
        const json& out = j.at("output");
        v.output = optional_field<std::string>(out, "path", v.output, "/output");
        if (out.contains("format"))
            v.format = parse_output_format(require<std::string>(out, "format", "/output"));
    }
    if (j.contains("mc"))
        v.mc = j.at("mc").get<MonteCarloConfig>();
}

} // namespace smoothcert
