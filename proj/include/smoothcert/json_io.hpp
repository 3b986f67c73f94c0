#pragma once

#include "smoothcert/certs.hpp"
#include "smoothcert/errors.hpp"
#include "smoothcert/geom.hpp"
#include "smoothcert/mc.hpp"
#include "smoothcert/noise.hpp"

#include <json.hpp>

#include <string>
#include <string_view>

namespace smoothcert {

inline constexpr std::string_view kVersion = "0.1.0";

// Malformed run descriptor. field is a JSON pointer, line is 1-based or 0.
class DescriptorError : public DomainError {
public:
    DescriptorError(std::string field, const std::string& what, int line = 0);

    [[nodiscard]] const std::string& field() const noexcept { return field_; }
    [[nodiscard]] int line() const noexcept { return line_; }

private:
    std::string field_;
    int line_;
};

// parse text, mapping syntax errors to DescriptorError with a line number
[[nodiscard]] nlohmann::json parse_descriptor(std::string_view text);

enum class OutputFormat { csv, json };

[[nodiscard]] std::string_view to_string(OutputFormat f) noexcept;
[[nodiscard]] OutputFormat parse_output_format(std::string_view s);

struct RunSpec {
    std::string command;
    nlohmann::json parameters = nlohmann::json::object();
    std::string output = "-"; // "-" is standard output
    OutputFormat format = OutputFormat::json;
    MonteCarloConfig mc;

    friend bool operator==(const RunSpec& a, const RunSpec& b)
    {
        return a.command == b.command && a.parameters == b.parameters && a.output == b.output &&
               a.format == b.format && a.mc.samples == b.mc.samples &&
               a.mc.confidence == b.mc.confidence && a.mc.seed == b.mc.seed &&
               a.mc.streams == b.mc.streams;
    }
};

// field access with pointer-style diagnostics
template <class T>
T require(const nlohmann::json& j, const std::string& key, const std::string& path = "")
{
    const std::string where = path + "/" + key;
    if (!j.is_object() || !j.contains(key))
        throw DescriptorError(where, "missing field");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw DescriptorError(where, e.what());
    }
}

template <class T>
T optional_field(const nlohmann::json& j, const std::string& key, T fallback, const std::string& path = "")
{
    if (!j.is_object() || !j.contains(key) || j.at(key).is_null())
        return fallback;
    return require<T>(j, key, path);
}

void to_json(nlohmann::json& j, const Interval& v);
void from_json(const nlohmann::json& j, Interval& v);
void to_json(nlohmann::json& j, const BinomialEstimate& v);
void to_json(nlohmann::json& j, const MonteCarloConfig& v);
void from_json(const nlohmann::json& j, MonteCarloConfig& v);
void to_json(nlohmann::json& j, const NoiseSpec& v);
void from_json(const nlohmann::json& j, NoiseSpec& v);
void to_json(nlohmann::json& j, const DecisionRegion& v);
void from_json(const nlohmann::json& j, DecisionRegion& v);
void to_json(nlohmann::json& j, const CertificateReport& v);
void from_json(const nlohmann::json& j, CertificateReport& v);
void to_json(nlohmann::json& j, const RunSpec& v);
void from_json(const nlohmann::json& j, RunSpec& v);

} // namespace smoothcert
