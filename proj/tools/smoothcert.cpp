#include "smoothcert/commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using nlohmann::json;
using namespace smoothcert;

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw DescriptorError("", "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& body)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw DescriptorError("/output/path", "cannot write " + path);
    out << body;
}

int report_error(const char* kind, const std::string& message, int code, const std::string& field = "",
                 int line = 0)
{
    json e = {{"error", kind}, {"message", message}};
    if (!field.empty())
        e["field"] = field;
    if (line > 0)
        e["line"] = line;
    std::cerr << e.dump() << '\n';
    return code;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Certificates for randomized smoothing of geometric classifiers"};
    app.set_version_flag("--version", std::string(kVersion));

    std::string command;
    std::string config_path;
    std::string params_path;
    std::string out_path;
    std::string format;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    unsigned streams = 0;
    double confidence = 0.0;

    app.add_option("command", command, "underestimation | np-certify | grid-approx | zeta-probe | "
                                       "identify-cone | specfun-check")
        ->check(CLI::IsMember({"underestimation", "np-certify", "grid-approx", "zeta-probe", "identify-cone",
                               "specfun-check"}));
    app.add_option("--config", config_path, "JSON run descriptor; flags override its fields");
    app.add_option("--params", params_path, "JSON file with the command parameters");
    auto* out_opt = app.add_option("--out", out_path, "output file, - for standard output");
    auto* fmt_opt = app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    auto* samples_opt = app.add_option("--samples", samples, "Monte Carlo samples per estimate");
    auto* seed_opt = app.add_option("--seed", seed, "master seed");
    auto* streams_opt = app.add_option("--streams", streams, "independent sample streams");
    auto* conf_opt = app.add_option("--confidence", confidence, "Clopper-Pearson confidence level");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report_error("validation", e.what(), kExitValidation);
    }

    try {
        RunSpec spec;
        if (!config_path.empty())
            spec = parse_descriptor(read_file(config_path)).get<RunSpec>();
        if (!command.empty())
            spec.command = command;
        if (spec.command.empty())
            throw DescriptorError("/command", "no command given");
        if (!params_path.empty()) {
            spec.parameters = parse_descriptor(read_file(params_path));
            if (!spec.parameters.is_object())
                throw DescriptorError("/parameters", "must be an object");
        }
        if (*out_opt)
            spec.output = out_path;
        if (*fmt_opt)
            spec.format = parse_output_format(format);
        if (*samples_opt)
            spec.mc.samples = samples;
        if (*seed_opt)
            spec.mc.seed = seed;
        if (*streams_opt)
            spec.mc.streams = streams;
        if (*conf_opt)
            spec.mc.confidence = confidence;

        const RunOutput out = execute(spec);
        if (spec.output == "-") {
            std::cout << out.payload;
        } else {
            write_file(spec.output, out.payload);
            if (spec.format == OutputFormat::csv)
                write_file(spec.output + ".run.json", out.record.dump(2) + "\n");
        }
        return out.exit_code;
    } catch (const DescriptorError& e) {
        return report_error("validation", e.what(), kExitValidation, e.field(), e.line());
    } catch (const DomainError& e) {
        return report_error("validation", e.what(), kExitValidation);
    } catch (const GeometryError& e) {
        return report_error("validation", e.what(), kExitValidation);
    } catch (const InfeasibleError& e) {
        return report_error("infeasible", e.what(), kExitInfeasible);
    } catch (const std::exception& e) {
        return report_error("internal", e.what(), 1);
    }
}
