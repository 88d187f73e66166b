#include "spmdlens/cli.hpp"

#include "spmdlens/error.hpp"
#include "spmdlens/pipeline.hpp"
#include "spmdlens/rough_set.hpp"
#include "spmdlens/synth.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace spmdlens {

namespace {

class IoError : public Error {
public:
    using Error::Error;
};

std::string read_file(const std::string& path)
{
    if (!std::filesystem::exists(path))
        throw IoError("file not found: " + path);
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text))
        throw IoError("cannot write " + path);
}

void emit(std::ostream& out, const std::string& text, const std::string& path)
{
    if (path.empty())
        out << text;
    else
        write_file(path, text);
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Bottleneck localisation and root-cause analysis for SPMD profiles", "spmdlens"};
    app.require_subcommand(1);

    AnalysisConfig config;
    std::string profile_path;
    std::string out_path;
    bool as_json = false;

    auto* analyze_cmd = app.add_subcommand("analyze", "Run the full analysis and print the report");
    analyze_cmd->add_option("profile", profile_path, "Profile document")->required();
    analyze_cmd->add_option("--threshold-fraction", config.density.threshold_fraction,
                            "Neighbourhood radius as a fraction of the seed vector length")
        ->capture_default_str();
    analyze_cmd->add_option("--count-threshold", config.density.count_threshold,
                            "Points a seed needs strictly more than to form a cluster")
        ->capture_default_str();
    analyze_cmd->add_option("--out", out_path, "Write the output here instead of standard output");
    analyze_cmd->add_flag("--json", as_json, "Emit the machine-readable result document");

    std::string spec_path;
    std::uint64_t seed = 0;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic profile from a spec");
    synth_cmd->add_option("spec", spec_path, "Synth spec document")->required();
    synth_cmd->add_option("--seed", seed, "Noise seed")->required();
    synth_cmd->add_option("--out", out_path, "Profile document to write")->required();

    bool demo = false;
    auto* tables_cmd = app.add_subcommand("tables", "Print decision tables and discernibility matrices");
    tables_cmd->add_option("profile", profile_path, "Profile document");
    tables_cmd->add_flag("--demo", demo, "Use the built-in four-entry weather table");
    tables_cmd->add_option("--threshold-fraction", config.density.threshold_fraction)->capture_default_str();
    tables_cmd->add_option("--count-threshold", config.density.count_threshold)->capture_default_str();

    std::string result_path;
    auto* render_cmd = app.add_subcommand("render", "Re-render the text report from a result document");
    render_cmd->add_option("result", result_path, "Result document from analyze --json")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*analyze_cmd) {
            config.validate();
            const auto result = analyze(ingest_profile(read_file(profile_path)), config);
            emit(out, as_json ? result_to_json(result) : render_report(result), out_path);
        } else if (*synth_cmd) {
            const auto spec = parse_synth_spec(read_file(spec_path));
            const auto profile = generate(spec, seed);
            write_file(out_path, emit_fixture(profile));
            out << "wrote " << out_path << ": " << profile.process_count() << " processes, "
                << profile.region_count() << " regions, " << spec.injections.size() << " injections, seed " << seed
                << '\n';
        } else if (*tables_cmd) {
            if (demo) {
                const auto table = demo_table();
                const auto core = extract_core(build_discernibility(table));
                std::string cores;
                for (std::size_t i = 0; i < core.cores.size(); ++i)
                    cores += (i ? " or " : "") + format_attribute_set(core.cores[i]);
                out << "Decision table\n"
                    << render_table(table) << "\nDiscernibility matrix\n"
                    << render_matrix(build_discernibility(table)) << "\ncore: " << cores << '\n';
            } else {
                if (profile_path.empty()) {
                    err << "tables: a profile path or --demo is required\n";
                    return kExitUsage;
                }
                out << render_tables(ingest_profile(read_file(profile_path)), config);
            }
        } else if (*render_cmd) {
            out << render_report(result_from_json(read_file(result_path)));
        }
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return kExitParse;
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const AnalysisError& e) {
        err << "analysis error: " << e.what() << '\n';
        return kExitAnalysis;
    } catch (const std::ios_base::failure& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    }
    return kExitOk;
}

} // namespace spmdlens
