// Regenerates the shipped fixture profiles, injection specs and the golden
// ST report under the given repository root.
#include "spmdlens/fixtures.hpp"
#include "spmdlens/pipeline.hpp"
#include "spmdlens/synth.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace spmdlens;

namespace {

void write(const fs::path& path, const std::string& text)
{
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    std::cout << "wrote " << path.string() << '\n';
}

} // namespace

int main(int argc, char** argv)
{
    if (argc != 2) {
        std::cerr << "usage: make_fixtures <repo-root>\n";
        return 2;
    }
    const fs::path root = argv[1];
    try {
        const auto st = fixtures::st_profile();
        write(root / "fixtures/st.json", emit_fixture(st));
        write(root / "fixtures/st_table2.json", emit_fixture(fixtures::st_profile(true)));
        write(root / "fixtures/npar1way.json", emit_fixture(fixtures::npar1way_profile()));

        write(root / "fixtures/specs/baseline.json", emit_synth_spec(fixtures::injection_baseline()));
        for (auto kind : {InjectionKind::LoadImbalance, InjectionKind::HighL2Miss, InjectionKind::HighDiskIo,
                          InjectionKind::HighNetIo, InjectionKind::HighInstructionCount})
            write(root / "fixtures/specs" / (std::string(to_string(kind)) + ".json"),
                  emit_synth_spec(fixtures::injection_spec(kind)));

        AnalysisConfig config;
        config.density.count_threshold = 1;
        write(root / "tests/golden/st_report.txt", render_report(analyze(st, config)));
    } catch (const std::exception& e) {
        std::cerr << "make_fixtures: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
