#pragma once

#include "spmdlens/profile.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace spmdlens {

/// SplitMix64 stream; uniform() takes the top 53 bits.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();
    /// Uniform in [0, 1).
    double uniform();

private:
    std::uint64_t state_;
};

/// Exclusive (own-code) behaviour of one region in one process.
struct CellParams {
    double wall_time = 0.0;
    double cpu_time = 0.0;
    double cpi = 1.0;
    double l1_miss_rate = 0.0;
    double l2_miss_rate = 0.0;
    double l1_refs_per_instruction = 0.4;
    double l2_refs_per_instruction = 0.05;
    double disk_io_bytes = 0.0;
    double net_io_bytes = 0.0;

    bool operator==(const CellParams&) const = default;
};

/// Turns exclusive per-cell parameters (row-major, rank * n + index) into
/// integral counts and aggregates them inclusively up the tree. Each
/// process's program wall time is its depth-1 wall total plus `serial_time`.
Profile assemble_profile(std::vector<RegionDecl> regions, std::span<const CellParams> exclusive,
                         std::size_t processes, double clock_hz, std::span<const double> serial_time);

enum class InjectionKind { LoadImbalance, HighL2Miss, HighDiskIo, HighNetIo, HighInstructionCount };

std::string_view to_string(InjectionKind kind);
/// Accepts the snake_case names produced by to_string.
InjectionKind injection_kind_from_string(std::string_view name);

struct Injection {
    InjectionKind kind = InjectionKind::LoadImbalance;
    std::uint32_t region = 0;
    double factor = 3.0;
    /// Absolute miss rate or byte count replacing the scaled baseline.
    std::optional<double> value;
    /// Empty means every rank, except for LoadImbalance where it means the
    /// upper half of the ranks.
    std::vector<std::size_t> ranks;

    bool operator==(const Injection&) const = default;
};

struct RegionBaseline {
    std::uint32_t id = 0;
    std::string name;
    std::optional<std::uint32_t> parent;
    CellParams own;

    bool operator==(const RegionBaseline&) const = default;
};

struct SynthSpec {
    std::size_t processes = 1;
    double clock_hz = 2e9;
    double serial_time = 0.0;
    /// Half-width of the uniform multiplicative noise, 0.01 for +-1%.
    double noise = 0.01;
    std::vector<RegionBaseline> regions;
    std::vector<Injection> injections;

    /// Throws ValidationError on out-of-range fields or dangling references.
    void validate() const;
    bool operator==(const SynthSpec&) const = default;
};

/// Throws ParseError or ValidationError.
SynthSpec parse_synth_spec(std::string_view document);
std::string emit_synth_spec(const SynthSpec& spec);

/// Deterministic in (spec, seed). Noise factors are drawn per rank, per
/// region in id order, per parameter; injections apply after the noise.
Profile generate(const SynthSpec& spec, std::uint64_t seed);

/// Profile document that ingest_profile reads back to an equal Profile.
std::string emit_fixture(const Profile& profile);

} // namespace spmdlens
