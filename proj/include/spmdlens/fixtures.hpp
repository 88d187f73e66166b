#pragma once

#include "spmdlens/profile.hpp"
#include "spmdlens/synth.hpp"

#include <string>

namespace spmdlens::fixtures {

/// Severity the ST fixture's CPU-time vectors are tuned to.
inline constexpr double kStSeverity = 0.783958;

/// Fourteen-region, eight-process ST-like profile. Region 11 carries the
/// load imbalance (five process groups) and the L2/disk hot spots sit in
/// regions 11, 14 and 8. With `network_variance` region 11 also gets a
/// two-level network I/O pattern, reproducing the external decision table
/// at the cost of the internal one's uniform network column.
Profile st_profile(bool network_variance = false);

/// Twelve-region, eight-process NPAR1WAY-like profile with identical
/// processes; regions 3 and 12 are the internal bottlenecks.
Profile npar1way_profile();

/// Ten-region baseline for injection round-trips: region 4 is a 22% wall
/// share top-level leaf, region 2 a 22% share nested leaf.
SynthSpec injection_baseline();

/// The baseline with a single injection of `kind` at factor 3 on its target.
SynthSpec injection_spec(InjectionKind kind);

/// Region an injection of `kind` lands on in injection_spec.
std::uint32_t injection_target(InjectionKind kind);

/// Decision-table attribute index expected in the core for `kind`.
std::size_t injection_attribute(InjectionKind kind);

} // namespace spmdlens::fixtures
