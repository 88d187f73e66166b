#pragma once

#include <cstddef>
#include <vector>

namespace spmdlens {

/// One process's values of a single metric over all code regions.
/// Component t-1 holds the value of region t.
struct PerfVector {
    std::size_t owner = 0;
    std::vector<double> values;

    bool operator==(const PerfVector&) const = default;
};

} // namespace spmdlens
