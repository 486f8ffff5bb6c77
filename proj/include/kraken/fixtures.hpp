#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "kraken/multiplier.hpp"

namespace kraken {

/// One published reference table: a parameter set and the rounded
/// multiplier it reports for nesting depths 1 through 10.
struct ReferenceTable {
    int id = 0;
    MultiplierParams params;
    std::array<std::int64_t, 10> expected{};
};

/// The four published multiplier tables the verifier reproduces.
std::span<const ReferenceTable> reference_tables();

/// Named parameter presets accepted by the command line: table1..table4
/// for the reference tables, eq7 for the skipped-insurance worked example.
std::optional<MultiplierParams> preset_params(std::string_view name);

std::vector<std::string_view> preset_names();

}  // namespace kraken
