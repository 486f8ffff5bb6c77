#include "kraken/fixtures.hpp"

namespace kraken {

namespace {

const std::array<ReferenceTable, 4> kTables = {{
    {1,
     {0.05, 0.05, 1.00, 0.3, 100, 10},
     {24, 150, 824, 4453, 23992, 129164, 695302, 3742788, 20147225,
      108451327}},
    {2,
     {0.025, 0.05, 1.00, 0.3, 100, 10},
     {46, 508, 5232, 53565, 548064, 5607368, 57369941, 586961390,
      6005299050, 61441207420}},
    {3,
     {0.05, 0.05, 1.05, 0.3, 100, 10},
     {24, 158, 914, 5199, 29479, 167054, 946589, 5363637, 30391743,
      172207323}},
    {4,
     {0.025, 0.05, 1.05, 0.3, 100, 10},
     {46, 538, 5835, 62880, 677240, 7293674, 78550336, 845959488,
      9110685705, 98118875480}},
}};

}  // namespace

std::span<const ReferenceTable> reference_tables() { return kTables; }

std::optional<MultiplierParams> preset_params(std::string_view name) {
    if (name == "table1") return kTables[0].params;
    if (name == "table2") return kTables[1].params;
    if (name == "table3") return kTables[2].params;
    if (name == "table4") return kTables[3].params;
    if (name == "eq7") {
        // every loan insured in full, two lending cycles, one generation
        return MultiplierParams{0.05, 0.05, 1.0, 1.0, 2, 1};
    }
    return std::nullopt;
}

std::vector<std::string_view> preset_names() {
    return {"table1", "table2", "table3", "table4", "eq7"};
}

}  // namespace kraken
