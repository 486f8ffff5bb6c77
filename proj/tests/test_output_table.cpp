#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "kraken/output_table.hpp"
#include "support.hpp"

using namespace kraken;
using testsupport::uniform;

namespace {

OutputTable sample_table() {
    OutputTable t;
    t.caption = "sample";
    t.columns = {"level", "m", "log10_m"};
    t.rows = {
        {"1", {24.270450286084142, 1.3851083984703507}},
        {"2", {149.5327805879456, 2.1747485950137688}},
        {"limit", {0.95, -0.022276394711152253}},
    };
    return t;
}

}  // namespace

TEST_CASE("format_value writes shortest exact fixed notation") {
    CHECK(format_value(0.95) == "0.95");
    CHECK(format_value(20.0) == "20");
    CHECK(format_value(0.0) == "0");
    CHECK(format_value(-1.5) == "-1.5");
    // parse(back) must reproduce the identical double
    std::mt19937_64 rng(301);
    for (int trial = 0; trial < 2000; ++trial) {
        const double scale = std::pow(10.0, trial % 19 - 9);
        const double value = uniform(rng, -1.0, 1.0) * scale;
        const std::string text = format_value(value);
        CHECK(std::stod(text) == value);
        CHECK(text.find(',') == std::string::npos);
        CHECK(text.find('e') == std::string::npos);
    }
}

TEST_CASE("csv rendering") {
    const std::string csv = to_csv(sample_table());
    CHECK(csv.rfind("level,m,log10_m\n", 0) == 0);
    CHECK(csv.find("\n1,") != std::string::npos);
    CHECK(csv.find("limit,0.95,") != std::string::npos);
    // one header plus three rows
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);

    SUBCASE("round-trips to identical doubles") {
        const OutputTable parsed = table_from_csv(csv);
        REQUIRE(parsed.columns == sample_table().columns);
        REQUIRE(parsed.rows.size() == 3);
        for (std::size_t r = 0; r < parsed.rows.size(); ++r) {
            CHECK(parsed.rows[r].label == sample_table().rows[r].label);
            for (std::size_t c = 0; c < parsed.rows[r].values.size(); ++c) {
                CHECK(parsed.rows[r].values[c] ==
                      sample_table().rows[r].values[c]);
            }
        }
    }
}

TEST_CASE("json rendering") {
    const std::string json = to_json(sample_table());
    CHECK(json.find("\"level\": \"1\"") != std::string::npos);
    CHECK(json.find("\"m\":") != std::string::npos);

    SUBCASE("round-trips to identical doubles") {
        const OutputTable parsed = table_from_json(json);
        REQUIRE(parsed.columns == sample_table().columns);
        REQUIRE(parsed.rows.size() == 3);
        for (std::size_t r = 0; r < parsed.rows.size(); ++r) {
            CHECK(parsed.rows[r].label == sample_table().rows[r].label);
            for (std::size_t c = 0; c < parsed.rows[r].values.size(); ++c) {
                CHECK(parsed.rows[r].values[c] ==
                      sample_table().rows[r].values[c]);
            }
        }
    }
}

TEST_CASE("human rendering rounds for reading") {
    const std::string text = to_human(sample_table());
    CHECK(text.find("sample") != std::string::npos);
    CHECK(text.find("level") != std::string::npos);
    // >= 100 becomes an integer, smaller keeps four significant digits
    CHECK(text.find("150") != std::string::npos);
    CHECK(text.find("24.27") != std::string::npos);
    CHECK(text.find("0.95") != std::string::npos);
}

TEST_CASE("render dispatches on format name") {
    const OutputTable t = sample_table();
    CHECK(render(t, table_format_from_string("csv")) == to_csv(t));
    CHECK(render(t, table_format_from_string("json")) == to_json(t));
    CHECK(render(t, table_format_from_string("human")) == to_human(t));
    CHECK_THROWS_AS(table_format_from_string("xml"), std::invalid_argument);
}

TEST_CASE("malformed tables and inputs are rejected") {
    OutputTable ragged = sample_table();
    ragged.rows[1].values.pop_back();
    CHECK_THROWS_AS(to_csv(ragged), std::invalid_argument);
    CHECK_THROWS_AS(to_json(ragged), std::invalid_argument);

    OutputTable no_columns;
    no_columns.columns = {"only"};
    CHECK_THROWS_AS(to_csv(no_columns), std::invalid_argument);

    OutputTable bad_label = sample_table();
    bad_label.rows[0].label = "a,b";
    CHECK_THROWS_AS(to_csv(bad_label), std::invalid_argument);

    CHECK_THROWS_AS(table_from_csv(""), std::invalid_argument);
    CHECK_THROWS_AS(table_from_csv("h1,h2\nrow\n"), std::invalid_argument);
    CHECK_THROWS_AS(table_from_csv("h1,h2\nrow,abc\n"), std::invalid_argument);
    CHECK_THROWS_AS(table_from_json("{\"not\":\"array\"}"),
                    std::invalid_argument);
    CHECK_THROWS_AS(table_from_json("[{\"a\":\"x\",\"b\":1},{\"a\":\"y\"}]"),
                    std::invalid_argument);
}
