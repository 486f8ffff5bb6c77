#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace kraken {

/// Rectangular result table: one text label column followed by numeric
/// columns. Every row must carry exactly columns.size() - 1 values.
struct OutputTable {
    struct Row {
        std::string label;
        std::vector<double> values;
    };

    std::string caption;               // human format only; ignored by csv/json
    std::vector<std::string> columns;  // columns[0] names the label column
    std::vector<Row> rows;
};

enum class TableFormat { Csv, Json, Human };

TableFormat table_format_from_string(std::string_view name);

// CSV: header row, '.' decimal separator, no thousands separators, values in
// the shortest fixed notation that parses back to the identical double.
// JSON: array of row objects keyed by column name, in column order.
// Human: aligned columns; values >= 100 rounded to integers, smaller ones
// shown to four significant digits.
std::string to_csv(const OutputTable& table);
std::string to_json(const OutputTable& table);
std::string to_human(const OutputTable& table);
std::string render(const OutputTable& table, TableFormat format);

OutputTable table_from_csv(std::string_view text);
OutputTable table_from_json(std::string_view text);

/// Shortest fixed-notation string that round-trips to the same double.
std::string format_value(double value);

}  // namespace kraken
