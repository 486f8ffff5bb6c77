#include "kraken/output_table.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <json.hpp>

namespace kraken {

namespace {

[[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument(what);
}

void check_rectangular(const OutputTable& table) {
    if (table.columns.size() < 2) {
        fail("a table needs a label column and at least one value column");
    }
    const std::size_t values = table.columns.size() - 1;
    for (const auto& row : table.rows) {
        if (row.values.size() != values) {
            fail("row '" + row.label + "' carries " +
                 std::to_string(row.values.size()) + " values, expected " +
                 std::to_string(values));
        }
    }
}

void check_csv_safe(const std::string& text) {
    if (text.find_first_of(",\n\r\"") != std::string::npos) {
        fail("text field '" + text + "' cannot appear in csv output");
    }
}

std::string format_display(double value) {
    std::array<char, 64> buf;
    int len;
    if (std::abs(value) >= 100.0) {
        len = std::snprintf(buf.data(), buf.size(), "%.0f", value);
    } else {
        len = std::snprintf(buf.data(), buf.size(), "%.4g", value);
    }
    return std::string(buf.data(), static_cast<std::size_t>(len));
}

}  // namespace

TableFormat table_format_from_string(std::string_view name) {
    if (name == "csv") return TableFormat::Csv;
    if (name == "json") return TableFormat::Json;
    if (name == "human") return TableFormat::Human;
    fail("unknown output format '" + std::string(name) +
         "' (expected csv, json, or human)");
}

std::string format_value(double value) {
    std::array<char, 64> buf;
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                   std::chars_format::fixed);
    if (ec != std::errc{}) {
        // magnitudes beyond fixed-notation range fall back to scientific
        auto [p2, e2] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
        if (e2 != std::errc{}) fail("value not representable");
        ptr = p2;
    }
    return std::string(buf.data(), ptr);
}

std::string to_csv(const OutputTable& table) {
    check_rectangular(table);
    std::string out;
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        check_csv_safe(table.columns[i]);
        if (i > 0) out += ',';
        out += table.columns[i];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        check_csv_safe(row.label);
        out += row.label;
        for (double v : row.values) {
            out += ',';
            out += format_value(v);
        }
        out += '\n';
    }
    return out;
}

std::string to_json(const OutputTable& table) {
    check_rectangular(table);
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json obj;
        obj[table.columns[0]] = row.label;
        for (std::size_t i = 0; i < row.values.size(); ++i) {
            obj[table.columns[i + 1]] = row.values[i];
        }
        rows.push_back(std::move(obj));
    }
    return rows.dump(2) + "\n";
}

std::string to_human(const OutputTable& table) {
    check_rectangular(table);
    std::vector<std::vector<std::string>> cells;
    cells.push_back(table.columns);
    for (const auto& row : table.rows) {
        std::vector<std::string> line{row.label};
        for (double v : row.values) line.push_back(format_display(v));
        cells.push_back(std::move(line));
    }
    std::vector<std::size_t> widths(table.columns.size(), 0);
    for (const auto& line : cells) {
        for (std::size_t i = 0; i < line.size(); ++i) {
            widths[i] = std::max(widths[i], line[i].size());
        }
    }
    std::string out;
    if (!table.caption.empty()) {
        out += table.caption;
        out += '\n';
    }
    for (std::size_t r = 0; r < cells.size(); ++r) {
        for (std::size_t i = 0; i < cells[r].size(); ++i) {
            const auto& cell = cells[r][i];
            if (i > 0) out += "  ";
            // right-align numbers, left-align the label column
            if (i == 0) {
                out += cell;
                out.append(widths[i] - cell.size(), ' ');
            } else {
                out.append(widths[i] - cell.size(), ' ');
                out += cell;
            }
        }
        out += '\n';
        if (r == 0) {
            std::size_t total = 0;
            for (std::size_t w : widths) total += w;
            out.append(total + 2 * (widths.size() - 1), '-');
            out += '\n';
        }
    }
    return out;
}

std::string render(const OutputTable& table, TableFormat format) {
    switch (format) {
        case TableFormat::Csv: return to_csv(table);
        case TableFormat::Json: return to_json(table);
        case TableFormat::Human: return to_human(table);
    }
    fail("unknown table format");
}

namespace {

std::vector<std::string_view> split_line(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

double parse_value(std::string_view field) {
    double value{};
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        fail("malformed numeric field '" + std::string(field) + "'");
    }
    return value;
}

}  // namespace

OutputTable table_from_csv(std::string_view text) {
    OutputTable table;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        const auto fields = split_line(line);
        if (table.columns.empty()) {
            for (auto f : fields) table.columns.emplace_back(f);
            if (table.columns.size() < 2) fail("csv header needs at least two columns");
            continue;
        }
        if (fields.size() != table.columns.size()) {
            fail("csv row has " + std::to_string(fields.size()) +
                 " fields, expected " + std::to_string(table.columns.size()));
        }
        OutputTable::Row row;
        row.label = std::string(fields[0]);
        for (std::size_t i = 1; i < fields.size(); ++i) {
            row.values.push_back(parse_value(fields[i]));
        }
        table.rows.push_back(std::move(row));
    }
    if (table.columns.empty()) fail("csv input has no header row");
    return table;
}

OutputTable table_from_json(std::string_view text) {
    const auto parsed = nlohmann::ordered_json::parse(text, nullptr, false);
    if (parsed.is_discarded() || !parsed.is_array()) {
        fail("json input is not an array of row objects");
    }
    OutputTable table;
    for (const auto& obj : parsed) {
        if (!obj.is_object() || obj.empty()) fail("json row is not an object");
        if (table.columns.empty()) {
            for (const auto& item : obj.items()) {
                table.columns.push_back(item.key());
            }
            if (table.columns.size() < 2) fail("json rows need at least two keys");
        }
        OutputTable::Row row;
        std::size_t index = 0;
        for (const auto& [key, value] : obj.items()) {
            if (index >= table.columns.size() || key != table.columns[index]) {
                fail("json rows carry inconsistent keys");
            }
            if (index == 0) {
                row.label = value.is_string() ? value.get<std::string>()
                                              : value.dump();
            } else {
                if (!value.is_number()) fail("json value field is not numeric");
                row.values.push_back(value.get<double>());
            }
            ++index;
        }
        if (index != table.columns.size()) fail("json rows carry inconsistent keys");
        table.rows.push_back(std::move(row));
    }
    if (table.columns.empty()) fail("json input has no rows");
    return table;
}

}  // namespace kraken
