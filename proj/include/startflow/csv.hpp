#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "startflow/util.hpp"

namespace startflow {

/// Small RFC-4180-style CSV reader: comma delimited, optional quoting,
/// doubled quotes inside quoted fields, LF or CRLF records.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const {
        for (size_t i = 0; i < header.size(); ++i)
            if (to_lower(header[i]) == to_lower(name)) return static_cast<int>(i);
        return -1;
    }
};

inline CsvTable parse_csv(std::string_view text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false;
    bool any = false;

    auto end_field = [&] {
        record.push_back(std::move(field));
        field.clear();
    };
    auto end_record = [&] {
        end_field();
        records.push_back(std::move(record));
        record.clear();
    };

    for (size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        any = true;
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"' && field.empty()) {
            quoted = true;
        } else if (c == ',') {
            end_field();
        } else if (c == '\n') {
            if (!field.empty() && field.back() == '\r') field.pop_back();
            end_record();
        } else {
            field += c;
        }
    }
    if (quoted) throw Error("E-CSV", "unterminated quoted field");
    if (!field.empty() && field.back() == '\r') field.pop_back();
    if (!field.empty() || !record.empty()) end_record();

    CsvTable table;
    if (!any || records.empty()) throw Error("E-CSV", "empty document");
    table.header = records.front();
    table.rows.assign(records.begin() + 1, records.end());
    for (size_t i = 0; i < table.rows.size(); ++i)
        if (table.rows[i].size() != table.header.size())
            throw Error("E-CSV", "row " + std::to_string(i + 2) + " has " +
                                     std::to_string(table.rows[i].size()) + " fields, expected " +
                                     std::to_string(table.header.size()));
    return table;
}

}  // namespace startflow
