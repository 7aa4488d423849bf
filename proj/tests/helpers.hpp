#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "startflow/dsl.hpp"

namespace testutil {

inline std::filesystem::path fixtures_dir() { return std::filesystem::path(FIXTURES_DIR); }

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "cannot open ", path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out.good());
    out << content;
}

/// Parses a fixture that must be valid.
inline startflow::Project load_fixture(const std::string& name) {
    const auto result = startflow::parse(read_file(fixtures_dir() / "valid" / name));
    for (const auto& e : result.errors)
        MESSAGE(name, ":", e.span.line, ":", e.span.column, " ", e.code, " ", e.message);
    REQUIRE(result.ok());
    return result.project;
}

inline std::vector<std::filesystem::path> fixture_files(const std::string& subdir,
                                                        const std::string& extension) {
    std::vector<std::filesystem::path> out;
    for (const auto& entry : std::filesystem::directory_iterator(fixtures_dir() / subdir))
        if (entry.is_regular_file() && entry.path().extension() == extension)
            out.push_back(entry.path());
    std::sort(out.begin(), out.end());
    return out;
}

/// First differing line, printed diff-style for golden mismatches.
inline std::string first_diff(const std::string& expected, const std::string& actual) {
    std::istringstream e(expected), a(actual);
    std::string el, al;
    int line = 0;
    while (true) {
        ++line;
        const bool eg = static_cast<bool>(std::getline(e, el));
        const bool ag = static_cast<bool>(std::getline(a, al));
        if (!eg && !ag) return "(no difference)";
        if (!eg || !ag || el != al) {
            std::ostringstream out;
            out << "@@ line " << line << " @@\n";
            if (eg) out << "-" << el << "\n";
            if (ag) out << "+" << al << "\n";
            return out.str();
        }
    }
}

}  // namespace testutil
