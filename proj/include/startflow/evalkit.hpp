#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "startflow/csv.hpp"
#include "startflow/util.hpp"

namespace startflow {

/// One row of an evaluator's defect form. Duplicate matching and
/// false-positive status are analyst judgments supplied as input, never
/// inferred here.
struct DefectForm {
    std::string evaluator;
    std::string group;
    std::string location;
    std::string heuristic;
    int severity = 1;
    std::string justification;
    bool is_false_positive = false;
    std::string dedup_key;

    bool operator==(const DefectForm&) const = default;
};

/// Aggregates for one group of defect forms.
/// Identities: real = total - false positives; real = unique + duplicates.
struct EvalSummary {
    std::string group;
    int total_discrepancies = 0;
    int false_positives = 0;
    int real_defects = 0;
    int unique_defects = 0;
    int duplicates = 0;
    std::map<std::string, int> per_heuristic;
    std::map<std::string, int> per_location;
    std::int64_t severity_sum = 0;

    /// Half-up, 2 decimals; absent when the group has no real defects.
    std::optional<double> mean_severity() const {
        if (real_defects == 0) return std::nullopt;
        return round_half_up_2dp(severity_sum, real_defects);
    }
};

/// One respondent's Likert answers, Q1..Q11, each 1..5.
struct TamResponse {
    std::string respondent;
    std::string group;
    std::array<int, 11> answers{};

    bool operator==(const TamResponse&) const = default;
};

/// Per-question and per-construct means. Sums are kept so the display
/// rounding can stay exact; raw means carry full precision.
struct TamSummary {
    std::string group;
    int respondents = 0;
    std::array<std::int64_t, 11> answer_sums{};

    double question_mean(int q) const {  // q is 1-based
        return static_cast<double>(answer_sums[static_cast<size_t>(q - 1)]) / respondents;
    }
    double question_mean_2dp(int q) const {
        return round_half_up_2dp(answer_sums[static_cast<size_t>(q - 1)], respondents);
    }

    // Constructs: PU = Q1..Q3, PEOU = Q4..Q7, PE = Q8..Q10, BI = Q11.
    double pu() const { return construct(1, 3); }
    double peou() const { return construct(4, 7); }
    double pe() const { return construct(8, 10); }
    double bi() const { return construct(11, 11); }
    double pu_2dp() const { return construct_2dp(1, 3); }
    double peou_2dp() const { return construct_2dp(4, 7); }
    double pe_2dp() const { return construct_2dp(8, 10); }
    double bi_2dp() const { return construct_2dp(11, 11); }

private:
    std::int64_t span_sum(int first, int last) const {
        std::int64_t s = 0;
        for (int q = first; q <= last; ++q) s += answer_sums[static_cast<size_t>(q - 1)];
        return s;
    }
    double construct(int first, int last) const {
        return static_cast<double>(span_sum(first, last)) /
               (static_cast<double>(respondents) * (last - first + 1));
    }
    double construct_2dp(int first, int last) const {
        return round_half_up_2dp(span_sum(first, last),
                                 static_cast<std::int64_t>(respondents) * (last - first + 1));
    }
};

// ---------------------------------------------------------------------------
// CSV loading
// ---------------------------------------------------------------------------

namespace detail {

inline bool parse_bool_cell(const std::string& raw, const std::string& column) {
    const std::string v = to_lower(trim(raw));
    if (v == "yes" || v == "true" || v == "1") return true;
    if (v == "no" || v == "false" || v == "0") return false;
    throw Error("E-CSV", "cannot read '" + raw + "' as a boolean in column " + column);
}

inline int parse_int_cell(const std::string& raw, const std::string& column) {
    const std::string v = trim(raw);
    if (v.empty() || v.size() > 9) throw Error("E-CSV", "bad number in column " + column);
    int out = 0;
    for (char c : v) {
        if (c < '0' || c > '9') throw Error("E-CSV", "bad number in column " + column);
        out = out * 10 + (c - '0');
    }
    return out;
}

}  // namespace detail

inline std::vector<DefectForm> load_defect_forms(std::string_view csv_text) {
    const CsvTable table = parse_csv(csv_text);
    const char* names[] = {"evaluator", "group",         "location",          "heuristic",
                           "severity",  "justification", "is_false_positive", "dedup_key"};
    std::array<int, 8> col{};
    for (size_t i = 0; i < col.size(); ++i) {
        col[i] = table.column(names[i]);
        if (col[i] < 0) throw Error("E-CSV", std::string("missing column ") + names[i]);
    }
    std::vector<DefectForm> forms;
    forms.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        DefectForm f;
        f.evaluator = row[static_cast<size_t>(col[0])];
        f.group = row[static_cast<size_t>(col[1])];
        f.location = row[static_cast<size_t>(col[2])];
        f.heuristic = row[static_cast<size_t>(col[3])];
        f.severity = detail::parse_int_cell(row[static_cast<size_t>(col[4])], "severity");
        f.justification = row[static_cast<size_t>(col[5])];
        f.is_false_positive =
            detail::parse_bool_cell(row[static_cast<size_t>(col[6])], "is_false_positive");
        f.dedup_key = trim(row[static_cast<size_t>(col[7])]);
        if (f.dedup_key.empty()) throw Error("E-CSV", "empty dedup_key");
        forms.push_back(std::move(f));
    }
    return forms;
}

inline std::vector<TamResponse> load_tam_responses(std::string_view csv_text) {
    const CsvTable table = parse_csv(csv_text);
    const int respondent = table.column("respondent");
    const int group = table.column("group");
    if (respondent < 0 || group < 0)
        throw Error("E-CSV", "missing column respondent or group");
    std::array<int, 11> qcol{};
    for (int q = 1; q <= 11; ++q) {
        qcol[static_cast<size_t>(q - 1)] = table.column("Q" + std::to_string(q));
        if (qcol[static_cast<size_t>(q - 1)] < 0)
            throw Error("E-CSV", "missing column Q" + std::to_string(q));
    }
    std::vector<TamResponse> out;
    out.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        TamResponse r;
        r.respondent = row[static_cast<size_t>(respondent)];
        r.group = row[static_cast<size_t>(group)];
        for (int q = 1; q <= 11; ++q) {
            const int v = detail::parse_int_cell(
                row[static_cast<size_t>(qcol[static_cast<size_t>(q - 1)])],
                "Q" + std::to_string(q));
            if (v < 1 || v > 5)
                throw Error("E-BAD-ANSWER", "Q" + std::to_string(q) + " answer " +
                                                std::to_string(v) + " is outside 1..5");
            r.answers[static_cast<size_t>(q - 1)] = v;
        }
        out.push_back(std::move(r));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Aggregation
// ---------------------------------------------------------------------------

/// Summarizes the forms of one group. A form is a duplicate when an earlier
/// real form in input order carries the same dedup_key. Per-heuristic and
/// per-location counts and the severity mean cover real defects only.
/// Throws E-BAD-SEVERITY on any severity outside 1..4.
inline EvalSummary summarize_defects(const std::vector<DefectForm>& forms,
                                     const std::string& group) {
    EvalSummary s;
    s.group = group;
    std::set<std::string> seen_keys;
    for (const auto& f : forms) {
        if (f.group != group) continue;
        if (f.severity < 1 || f.severity > 4)
            throw Error("E-BAD-SEVERITY", "severity " + std::to_string(f.severity) +
                                              " from evaluator '" + f.evaluator +
                                              "' is outside 1..4");
        ++s.total_discrepancies;
        if (f.is_false_positive) {
            ++s.false_positives;
            continue;
        }
        ++s.real_defects;
        if (seen_keys.insert(f.dedup_key).second)
            ++s.unique_defects;
        else
            ++s.duplicates;
        ++s.per_heuristic[f.heuristic];
        ++s.per_location[f.location];
        s.severity_sum += f.severity;
    }
    return s;
}

/// Per-question then per-construct means for one group.
/// Throws E-EMPTY-GROUP when the group has no responses.
inline TamSummary summarize_tam(const std::vector<TamResponse>& responses,
                                const std::string& group) {
    TamSummary s;
    s.group = group;
    for (const auto& r : responses) {
        if (r.group != group) continue;
        ++s.respondents;
        for (size_t q = 0; q < 11; ++q) {
            if (r.answers[q] < 1 || r.answers[q] > 5)
                throw Error("E-BAD-ANSWER", "answer outside 1..5 for respondent '" +
                                                r.respondent + "'");
            s.answer_sums[q] += r.answers[q];
        }
    }
    if (s.respondents == 0) throw Error("E-EMPTY-GROUP", "no responses in group '" + group + "'");
    return s;
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

inline nlohmann::ordered_json eval_summary_to_json(const EvalSummary& s) {
    nlohmann::ordered_json j;
    j["group"] = s.group;
    j["total_discrepancies"] = s.total_discrepancies;
    j["false_positives"] = s.false_positives;
    j["real_defects"] = s.real_defects;
    j["unique_defects"] = s.unique_defects;
    j["duplicates"] = s.duplicates;
    j["per_heuristic"] = s.per_heuristic;
    j["per_location"] = s.per_location;
    if (auto mean = s.mean_severity()) j["mean_severity"] = *mean;
    return j;
}

inline std::string eval_summary_to_text(const EvalSummary& s) {
    std::string out;
    out += "group: " + s.group + "\n";
    out += "total discrepancies: " + std::to_string(s.total_discrepancies) + "\n";
    out += "false positives: " + std::to_string(s.false_positives) + "\n";
    out += "real defects: " + std::to_string(s.real_defects) + "\n";
    out += "unique defects: " + std::to_string(s.unique_defects) + "\n";
    out += "duplicates: " + std::to_string(s.duplicates) + "\n";
    if (auto mean = s.mean_severity()) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "mean severity: %.2f\n", *mean);
        out += buf;
    }
    out += "per heuristic:\n";
    for (const auto& [h, n] : s.per_heuristic)
        out += "  " + h + ": " + std::to_string(n) + "\n";
    out += "per location:\n";
    for (const auto& [l, n] : s.per_location)
        out += "  " + l + ": " + std::to_string(n) + "\n";
    return out;
}

inline nlohmann::ordered_json tam_summary_to_json(const TamSummary& s) {
    nlohmann::ordered_json j;
    j["group"] = s.group;
    j["respondents"] = s.respondents;
    nlohmann::ordered_json qs;
    for (int q = 1; q <= 11; ++q) qs["Q" + std::to_string(q)] = s.question_mean_2dp(q);
    j["per_question"] = std::move(qs);
    nlohmann::ordered_json cs;
    cs["PU"] = s.pu_2dp();
    cs["PEOU"] = s.peou_2dp();
    cs["PE"] = s.pe_2dp();
    cs["BI"] = s.bi_2dp();
    j["constructs"] = std::move(cs);
    return j;
}

inline std::string tam_summary_to_text(const TamSummary& s) {
    std::string out = "group: " + s.group + "\n";
    out += "respondents: " + std::to_string(s.respondents) + "\n";
    char buf[64];
    for (int q = 1; q <= 11; ++q) {
        std::snprintf(buf, sizeof buf, "Q%d: %.2f\n", q, s.question_mean_2dp(q));
        out += buf;
    }
    std::snprintf(buf, sizeof buf, "PU: %.2f\nPEOU: %.2f\nPE: %.2f\nBI: %.2f\n", s.pu_2dp(),
                  s.peou_2dp(), s.pe_2dp(), s.bi_2dp());
    out += buf;
    return out;
}

}  // namespace startflow
