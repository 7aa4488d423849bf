#pragma once

#include <string>
#include <string_view>

#include "json.hpp"
#include "startflow/lint_config.hpp"
#include "startflow/util.hpp"

namespace startflow {

/// Loads a LintConfig from its JSON form. Missing keys keep their defaults;
/// a present label_blocklist replaces the default list.
/// Throws E-CONFIG on malformed JSON or out-of-range values.
inline LintConfig lint_config_from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error("E-CONFIG", std::string("bad config JSON: ") + e.what());
    }
    LintConfig config;
    try {
        if (j.contains("severity_overrides")) {
            for (const auto& [rule, sev] : j["severity_overrides"].items()) {
                const int v = sev.get<int>();
                if (v < 1 || v > 4)
                    throw Error("E-CONFIG", "severity override for " + rule + " outside 1..4");
                config.severity_overrides[rule] = v;
            }
        }
        if (j.contains("label_blocklist")) {
            config.label_blocklist.clear();
            for (const auto& s : j["label_blocklist"])
                config.label_blocklist.insert(to_lower(s.get<std::string>()));
        }
        if (j.contains("min_label_length")) config.min_label_length = j["min_label_length"].get<int>();
        if (j.contains("disabled_rules"))
            for (const auto& s : j["disabled_rules"])
                config.disabled_rules.insert(s.get<std::string>());
        if (j.contains("strict_feedback")) config.strict_feedback = j["strict_feedback"].get<bool>();
    } catch (const nlohmann::json::exception& e) {
        throw Error("E-CONFIG", std::string("bad config value: ") + e.what());
    }
    return config;
}

inline nlohmann::ordered_json lint_config_to_json(const LintConfig& config) {
    nlohmann::ordered_json j;
    j["severity_overrides"] = config.severity_overrides;
    j["label_blocklist"] = config.label_blocklist;
    j["min_label_length"] = config.min_label_length;
    j["disabled_rules"] = config.disabled_rules;
    j["strict_feedback"] = config.strict_feedback;
    return j;
}

}  // namespace startflow
