#pragma once

#include <map>
#include <set>
#include <string>

namespace startflow {

/// Tuning knobs for the verification rules. The zero-argument value is the
/// default configuration every command starts from.
struct LintConfig {
    /// Per-rule severity overrides, rule id -> 1..4.
    std::map<std::string, int> severity_overrides;
    /// Lowercase phrases that never count as an adequate trigger text.
    std::set<std::string> label_blocklist{"click here", "button", "link", "ok?"};
    /// Minimum trimmed length of a trigger text.
    int min_label_length = 2;
    /// Rule ids (R1..R8) to skip entirely.
    std::set<std::string> disabled_rules;
    /// When set, every terminal screen must be tagged feedback, not just one.
    bool strict_feedback = false;

    bool enabled(const std::string& rule_id) const {
        return disabled_rules.find(rule_id) == disabled_rules.end();
    }

    bool operator==(const LintConfig&) const = default;
};

}  // namespace startflow
