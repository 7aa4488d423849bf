#pragma once

#include <future>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "startflow/dsl.hpp"
#include "startflow/model.hpp"

namespace startflow {

/// One verification rule: the question it asks and the heuristic behind it.
struct Rule {
    std::string id;
    std::string heuristic;
    std::string question;
    int default_severity;
};

/// The eight questioning points, in rule order.
inline const std::vector<Rule>& rules() {
    static const std::vector<Rule> table = {
        {"R1", "Flexibility and efficiency of use",
         "Do all screens have at least one trigger for the user to activate?", 3},
        {"R2", "Visibility of system status",
         "Towards the end of the feature, is there a screen that provides feedback indicating "
         "the completion of the task?",
         2},
        {"R3", "Match between system and the real world",
         "Are triggers that have texts adequately described?", 2},
        {"R4", "Match between system and the real world",
         "Are icon/image-based triggers adequately represented?", 2},
        {"R5", "Error prevention",
         "If there are fields for data entry, are the mandatory fields marked?", 2},
        {"R6", "Help users recognize, diagnose, and recover from errors",
         "Does the interaction flow consider errors that users may make?", 3},
        {"R7", "Flexibility and efficiency of use",
         "Are there triggers for the user to undo an action or return to the previous screen?", 3},
        {"R8", "Consistency and standards", "Are all connectors starting from triggers?", 4},
    };
    return table;
}

inline const Rule& rule_by_id(const std::string& id) {
    for (const auto& r : rules())
        if (r.id == id) return r;
    throw Error("E-UNKNOWN-RULE", "no such rule '" + id + "'");
}

inline int severity_for(const std::string& rule_id, const LintConfig& config) {
    auto it = config.severity_overrides.find(rule_id);
    return it != config.severity_overrides.end() ? it->second : rule_by_id(rule_id).default_severity;
}

/// One finding. severity follows the 1..4 scale
/// (1 cosmetic, 2 minor, 3 major, 4 catastrophic).
struct Defect {
    std::string rule;
    std::string heuristic;
    int severity = 1;
    std::string feature;
    std::string screen;
    std::string element;  // empty for screen/flow level findings
    std::string message;

    bool operator==(const Defect&) const = default;
};

struct DefectReport {
    std::vector<StructureError> structure;
    std::vector<Defect> defects;
};

namespace detail {

/// Per-feature view used by the rules: adjacency plus reachability from the
/// entry screen. Edges whose endpoints fall outside the feature are dropped
/// so a half-broken document can still be linted.
struct FlowView {
    FlowGraph graph;
    std::set<std::string> reachable;

    bool screen_reachable(const std::string& id) const { return reachable.count(id) > 0; }
};

inline FlowView make_flow_view(const Feature& feature, const Project& project) {
    FlowView v;
    v.graph = build_graph(feature, project);
    std::vector<FlowEdge> kept;
    for (const auto& e : v.graph.edges)
        if (v.graph.has_node(e.source) && v.graph.has_node(e.target)) kept.push_back(e);
    v.graph.edges = std::move(kept);

    std::vector<std::string> queue{v.graph.entry};
    v.reachable.insert(v.graph.entry);
    while (!queue.empty()) {
        std::string cur = queue.back();
        queue.pop_back();
        for (const auto& e : v.graph.edges)
            if (e.source == cur && v.reachable.insert(e.target).second) queue.push_back(e.target);
    }
    return v;
}

/// Screens lying on at least one simple entry->to path, `to` excluded.
/// Small per-feature graphs make plain enumeration fine here.
inline std::set<std::string> screens_preceding(const FlowView& v, const std::string& to) {
    std::set<std::string> result;
    std::vector<std::string> path;
    std::set<std::string> on_path;

    auto dfs = [&](auto&& self, const std::string& cur) -> void {
        path.push_back(cur);
        on_path.insert(cur);
        if (cur == to) {
            for (const auto& s : path)
                if (s != to) result.insert(s);
        } else {
            for (const auto& e : v.graph.edges)
                if (e.source == cur && !on_path.count(e.target)) self(self, e.target);
        }
        on_path.erase(cur);
        path.pop_back();
    };
    dfs(dfs, v.graph.entry);
    return result;
}

}  // namespace detail

/// Runs the enabled rules over one feature. Output is sorted by
/// (screen id, rule id, element id) and depends only on the inputs.
inline std::vector<Defect> lint_feature(const Feature& feature, const Project& project,
                                        const LintConfig& config) {
    std::vector<Defect> out;
    if (feature.screens.empty()) return out;

    const detail::FlowView view = detail::make_flow_view(feature, project);

    auto add = [&](const std::string& rule_id, const std::string& screen,
                   const std::string& element, std::string message) {
        const Rule& r = rule_by_id(rule_id);
        out.push_back({r.id, r.heuristic, severity_for(rule_id, config), feature.id, screen,
                       element, std::move(message)});
    };

    std::vector<const Screen*> screens;
    for (const auto& sid : feature.screens)
        if (const Screen* s = project.find_screen(sid)) screens.push_back(s);

    auto outgoing = [&](const std::string& sid) {
        std::vector<const FlowEdge*> edges;
        for (const auto& e : view.graph.edges)
            if (e.source == sid) edges.push_back(&e);
        return edges;
    };

    // R1: every reachable screen offers at least one trigger.
    if (config.enabled("R1")) {
        for (const Screen* s : screens) {
            if (!view.screen_reachable(s->id)) continue;
            bool has_trigger = false;
            for (const auto& e : s->elements) has_trigger |= is_trigger(e);
            if (!has_trigger)
                add("R1", s->id, "",
                    "screen '" + s->id + "' has no trigger; users would be stuck here");
        }
    }

    // R2: the flow must end in completion feedback. Terminal screens are the
    // reachable ones without an outgoing normal edge.
    if (config.enabled("R2")) {
        std::vector<const Screen*> terminals;
        for (const Screen* s : screens) {
            if (!view.screen_reachable(s->id)) continue;
            bool moves_on = false;
            for (const FlowEdge* e : outgoing(s->id))
                moves_on |= (e->kind == ConnectorKind::Normal);
            if (!moves_on) terminals.push_back(s);
        }
        if (terminals.empty()) {
            add("R2", view.graph.entry, "",
                "flow has no terminal screen, so the task can never signal completion");
        } else if (config.strict_feedback) {
            for (const Screen* s : terminals)
                if (!s->tags.feedback)
                    add("R2", s->id, "",
                        "terminal screen '" + s->id + "' is not tagged feedback");
        } else {
            bool any_feedback = false;
            for (const Screen* s : terminals) any_feedback |= s->tags.feedback;
            if (!any_feedback) {
                const Screen* at = *std::min_element(
                    terminals.begin(), terminals.end(),
                    [](const Screen* a, const Screen* b) { return a->id < b->id; });
                add("R2", at->id, "",
                    "no terminal screen is tagged feedback; the user never learns the task "
                    "finished");
            }
        }
    }

    // R3: trigger texts must say what they do.
    if (config.enabled("R3")) {
        for (const Screen* s : screens) {
            for (const auto& e : s->elements) {
                const auto* t = std::get_if<TriggerText>(&e);
                if (!t) continue;
                const std::string label = trim(t->label);
                if (label.empty())
                    add("R3", s->id, t->id, "trigger '" + t->id + "' has an empty label");
                else if (static_cast<int>(label.size()) < config.min_label_length)
                    add("R3", s->id, t->id,
                        "trigger label \"" + label + "\" is too short to describe the action");
                else if (config.label_blocklist.count(to_lower(label)))
                    add("R3", s->id, t->id,
                        "trigger label \"" + label + "\" does not describe the action");
            }
        }
    }

    // R4: icon triggers need a named icon and an alt text.
    if (config.enabled("R4")) {
        for (const Screen* s : screens) {
            for (const auto& e : s->elements) {
                const auto* t = std::get_if<TriggerIcon>(&e);
                if (!t) continue;
                if (trim(t->icon).empty())
                    add("R4", s->id, t->id, "icon trigger '" + t->id + "' names no icon");
                else if (!t->alt || trim(*t->alt).empty())
                    add("R4", s->id, t->id, "icon trigger '" + t->id + "' has no alt text");
            }
        }
    }

    // R5: mandatory fields must be marked one way or the other.
    if (config.enabled("R5")) {
        for (const Screen* s : screens)
            for (const auto& e : s->elements)
                if (const auto* f = std::get_if<InputField>(&e);
                    f && f->required == Requiredness::Unspecified)
                    add("R5", s->id, f->id,
                        "field '" + f->id + "' does not say whether it is mandatory");
    }

    // R6: a submit on a data-entry screen needs an error path: an error-kind
    // edge from the trigger, or any edge from the screen into an error screen.
    if (config.enabled("R6")) {
        for (const Screen* s : screens) {
            bool has_fields = false;
            for (const auto& e : s->elements)
                has_fields |= std::holds_alternative<InputField>(e);
            if (!has_fields) continue;
            const auto edges = outgoing(s->id);
            bool screen_links_error = false;
            for (const FlowEdge* e : edges) {
                const Screen* target = project.find_screen(e->target);
                screen_links_error |= (target && target->tags.error);
            }
            for (const auto& e : s->elements) {
                if (!is_trigger(e) || !trigger_submits(e)) continue;
                bool has_error_edge = false;
                for (const FlowEdge* f : edges)
                    if (f->trigger == element_id(e) && f->kind == ConnectorKind::Error)
                        has_error_edge = true;
                if (!has_error_edge && !screen_links_error)
                    add("R6", s->id, element_id(e),
                        "submit trigger '" + element_id(e) +
                            "' has no error flow for mistaken input");
            }
        }
    }

    // R7: from every reachable non-entry screen that has triggers, some
    // trigger must lead back: a back-kind edge, or an edge onto a screen that
    // precedes this one on an entry path.
    if (config.enabled("R7")) {
        for (const Screen* s : screens) {
            if (s->id == view.graph.entry || !view.screen_reachable(s->id)) continue;
            bool has_trigger = false;
            for (const auto& e : s->elements) has_trigger |= is_trigger(e);
            if (!has_trigger) continue;  // that is R1's finding
            const auto preceding = detail::screens_preceding(view, s->id);
            bool can_return = false;
            for (const FlowEdge* e : outgoing(s->id))
                can_return |= (e->kind == ConnectorKind::Back || preceding.count(e->target) > 0);
            if (!can_return)
                add("R7", s->id, "",
                    "screen '" + s->id + "' offers no way back to a previous screen");
        }
    }

    // R8: connectors must start from triggers. Reported here as well as by
    // validate_structure so lint reports stand on their own.
    if (config.enabled("R8")) {
        for (const auto& c : feature.connectors) {
            const Screen* src = project.find_screen(c.source_screen);
            if (!src) continue;
            const Element* e = src->find_element(c.source_element);
            if (e && !is_trigger(*e))
                add("R8", c.source_screen, c.source_element,
                    "connector '" + c.id + "' starts from '" + c.source_element +
                        "', which is not a trigger");
        }
    }

    std::stable_sort(out.begin(), out.end(), [](const Defect& a, const Defect& b) {
        return std::tie(a.screen, a.rule, a.element) < std::tie(b.screen, b.rule, b.element);
    });
    return out;
}

/// Structural validation plus per-feature lint, features in declaration
/// order. With threads > 1 features are linted concurrently; assembly order
/// keeps the report byte-identical either way.
inline DefectReport lint_project(const Project& project, const LintConfig& config,
                                 unsigned threads = 1) {
    DefectReport report;
    report.structure = validate_structure(project);

    if (threads > 1 && project.features.size() > 1) {
        std::vector<std::future<std::vector<Defect>>> jobs;
        jobs.reserve(project.features.size());
        for (const auto& f : project.features)
            jobs.push_back(std::async(std::launch::async, [&f, &project, &config] {
                return lint_feature(f, project, config);
            }));
        for (auto& j : jobs) {
            auto part = j.get();
            report.defects.insert(report.defects.end(), part.begin(), part.end());
        }
    } else {
        for (const auto& f : project.features) {
            auto part = lint_feature(f, project, config);
            report.defects.insert(report.defects.end(), part.begin(), part.end());
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Report rendering
// ---------------------------------------------------------------------------

inline const char* severity_name(int severity) {
    switch (severity) {
        case 1: return "COSMETIC";
        case 2: return "MINOR";
        case 3: return "MAJOR";
        case 4: return "CATASTROPHIC";
        default: return "UNKNOWN";
    }
}

/// Mean severity of the report's defects, half-up to 2 decimals; empty
/// reports have no mean.
inline std::optional<double> mean_severity(const DefectReport& report) {
    if (report.defects.empty()) return std::nullopt;
    std::int64_t sum = 0;
    for (const auto& d : report.defects) sum += d.severity;
    return round_half_up_2dp(sum, static_cast<std::int64_t>(report.defects.size()));
}

inline nlohmann::ordered_json report_to_json(const DefectReport& report) {
    nlohmann::ordered_json j;
    j["structure_errors"] = nlohmann::ordered_json::array();
    for (const auto& e : report.structure) {
        nlohmann::ordered_json je;
        je["code"] = e.code;
        if (!e.feature.empty()) je["feature"] = e.feature;
        if (!e.connector.empty()) je["connector"] = e.connector;
        je["message"] = e.message;
        j["structure_errors"].push_back(std::move(je));
    }

    j["defects"] = nlohmann::ordered_json::array();
    std::map<std::string, int> per_rule, per_heuristic, per_screen;
    for (const auto& d : report.defects) {
        nlohmann::ordered_json jd;
        jd["rule"] = d.rule;
        jd["heuristic"] = d.heuristic;
        jd["severity"] = d.severity;
        jd["feature"] = d.feature;
        jd["screen"] = d.screen;
        if (!d.element.empty()) jd["element"] = d.element;
        jd["message"] = d.message;
        j["defects"].push_back(std::move(jd));
        ++per_rule[d.rule];
        ++per_heuristic[d.heuristic];
        ++per_screen[d.screen];
    }

    nlohmann::ordered_json summary;
    summary["defect_count"] = report.defects.size();
    summary["per_rule"] = per_rule;
    summary["per_heuristic"] = per_heuristic;
    summary["per_screen"] = per_screen;
    if (auto mean = mean_severity(report)) summary["mean_severity"] = *mean;
    j["summary"] = std::move(summary);
    return j;
}

/// Text form: one grep-friendly line per finding, then a count line.
inline std::string report_to_text(const DefectReport& report) {
    std::string out;
    for (const auto& e : report.structure) {
        out += e.code + " " + (e.feature.empty() ? std::string("project") : e.feature);
        if (!e.connector.empty()) out += "/" + e.connector;
        out += ": " + e.message + "\n";
    }
    for (const auto& d : report.defects) {
        out += std::string(severity_name(d.severity)) + " " + d.rule + " " + slug(d.heuristic) +
               " " + d.feature + "/" + d.screen;
        if (!d.element.empty()) out += "/" + d.element;
        out += ": " + d.message + "\n";
    }
    out += std::to_string(report.defects.size()) + " defects";
    if (auto mean = mean_severity(report)) {
        char buf[32];
        std::snprintf(buf, sizeof buf, " (mean severity %.2f)", *mean);
        out += buf;
    }
    out += "\n";
    return out;
}

}  // namespace startflow
