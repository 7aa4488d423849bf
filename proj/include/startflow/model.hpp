#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "startflow/lint_config.hpp"
#include "startflow/util.hpp"

namespace startflow {

// ---------------------------------------------------------------------------
// Domain types. All values are immutable after construction; analyses treat
// them as read-only and may run concurrently.
// ---------------------------------------------------------------------------

/// Connextra-style user story. priority 1 is the highest.
struct UserStory {
    std::string id;
    std::string role;
    std::string want;
    std::optional<std::string> why;
    int priority = 1;

    bool operator==(const UserStory&) const = default;
};

enum class Requiredness { Yes, No, Unspecified };
enum class ConnectorKind { Normal, Error, Back };

/// Non-interactive screen content: containers, lists, cards, images.
struct Layout {
    std::string id;
    std::string kind;
    std::optional<std::string> label;

    bool operator==(const Layout&) const = default;
};

/// Data-entry field. Unspecified means the author never said whether the
/// field is mandatory, which is exactly what rule R5 looks for.
struct InputField {
    std::string id;
    std::string label;
    Requiredness required = Requiredness::Unspecified;

    bool operator==(const InputField&) const = default;
};

/// Text button or hyperlink. `submits` marks form-submission actions.
struct TriggerText {
    std::string id;
    std::string label;
    bool submits = false;

    bool operator==(const TriggerText&) const = default;
};

/// Icon/image button.
struct TriggerIcon {
    std::string id;
    std::string icon;
    std::optional<std::string> alt;
    bool submits = false;

    bool operator==(const TriggerIcon&) const = default;
};

using Element = std::variant<Layout, InputField, TriggerText, TriggerIcon>;

inline const std::string& element_id(const Element& e) {
    return std::visit([](const auto& v) -> const std::string& { return v.id; }, e);
}

inline bool is_trigger(const Element& e) {
    return std::holds_alternative<TriggerText>(e) || std::holds_alternative<TriggerIcon>(e);
}

inline bool trigger_submits(const Element& e) {
    if (const auto* t = std::get_if<TriggerText>(&e)) return t->submits;
    if (const auto* i = std::get_if<TriggerIcon>(&e)) return i->submits;
    return false;
}

/// Display text for a trigger: the button label, or the icon name.
inline std::string trigger_label(const Element& e) {
    if (const auto* t = std::get_if<TriggerText>(&e)) return t->label;
    if (const auto* i = std::get_if<TriggerIcon>(&e)) return i->icon;
    return element_id(e);
}

struct ScreenTags {
    bool entry = false;
    bool feedback = false;
    bool error = false;

    bool operator==(const ScreenTags&) const = default;
};

/// One wireframe: ordered elements plus flow tags.
struct Screen {
    std::string id;
    std::string title;
    std::vector<Element> elements;
    ScreenTags tags;

    const Element* find_element(const std::string& eid) const {
        for (const auto& e : elements)
            if (element_id(e) == eid) return &e;
        return nullptr;
    }

    bool operator==(const Screen&) const = default;
};

/// Directed arrow from a trigger to a destination screen.
struct Connector {
    std::string id;
    std::string source_screen;
    std::string source_element;
    std::string target;
    ConnectorKind kind = ConnectorKind::Normal;

    bool operator==(const Connector&) const = default;
};

struct TaskStep {
    std::string screen;
    std::string element;

    bool operator==(const TaskStep&) const = default;
};

/// A concrete walk through one feature's flow; each step activates a trigger.
struct TaskPath {
    std::string name;
    std::vector<TaskStep> steps;

    bool operator==(const TaskPath&) const = default;
};

/// One feature: the story it realizes, the screens it uses, and its flow.
struct Feature {
    std::string id;
    std::string story;
    std::vector<std::string> screens;
    std::vector<Connector> connectors;
    std::vector<TaskPath> tasks;

    bool uses_screen(const std::string& sid) const {
        return std::find(screens.begin(), screens.end(), sid) != screens.end();
    }

    bool operator==(const Feature&) const = default;
};

/// Root record: everything a wireflow document declares.
struct Project {
    std::string name;
    std::vector<UserStory> stories;
    std::vector<Feature> features;
    std::vector<Screen> screens;
    LintConfig config;

    const Screen* find_screen(const std::string& sid) const {
        for (const auto& s : screens)
            if (s.id == sid) return &s;
        return nullptr;
    }

    const Feature* find_feature(const std::string& fid) const {
        for (const auto& f : features)
            if (f.id == fid) return &f;
        return nullptr;
    }

    bool operator==(const Project&) const = default;
};

struct FlowEdge {
    std::string source;
    std::string trigger;
    std::string target;
    ConnectorKind kind = ConnectorKind::Normal;

    bool operator==(const FlowEdge&) const = default;
};

/// Graph view of one feature's wireflow.
struct FlowGraph {
    std::vector<std::string> nodes;
    std::vector<FlowEdge> edges;
    std::string entry;

    bool has_node(const std::string& id) const {
        return std::find(nodes.begin(), nodes.end(), id) != nodes.end();
    }

    bool operator==(const FlowGraph&) const = default;
};

/// One structural violation. `feature`/`connector` are empty for
/// project-level findings.
struct StructureError {
    std::string code;
    std::string feature;
    std::string connector;
    std::string message;

    bool operator==(const StructureError&) const = default;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Returns every structural violation, deterministically ordered by
/// (feature id, connector id, error code). Empty result == structurally valid.
///
/// Codes: E-CONN-SRC connector source is not a trigger; E-REF dangling
/// reference; E-DUP duplicate id (or duplicate entry tag); E-EMPTY feature
/// without screens.
inline std::vector<StructureError> validate_structure(const Project& project) {
    std::vector<StructureError> errors;
    auto add = [&](std::string code, std::string feature, std::string connector,
                   std::string message) {
        errors.push_back({std::move(code), std::move(feature), std::move(connector),
                          std::move(message)});
    };

    std::set<std::string> seen;
    for (const auto& s : project.stories)
        if (!seen.insert(s.id).second) add("E-DUP", "", "", "duplicate story id '" + s.id + "'");
    seen.clear();
    for (const auto& s : project.screens) {
        if (!seen.insert(s.id).second) add("E-DUP", "", "", "duplicate screen id '" + s.id + "'");
        std::set<std::string> elems;
        for (const auto& e : s.elements)
            if (!elems.insert(element_id(e)).second)
                add("E-DUP", "", "",
                    "duplicate element id '" + element_id(e) + "' on screen '" + s.id + "'");
    }
    seen.clear();
    for (const auto& f : project.features)
        if (!seen.insert(f.id).second) add("E-DUP", "", "", "duplicate feature id '" + f.id + "'");

    for (const auto& f : project.features) {
        bool story_found = false;
        for (const auto& s : project.stories) story_found |= (s.id == f.story);
        if (!story_found)
            add("E-REF", f.id, "", "feature references unknown story '" + f.story + "'");

        if (f.screens.empty()) add("E-EMPTY", f.id, "", "feature has no screens");

        int entries = 0;
        std::set<std::string> used;
        for (const auto& sid : f.screens) {
            if (!used.insert(sid).second)
                add("E-DUP", f.id, "", "screen '" + sid + "' listed twice");
            const Screen* s = project.find_screen(sid);
            if (!s) {
                add("E-REF", f.id, "", "feature uses unknown screen '" + sid + "'");
            } else if (s->tags.entry) {
                ++entries;
            }
        }
        if (entries > 1) add("E-DUP", f.id, "", "feature has more than one entry screen");

        std::set<std::string> conn_ids;
        for (const auto& c : f.connectors) {
            if (!conn_ids.insert(c.id).second)
                add("E-DUP", f.id, c.id, "duplicate connector id '" + c.id + "'");
            const Screen* src = project.find_screen(c.source_screen);
            if (!src || !f.uses_screen(c.source_screen)) {
                add("E-REF", f.id, c.id,
                    "connector source screen '" + c.source_screen + "' is not part of the feature");
            } else if (const Element* e = src->find_element(c.source_element); !e) {
                add("E-REF", f.id, c.id,
                    "connector source element '" + c.source_element + "' not found on screen '" +
                        c.source_screen + "'");
            } else if (!is_trigger(*e)) {
                add("E-CONN-SRC", f.id, c.id,
                    "connector must start from a trigger, but '" + c.source_element +
                        "' is not one");
            }
            if (!project.find_screen(c.target) || !f.uses_screen(c.target))
                add("E-REF", f.id, c.id,
                    "connector target screen '" + c.target + "' is not part of the feature");
        }

        std::set<std::string> task_names;
        for (const auto& t : f.tasks) {
            if (!task_names.insert(t.name).second)
                add("E-DUP", f.id, "", "duplicate task name '" + t.name + "'");
            for (const auto& step : t.steps) {
                const Screen* s = project.find_screen(step.screen);
                if (!s || !f.uses_screen(step.screen)) {
                    add("E-REF", f.id, "",
                        "task '" + t.name + "' steps through unknown screen '" + step.screen + "'");
                } else if (!s->find_element(step.element)) {
                    add("E-REF", f.id, "",
                        "task '" + t.name + "' activates unknown element '" + step.element +
                            "' on screen '" + step.screen + "'");
                }
            }
        }
    }

    std::stable_sort(errors.begin(), errors.end(),
                     [](const StructureError& a, const StructureError& b) {
                         return std::tie(a.feature, a.connector, a.code) <
                                std::tie(b.feature, b.connector, b.code);
                     });
    return errors;
}

/// Graph view of one feature: one node per used screen, one edge per
/// connector, entry = the screen tagged entry (else the first declared).
/// Throws E-NO-SCREENS for an empty feature.
inline FlowGraph build_graph(const Feature& feature, const Project& project) {
    if (feature.screens.empty())
        throw Error("E-NO-SCREENS", "feature '" + feature.id + "' has no screens");

    FlowGraph g;
    g.nodes = feature.screens;
    g.entry = feature.screens.front();
    for (const auto& sid : feature.screens) {
        const Screen* s = project.find_screen(sid);
        if (s && s->tags.entry) {
            g.entry = sid;
            break;
        }
    }
    for (const auto& c : feature.connectors)
        g.edges.push_back({c.source_screen, c.source_element, c.target, c.kind});
    return g;
}

/// Ascending by priority, declaration order preserved among ties.
inline std::vector<UserStory> prioritize_stories(std::vector<UserStory> stories) {
    std::stable_sort(stories.begin(), stories.end(),
                     [](const UserStory& a, const UserStory& b) { return a.priority < b.priority; });
    return stories;
}

}  // namespace startflow
