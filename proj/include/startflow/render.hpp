#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "startflow/model.hpp"

namespace startflow {

namespace detail {

inline std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out += c;
    }
    return out;
}

/// Multi-line node label: title first, then one line per element so the node
/// reads like a wireframe sketch.
inline std::string node_label(const Screen& s) {
    std::string label = s.title;
    for (const auto& e : s.elements) {
        label += '\n';
        if (const auto* l = std::get_if<Layout>(&e)) {
            label += l->kind;
            if (l->label) label += ": " + *l->label;
        } else if (const auto* f = std::get_if<InputField>(&e)) {
            label += "field: " + f->label;
            if (f->required == Requiredness::Yes) label += " *";
            if (f->required == Requiredness::Unspecified) label += " ?";
        } else if (const auto* b = std::get_if<TriggerText>(&e)) {
            label += "[ " + b->label + " ]";
        } else if (const auto* i = std::get_if<TriggerIcon>(&e)) {
            label += "( " + i->icon + " )";
        }
    }
    return label;
}

inline std::string node_statement(const Screen& s, const std::string& indent) {
    std::string attrs = "label=\"" + dot_escape(node_label(s)) + "\"";
    if (s.tags.entry) attrs += ", peripheries=2";
    if (s.tags.error)
        attrs += ", color=\"red\"";
    else if (s.tags.feedback)
        attrs += ", color=\"darkgreen\"";
    return indent + "\"" + dot_escape(s.id) + "\" [" + attrs + "];\n";
}

}  // namespace detail

/// Renders the project (or one feature of it) as a DOT digraph: one node per
/// screen, one labeled edge per connector, one cluster per feature. Emission
/// order is fully determined by ids, so equal models give equal bytes.
/// Throws E-UNKNOWN-FEATURE for a filter that names no feature.
inline std::string to_dot(const Project& project,
                          const std::optional<std::string>& feature_filter = std::nullopt) {
    if (feature_filter && !project.find_feature(*feature_filter))
        throw Error("E-UNKNOWN-FEATURE", "no feature '" + *feature_filter + "' in project");

    std::vector<const Feature*> features;
    for (const auto& f : project.features)
        if (!feature_filter || f.id == *feature_filter) features.push_back(&f);
    std::sort(features.begin(), features.end(),
              [](const Feature* a, const Feature* b) { return a->id < b->id; });

    // A screen belongs to a cluster only when exactly one feature in scope
    // uses it; shared and unused screens live at the top level.
    std::map<std::string, int> use_count;
    for (const Feature* f : features)
        for (const auto& sid : f->screens) ++use_count[sid];

    std::vector<const Screen*> top_level;
    for (const auto& s : project.screens) {
        const auto it = use_count.find(s.id);
        const bool in_scope = !feature_filter || (it != use_count.end());
        if (in_scope && (it == use_count.end() || it->second > 1)) top_level.push_back(&s);
    }
    std::sort(top_level.begin(), top_level.end(),
              [](const Screen* a, const Screen* b) { return a->id < b->id; });

    std::string out = "digraph \"" + detail::dot_escape(project.name) + "\" {\n";
    out += "  rankdir=LR;\n";
    out += "  node [shape=box];\n";

    for (const Screen* s : top_level) out += detail::node_statement(*s, "  ");

    for (const Feature* f : features) {
        out += "  subgraph \"cluster_" + detail::dot_escape(f->id) + "\" {\n";
        out += "    label=\"" + detail::dot_escape(f->id) + "\";\n";

        std::vector<const Screen*> own;
        for (const auto& sid : f->screens)
            if (use_count[sid] == 1)
                if (const Screen* s = project.find_screen(sid)) own.push_back(s);
        std::sort(own.begin(), own.end(),
                  [](const Screen* a, const Screen* b) { return a->id < b->id; });
        for (const Screen* s : own) out += detail::node_statement(*s, "    ");

        std::vector<const Connector*> conns;
        for (const auto& c : f->connectors) conns.push_back(&c);
        std::sort(conns.begin(), conns.end(), [](const Connector* a, const Connector* b) {
            return std::tie(a->source_screen, a->source_element, a->target, a->kind) <
                   std::tie(b->source_screen, b->source_element, b->target, b->kind);
        });
        for (const Connector* c : conns) {
            std::string label = c->source_element;
            if (const Screen* src = project.find_screen(c->source_screen))
                if (const Element* e = src->find_element(c->source_element))
                    label = trigger_label(*e);
            std::string attrs = "label=\"" + detail::dot_escape(label) + "\"";
            if (c->kind == ConnectorKind::Error) attrs += ", style=dashed";
            if (c->kind == ConnectorKind::Back) attrs += ", style=dotted";
            out += "    \"" + detail::dot_escape(c->source_screen) + "\" -> \"" +
                   detail::dot_escape(c->target) + "\" [" + attrs + "];\n";
        }
        out += "  }\n";
    }
    out += "}\n";
    return out;
}

}  // namespace startflow
