#pragma once

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "startflow/model.hpp"

namespace startflow {

/// Number of trigger activations in a task walk, after checking the walk
/// against the flow: steps start at the entry screen, every step's trigger
/// has an edge, and consecutive steps are connected by one.
/// Throws E-BROKEN-PATH when the walk does not fit the flow.
inline int action_count(const TaskPath& path, const FlowGraph& flow) {
    if (path.steps.empty()) return 0;
    if (path.steps.front().screen != flow.entry)
        throw Error("E-BROKEN-PATH",
                    "task '" + path.name + "' does not start at entry screen '" + flow.entry + "'");

    for (size_t i = 0; i < path.steps.size(); ++i) {
        const TaskStep& step = path.steps[i];
        const bool last = (i + 1 == path.steps.size());
        bool matched = false;
        for (const auto& e : flow.edges) {
            if (e.source != step.screen || e.trigger != step.element) continue;
            if (last || e.target == path.steps[i + 1].screen) {
                matched = true;
                break;
            }
        }
        if (!matched)
            throw Error("E-BROKEN-PATH",
                        "task '" + path.name + "' step " + std::to_string(i + 1) + " (" +
                            step.screen + "." + step.element + ") has no matching connector");
    }
    return static_cast<int>(path.steps.size());
}

/// Fewest trigger activations from one screen to another; nullopt when the
/// target is unreachable. error/back edges count unless excluded.
/// Throws E-UNKNOWN-SCREEN for screens outside the flow.
inline std::optional<int> shortest_actions(const FlowGraph& flow, const std::string& from,
                                           const std::string& to,
                                           bool include_error_back = true) {
    if (!flow.has_node(from)) throw Error("E-UNKNOWN-SCREEN", "no screen '" + from + "' in flow");
    if (!flow.has_node(to)) throw Error("E-UNKNOWN-SCREEN", "no screen '" + to + "' in flow");
    if (from == to) return 0;

    std::map<std::string, int> dist{{from, 0}};
    std::deque<std::string> queue{from};
    while (!queue.empty()) {
        const std::string cur = queue.front();
        queue.pop_front();
        for (const auto& e : flow.edges) {
            if (e.source != cur) continue;
            if (!include_error_back && e.kind != ConnectorKind::Normal) continue;
            if (dist.count(e.target)) continue;
            dist[e.target] = dist[cur] + 1;
            if (e.target == to) return dist[e.target];
            queue.push_back(e.target);
        }
    }
    return std::nullopt;
}

/// Screens that cannot be reached from the entry screen.
inline std::set<std::string> reachability(const FlowGraph& flow) {
    std::set<std::string> reached{flow.entry};
    std::deque<std::string> queue{flow.entry};
    while (!queue.empty()) {
        const std::string cur = queue.front();
        queue.pop_front();
        for (const auto& e : flow.edges)
            if (e.source == cur && flow.has_node(e.target) && reached.insert(e.target).second)
                queue.push_back(e.target);
    }
    std::set<std::string> unreachable;
    for (const auto& n : flow.nodes)
        if (!reached.count(n)) unreachable.insert(n);
    return unreachable;
}

/// Flow metrics for the whole project as a JSON table: per-feature size and
/// unreachable screens, plus the action count of every declared task.
inline nlohmann::ordered_json metrics_report_json(const Project& project) {
    nlohmann::ordered_json j;
    j["project"] = project.name;
    j["features"] = nlohmann::ordered_json::array();
    j["tasks"] = nlohmann::ordered_json::array();
    for (const auto& f : project.features) {
        const FlowGraph flow = build_graph(f, project);
        nlohmann::ordered_json jf;
        jf["id"] = f.id;
        jf["screens"] = flow.nodes.size();
        jf["connectors"] = flow.edges.size();
        jf["entry"] = flow.entry;
        jf["unreachable"] = reachability(flow);
        j["features"].push_back(std::move(jf));
        for (const auto& t : f.tasks) {
            nlohmann::ordered_json jt;
            jt["feature"] = f.id;
            jt["task"] = t.name;
            jt["actions"] = action_count(t, flow);
            j["tasks"].push_back(std::move(jt));
        }
    }
    return j;
}

}  // namespace startflow
