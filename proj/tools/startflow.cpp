// startflow: parse, verify, measure and render wireflow models.
//
// Exit codes: 0 clean, 1 defects at or above the --fail-on severity,
// 2 parse/structural error, 3 I/O or usage error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "startflow/config_io.hpp"
#include "startflow/dsl.hpp"
#include "startflow/evalkit.hpp"
#include "startflow/lint.hpp"
#include "startflow/metrics.hpp"
#include "startflow/model.hpp"
#include "startflow/render.hpp"
#include "startflow/wizard.hpp"

#ifdef _WIN32
#include <io.h>
#define STARTFLOW_ISATTY _isatty(0)
#else
#include <unistd.h>
#define STARTFLOW_ISATTY isatty(0)
#endif

namespace {

constexpr int kExitClean = 0;
constexpr int kExitDefects = 1;
constexpr int kExitParse = 2;
constexpr int kExitUsage = 3;

struct UsageError {
    std::string message;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError{"cannot read '" + path + "'"};
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError{"cannot write '" + path + "'"};
    out << content;
}

void emit(const std::optional<std::string>& out_path, const std::string& content) {
    if (out_path)
        write_file(*out_path, content);
    else
        std::cout << content;
}

void print_parse_errors(const std::string& path, const startflow::ParseResult& result,
                        bool json) {
    if (json) {
        nlohmann::ordered_json j;
        j["errors"] = nlohmann::ordered_json::array();
        for (const auto& e : result.errors)
            j["errors"].push_back({{"line", e.span.line},
                                   {"column", e.span.column},
                                   {"length", e.span.length},
                                   {"code", e.code},
                                   {"message", e.message}});
        std::cout << j.dump(2) << "\n";
        return;
    }
    for (const auto& e : result.errors)
        std::cerr << path << ":" << e.span.line << ":" << e.span.column << ": error[" << e.code
                  << "]: " << e.message << "\n";
}

startflow::LintConfig load_config(const std::optional<std::string>& config_path) {
    std::string path;
    if (config_path) {
        path = *config_path;
    } else if (const char* env = std::getenv("STARTFLOW_CONFIG"); env && *env) {
        path = env;
    } else {
        return {};
    }
    return startflow::lint_config_from_json(read_file(path));
}

/// Parses a document and loads the effective config into project.config.
/// Returns nullopt (after printing errors) when parsing failed.
std::optional<startflow::Project> load_project(const std::string& path,
                                               const std::optional<std::string>& config_path,
                                               bool json_errors = false) {
    startflow::ParseResult result = startflow::parse(read_file(path));
    if (!result.ok()) {
        print_parse_errors(path, result, json_errors);
        return std::nullopt;
    }
    result.project.config = load_config(config_path);
    return std::move(result.project);
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

int cmd_check(const std::string& path, const std::optional<std::string>& config_path,
              bool json, int fail_on, unsigned threads) {
    auto project = load_project(path, config_path, json);
    if (!project) return kExitParse;

    const startflow::DefectReport report =
        startflow::lint_project(*project, project->config, threads);
    if (json)
        std::cout << startflow::report_to_json(report).dump(2) << "\n";
    else
        std::cout << startflow::report_to_text(report);

    // E-CONN-SRC alone does not force exit 2: it resurfaces as rule R8.
    bool hard_structural = false;
    for (const auto& e : report.structure)
        hard_structural |= (e.code != "E-CONN-SRC" || !project->config.enabled("R8"));
    if (hard_structural) return kExitParse;
    for (const auto& d : report.defects)
        if (d.severity >= fail_on) return kExitDefects;
    return kExitClean;
}

int cmd_fmt(const std::string& path, bool check_only, const std::optional<std::string>& out_path) {
    const std::string source = read_file(path);
    const startflow::ParseResult result = startflow::parse(source);
    if (!result.ok()) {
        print_parse_errors(path, result, false);
        return kExitParse;
    }
    const std::string canonical = startflow::format(result.project);
    if (check_only) {
        if (canonical == source) return kExitClean;
        std::cerr << path << ": not in canonical form\n";
        return kExitDefects;
    }
    emit(out_path, canonical);
    return kExitClean;
}

int cmd_graph(const std::string& path, const std::optional<std::string>& config_path,
              const std::optional<std::string>& feature,
              const std::optional<std::string>& out_path) {
    auto project = load_project(path, config_path);
    if (!project) return kExitParse;
    const auto structure = startflow::validate_structure(*project);
    if (!structure.empty()) {
        for (const auto& e : structure)
            std::cerr << path << ": " << e.code << ": " << e.message << "\n";
        return kExitParse;
    }
    emit(out_path, startflow::to_dot(*project, feature));
    return kExitClean;
}

int cmd_metrics(const std::string& path, const std::optional<std::string>& config_path,
                const std::optional<std::string>& task, const std::optional<std::string>& from,
                const std::optional<std::string>& to, const std::optional<std::string>& feature,
                bool no_error_back) {
    auto project = load_project(path, config_path);
    if (!project) return kExitParse;
    const auto structure = startflow::validate_structure(*project);
    if (!structure.empty()) {
        for (const auto& e : structure)
            std::cerr << path << ": " << e.code << ": " << e.message << "\n";
        return kExitParse;
    }

    if (task) {
        for (const auto& f : project->features) {
            for (const auto& t : f.tasks) {
                if (t.name != *task) continue;
                const auto flow = startflow::build_graph(f, *project);
                std::cout << startflow::action_count(t, flow) << "\n";
                return kExitClean;
            }
        }
        throw UsageError{"no task '" + *task + "' in " + path};
    }

    if (from || to) {
        if (!from || !to) throw UsageError{"--from and --to must be used together"};
        const startflow::Feature* f =
            feature ? project->find_feature(*feature)
                    : (project->features.empty() ? nullptr : &project->features.front());
        if (!f) throw UsageError{"no feature to measure (use --feature)"};
        const auto flow = startflow::build_graph(*f, *project);
        const auto n = startflow::shortest_actions(flow, *from, *to, !no_error_back);
        if (n)
            std::cout << *n << "\n";
        else
            std::cout << "unreachable\n";
        return kExitClean;
    }

    std::cout << startflow::metrics_report_json(*project).dump(2) << "\n";
    return kExitClean;
}

int cmd_eval(const std::string& path, const std::string& group, bool json) {
    const auto forms = startflow::load_defect_forms(read_file(path));
    const auto summary = startflow::summarize_defects(forms, group);
    if (json)
        std::cout << startflow::eval_summary_to_json(summary).dump(2) << "\n";
    else
        std::cout << startflow::eval_summary_to_text(summary);
    return kExitClean;
}

int cmd_tam(const std::string& path, const std::string& group, bool json) {
    const auto responses = startflow::load_tam_responses(read_file(path));
    const auto summary = startflow::summarize_tam(responses, group);
    if (json)
        std::cout << startflow::tam_summary_to_json(summary).dump(2) << "\n";
    else
        std::cout << startflow::tam_summary_to_text(summary);
    return kExitClean;
}

class StdinAnswers : public startflow::AnswerSource {
public:
    std::optional<bool> next() override {
        std::string line;
        while (std::getline(std::cin, line)) {
            const std::string t = startflow::to_lower(startflow::trim(line));
            if (t == "y" || t == "yes") return true;
            if (t == "n" || t == "no") return false;
            if (!t.empty()) std::cout << "please answer y or n\n";
        }
        return std::nullopt;
    }
};

int cmd_wizard(const std::string& path, const std::optional<std::string>& config_path,
               const std::optional<std::string>& answers_path,
               const std::optional<std::string>& session_path) {
    if (!answers_path && !STARTFLOW_ISATTY)
        throw UsageError{"stdin is not a terminal; use --answers <file> for scripted runs"};

    auto project = load_project(path, config_path);
    if (!project) return kExitParse;

    const std::string sidecar = session_path ? *session_path : path + ".session.json";
    startflow::WizardSession session;
    if (std::ifstream probe(sidecar); probe.good()) {
        try {
            session = startflow::session_from_json(nlohmann::json::parse(read_file(sidecar)));
        } catch (const nlohmann::json::exception& e) {
            throw UsageError{"corrupt session file '" + sidecar + "': " + e.what()};
        }
    } else {
        session.project_path = path;
    }

    std::unique_ptr<startflow::AnswerSource> source;
    if (answers_path)
        source = std::make_unique<startflow::ScriptedAnswers>(
            startflow::ScriptedAnswers::from_text(read_file(*answers_path)));
    else
        source = std::make_unique<StdinAnswers>();

    startflow::run_wizard(*project, session, *source, std::cout);
    write_file(sidecar, startflow::session_to_json(session).dump(2) + "\n");
    return kExitClean;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"StartFlow wireflow toolchain"};
    app.require_subcommand(1);

    std::string path, group;
    std::optional<std::string> config_path, out_path, feature, task, from, to, answers_path,
        session_path;
    bool json = false, check_only = false, no_error_back = false;
    int fail_on = 3;
    unsigned threads = 1;

    auto* check = app.add_subcommand("check", "Parse, validate and lint a wireflow document");
    check->add_option("file", path)->required();
    check->add_option("--config", config_path, "Lint config JSON (overrides STARTFLOW_CONFIG)");
    check->add_flag("--json", json, "JSON report instead of text");
    check->add_option("--fail-on", fail_on, "Exit 1 when a defect reaches this severity")
        ->check(CLI::Range(1, 4));
    check->add_option("--threads", threads, "Lint features concurrently");

    auto* fmt = app.add_subcommand("fmt", "Canonical formatter");
    fmt->add_option("file", path)->required();
    fmt->add_flag("--check", check_only, "Exit 1 when the file is not canonical");
    fmt->add_option("-o,--output", out_path, "Write to a file instead of stdout");

    auto* graph = app.add_subcommand("graph", "Export the flow as a DOT digraph");
    graph->add_option("file", path)->required();
    graph->add_option("--config", config_path);
    graph->add_option("--feature", feature, "Only this feature");
    graph->add_option("-o,--output", out_path, "Write to a file instead of stdout");

    auto* metrics = app.add_subcommand("metrics", "User-flow metrics");
    metrics->add_option("file", path)->required();
    metrics->add_option("--config", config_path);
    metrics->add_option("--task", task, "Print the action count of one task");
    metrics->add_option("--from", from, "Shortest path start screen");
    metrics->add_option("--to", to, "Shortest path target screen");
    metrics->add_option("--feature", feature, "Feature for --from/--to (default: first)");
    metrics->add_flag("--no-error-back", no_error_back,
                      "Ignore error/back edges in shortest paths");

    auto* wizard = app.add_subcommand("wizard", "Interactive Step 1-3 walkthrough");
    wizard->add_option("file", path)->required();
    wizard->add_option("--config", config_path);
    wizard->add_option("--answers", answers_path, "Scripted yes/no answers, one per line");
    wizard->add_option("--session", session_path, "Session file (default: <file>.session.json)");

    auto* eval = app.add_subcommand("eval", "Aggregate heuristic-evaluation defect forms");
    eval->add_option("file", path)->required();
    eval->add_option("--group", group, "Evaluation group to summarize")->required();
    eval->add_flag("--json", json);

    auto* tam = app.add_subcommand("tam", "Aggregate TAM questionnaire responses");
    tam->add_option("file", path)->required();
    tam->add_option("--group", group, "Respondent group to summarize")->required();
    tam->add_flag("--json", json);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitClean : kExitUsage;
    }

    try {
        if (check->parsed()) return cmd_check(path, config_path, json, fail_on, threads);
        if (fmt->parsed()) return cmd_fmt(path, check_only, out_path);
        if (graph->parsed()) return cmd_graph(path, config_path, feature, out_path);
        if (metrics->parsed())
            return cmd_metrics(path, config_path, task, from, to, feature, no_error_back);
        if (wizard->parsed()) return cmd_wizard(path, config_path, answers_path, session_path);
        if (eval->parsed()) return cmd_eval(path, group, json);
        if (tam->parsed()) return cmd_tam(path, group, json);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.message << "\n";
        return kExitUsage;
    } catch (const startflow::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        const std::string code = e.code();
        if (code == "E-UNKNOWN-FEATURE" || code == "E-EMPTY-GROUP" || code == "E-UNKNOWN-SCREEN")
            return kExitUsage;
        return kExitParse;  // data errors: E-CSV, E-BAD-SEVERITY, E-BROKEN-PATH, ...
    }
    return kExitUsage;
}
