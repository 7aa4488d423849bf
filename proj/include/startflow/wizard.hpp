#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "startflow/lint.hpp"
#include "startflow/model.hpp"

namespace startflow {

/// Step-1 questioning points: selecting and ordering the features.
inline const std::vector<std::string>& step1_questions() {
    static const std::vector<std::string> qs = {
        "Have we selected the features we want to create in the wireflow? Is there any other "
        "feature that could be used at this time?",
        "Of the selected features, which is the most important? And, the next one?",
        "In the first contact with the application, what tasks will the user be able to perform?",
        "For users who already have experience with the application, what tasks will they be "
        "able to perform?",
        "What market demand will the application meet? In what way?",
        "Are there competitors in the market? What tasks will be similar? What will be "
        "innovative about the application?",
    };
    return qs;
}

/// Step-2 questioning points: building each feature's wireflow.
inline const std::vector<std::string>& step2_questions() {
    static const std::vector<std::string> qs = {
        "How many screens does it take for the user to execute this feature from start to "
        "finish?",
        "What are the necessary elements on each screen for the user to perform this feature?",
        "Which other screen will the trigger on one screen take the user to?",
        "If the user enters information incorrectly, what will happen to the flow of feature in "
        "the application?",
        "If the user wants to return to a previous screen, is it possible?",
        "Are there ways for the user to perform this feature with fewer clicks?",
        "What will happen to the application flow when the user completes the feature?",
    };
    return qs;
}

/// An unresolved "no" answer: this wireflow still needs work.
struct Refinement {
    std::string feature;   // empty for project-level (Step 1) questions
    std::string question;  // S1-Qn, S2-Qn or rule id R1..R8
    std::string note;

    bool operator==(const Refinement&) const = default;
};

struct AnswerRecord {
    int step = 1;
    std::string feature;
    std::string question;
    bool yes = false;

    bool operator==(const AnswerRecord&) const = default;
};

/// Persistent wizard state. Steps run 1 -> 2 -> 3; a Step-3 pass with any
/// negative answer sends the session back to step 2 so the refined wireflows
/// re-enter verification.
struct WizardSession {
    std::string project_path;
    int step = 1;
    bool complete = false;
    std::vector<Refinement> pending;
    std::vector<AnswerRecord> answers;

    bool operator==(const WizardSession&) const = default;
};

inline nlohmann::ordered_json session_to_json(const WizardSession& s) {
    nlohmann::ordered_json j;
    j["project"] = s.project_path;
    j["step"] = s.step;
    j["complete"] = s.complete;
    j["pending"] = nlohmann::ordered_json::array();
    for (const auto& p : s.pending)
        j["pending"].push_back({{"feature", p.feature}, {"question", p.question}, {"note", p.note}});
    j["answers"] = nlohmann::ordered_json::array();
    for (const auto& a : s.answers)
        j["answers"].push_back({{"step", a.step},
                                {"feature", a.feature},
                                {"question", a.question},
                                {"answer", a.yes ? "yes" : "no"}});
    return j;
}

inline WizardSession session_from_json(const nlohmann::json& j) {
    WizardSession s;
    s.project_path = j.value("project", "");
    s.step = j.value("step", 1);
    s.complete = j.value("complete", false);
    for (const auto& p : j.value("pending", nlohmann::json::array()))
        s.pending.push_back({p.value("feature", ""), p.value("question", ""), p.value("note", "")});
    for (const auto& a : j.value("answers", nlohmann::json::array()))
        s.answers.push_back({a.value("step", 1), a.value("feature", ""), a.value("question", ""),
                             a.value("answer", "") == "yes"});
    if (s.step < 1 || s.step > 3) throw Error("E-SESSION", "corrupt session: bad step");
    return s;
}

/// Where the yes/no answers come from: a script file or a person.
class AnswerSource {
public:
    virtual ~AnswerSource() = default;
    /// nullopt = no more answers; the session pauses and can resume later.
    virtual std::optional<bool> next() = 0;
};

class ScriptedAnswers : public AnswerSource {
public:
    explicit ScriptedAnswers(std::vector<bool> answers) : answers_(std::move(answers)) {}

    /// One answer per line: y/yes/n/no, blank lines and # comments skipped.
    static ScriptedAnswers from_text(std::string_view text) {
        std::vector<bool> answers;
        std::string line;
        auto flush = [&] {
            const std::string t = to_lower(trim(line));
            line.clear();
            if (t.empty() || t[0] == '#') return;
            if (t == "y" || t == "yes")
                answers.push_back(true);
            else if (t == "n" || t == "no")
                answers.push_back(false);
            else
                throw Error("E-ANSWERS", "expected yes or no, got '" + t + "'");
        };
        for (char c : text) {
            if (c == '\n')
                flush();
            else
                line += c;
        }
        flush();
        return ScriptedAnswers(std::move(answers));
    }

    std::optional<bool> next() override {
        if (pos_ >= answers_.size()) return std::nullopt;
        return answers_[pos_++];
    }

private:
    std::vector<bool> answers_;
    size_t pos_ = 0;
};

enum class WizardOutcome { Complete, NeedsRefinement, Paused };

namespace detail {

class WizardRun {
public:
    WizardRun(const Project& project, WizardSession& session, AnswerSource& source,
              std::ostream& out)
        : project_(project), session_(session), source_(source), out_(out) {}

    WizardOutcome run() {
        if (session_.complete) {
            out_ << "Session already complete: wireflows verified.\n";
            return WizardOutcome::Complete;
        }
        if (session_.step == 1) {
            if (!step1()) return pause();
            session_.step = 2;
        }
        if (session_.step == 2) {
            if (!step2()) return pause();
            session_.step = 3;
        }
        if (!step3()) return pause();

        if (step3_pending_count() > 0) {
            session_.step = 2;
            out_ << "\n" << step3_pending_count()
                 << " refinement(s) pending. Refine the wireflows and run the wizard again; "
                    "the session re-enters Step 2.\n";
            return WizardOutcome::NeedsRefinement;
        }
        session_.complete = true;
        out_ << "\nAll questioning points answered positively; the wireflows are verified.\n";
        return WizardOutcome::Complete;
    }

private:
    bool step1() {
        out_ << "== Step 1: Understanding and organizing the features ==\n";
        out_ << "Stories by priority:\n";
        int rank = 0;
        for (const auto& s : prioritize_stories(project_.stories)) {
            out_ << "  " << ++rank << ". " << s.id << " (prio " << s.priority << "): As a "
                 << s.role << ", I want " << s.want;
            if (s.why) out_ << ", so that " << *s.why;
            out_ << "\n";
        }
        const auto& qs = step1_questions();
        for (size_t i = 0; i < qs.size(); ++i) {
            const std::string qid = "S1-Q" + std::to_string(i + 1);
            if (!ask(1, "", qid, qs[i])) return false;
        }
        return true;
    }

    bool step2() {
        out_ << "\n== Step 2: Building the wireflows ==\n";
        const auto& qs = step2_questions();
        for (const auto& f : project_.features) {
            out_ << "-- Feature " << f.id << " (" << f.screens.size() << " screens, "
                 << f.connectors.size() << " connectors) --\n";
            for (size_t i = 0; i < qs.size(); ++i) {
                const std::string qid = "S2-Q" + std::to_string(i + 1);
                if (!ask(2, f.id, qid, qs[i])) return false;
            }
        }
        return true;
    }

    bool step3() {
        out_ << "\n== Step 3: Verifying and refining the wireflows ==\n";
        for (const auto& f : project_.features) {
            out_ << "-- Feature " << f.id << " --\n";
            const auto defects = lint_feature(f, project_, project_.config);
            for (const auto& rule : rules()) {
                if (!project_.config.enabled(rule.id)) continue;
                int findings = 0;
                for (const auto& d : defects) findings += (d.rule == rule.id);
                out_ << "   (" << rule.heuristic << "; verification found " << findings
                     << " finding(s) for " << rule.id << ")\n";
                if (!ask(3, f.id, rule.id, rule.question)) return false;
            }
        }
        return true;
    }

    /// Asks one question; returns false when the answer source dried up.
    bool ask(int step, const std::string& feature, const std::string& qid,
             const std::string& question) {
        out_ << "[" << qid << "] " << question << " (y/n)\n";
        const auto answer = source_.next();
        if (!answer) return false;
        out_ << "-> " << (*answer ? "yes" : "no") << "\n";
        session_.answers.push_back({step, feature, qid, *answer});
        if (*answer) {
            std::erase_if(session_.pending, [&](const Refinement& r) {
                return r.feature == feature && r.question == qid;
            });
        } else {
            bool already = false;
            for (const auto& r : session_.pending)
                already |= (r.feature == feature && r.question == qid);
            if (!already) session_.pending.push_back({feature, qid, question});
        }
        return true;
    }

    WizardOutcome pause() {
        out_ << "\nNo more answers; session paused at step " << session_.step
             << ". Run again to resume.\n";
        return WizardOutcome::Paused;
    }

    int step3_pending_count() const {
        int n = 0;
        for (const auto& r : session_.pending)
            n += (!r.question.empty() && r.question[0] == 'R');
        return n;
    }

    const Project& project_;
    WizardSession& session_;
    AnswerSource& source_;
    std::ostream& out_;
};

}  // namespace detail

/// Runs one wizard pass from the session's current step. The session is
/// updated in place; persisting it is the caller's job.
inline WizardOutcome run_wizard(const Project& project, WizardSession& session,
                                AnswerSource& source, std::ostream& out) {
    return detail::WizardRun(project, session, source, out).run();
}

}  // namespace startflow
