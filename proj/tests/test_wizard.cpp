#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "startflow/wizard.hpp"

using namespace startflow;

namespace {

/// clean.sfw has one feature: a full pass asks 6 + 7 + 8 questions.
constexpr int kStep1 = 6;
constexpr int kStep2 = 7;
constexpr int kStep3 = 8;

ScriptedAnswers all_yes(int n) { return ScriptedAnswers(std::vector<bool>(n, true)); }

}  // namespace

TEST_CASE("scripted all-yes run completes with no pending refinements") {
    const Project p = testutil::load_fixture("clean.sfw");
    WizardSession session;
    session.project_path = "clean.sfw";
    std::ostringstream out;
    auto answers = all_yes(kStep1 + kStep2 + kStep3);
    const auto outcome = run_wizard(p, session, answers, out);
    CHECK(outcome == WizardOutcome::Complete);
    CHECK(session.complete);
    CHECK(session.pending.empty());
    CHECK(session.answers.size() == kStep1 + kStep2 + kStep3);
    // The questioning points are displayed verbatim.
    CHECK(out.str().find(step1_questions()[0]) != std::string::npos);
    CHECK(out.str().find(step2_questions()[0]) != std::string::npos);
    CHECK(out.str().find(rules()[0].question) != std::string::npos);
}

TEST_CASE("a step-3 'no' records a pending refinement and re-enters step 2") {
    const Project p = testutil::load_fixture("clean.sfw");
    WizardSession session;
    std::vector<bool> answers(kStep1 + kStep2 + kStep3, true);
    answers[kStep1 + kStep2 + 1] = false;  // "no" on R2 for the only feature

    std::ostringstream out;
    ScriptedAnswers source(answers);
    const auto outcome = run_wizard(p, session, source, out);
    CHECK(outcome == WizardOutcome::NeedsRefinement);
    CHECK_FALSE(session.complete);
    CHECK(session.step == 2);  // refined wireflows re-enter verification
    REQUIRE(session.pending.size() == 1);
    CHECK(session.pending[0].feature == "send-message");
    CHECK(session.pending[0].question == "R2");
    CHECK(session.pending[0].note == rules()[1].question);
}

TEST_CASE("k distinct step-3 noes record exactly k pendings; next pass clears them") {
    const Project p = testutil::load_fixture("clean.sfw");
    for (int k = 1; k <= kStep3; ++k) {
        CAPTURE(k);
        WizardSession session;
        std::vector<bool> answers(kStep1 + kStep2 + kStep3, true);
        for (int i = 0; i < k; ++i) answers[static_cast<size_t>(kStep1 + kStep2 + i)] = false;
        std::ostringstream out;
        ScriptedAnswers source(answers);
        CHECK(run_wizard(p, session, source, out) == WizardOutcome::NeedsRefinement);
        CHECK(session.pending.size() == static_cast<size_t>(k));
        CHECK(session.step == 2);

        // After "refinement", an all-yes pass re-runs steps 2..3 and finishes.
        auto yes = all_yes(kStep2 + kStep3);
        std::ostringstream out2;
        CHECK(run_wizard(p, session, yes, out2) == WizardOutcome::Complete);
        CHECK(session.complete);
        CHECK(session.pending.empty());
    }
}

TEST_CASE("exhausted answers pause the session; rerun resumes at the recorded step") {
    const Project p = testutil::load_fixture("clean.sfw");
    WizardSession session;

    // Only step 1 answered: pauses before finishing step 2.
    auto first = all_yes(kStep1 + 3);
    std::ostringstream out1;
    CHECK(run_wizard(p, session, first, out1) == WizardOutcome::Paused);
    CHECK(session.step == 2);
    CHECK_FALSE(session.complete);

    // Resume: step 1 is not asked again.
    auto rest = all_yes(kStep2 + kStep3);
    std::ostringstream out2;
    CHECK(run_wizard(p, session, rest, out2) == WizardOutcome::Complete);
    CHECK(out2.str().find("Step 1") == std::string::npos);
    CHECK(session.complete);
}

TEST_CASE("session round-trips through JSON") {
    WizardSession s;
    s.project_path = "x.sfw";
    s.step = 2;
    s.complete = false;
    s.pending = {{"f1", "R2", "a question"}, {"", "S1-Q3", "another"}};
    s.answers = {{1, "", "S1-Q1", true}, {3, "f1", "R2", false}};
    const auto j = session_to_json(s);
    const WizardSession back = session_from_json(nlohmann::json::parse(j.dump()));
    CHECK(back == s);
}

TEST_CASE("scripted answer files accept y/n/yes/no and comments") {
    auto src = ScriptedAnswers::from_text("# header\ny\nno\nYES\n\nn\n");
    CHECK(src.next() == true);
    CHECK(src.next() == false);
    CHECK(src.next() == true);
    CHECK(src.next() == false);
    CHECK_FALSE(src.next().has_value());
    CHECK_THROWS_AS(ScriptedAnswers::from_text("maybe\n"), Error);
}

TEST_CASE("scripted runs are deterministic") {
    const Project p = testutil::load_fixture("clean.sfw");
    std::string first, second;
    for (std::string* target : {&first, &second}) {
        WizardSession session;
        auto answers = all_yes(kStep1 + kStep2 + kStep3);
        std::ostringstream out;
        run_wizard(p, session, answers, out);
        *target = out.str();
    }
    CHECK(first == second);
}
