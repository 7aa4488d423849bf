#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "startflow/dsl.hpp"
#include "startflow/model.hpp"

using namespace startflow;

TEST_CASE("parse: smallest grammar instance") {
    const auto result = parse(
        "story US1 as \"student\" want \"request CAA use\" prio 1\n"
        "screen home entry {\n"
        "  button go \"Go\"\n"
        "}\n"
        "feature f1 for US1 {\n"
        "  use home\n"
        "}\n");
    REQUIRE(result.ok());
    const Project& p = result.project;
    CHECK(p.stories.size() == 1);
    CHECK(p.stories[0].id == "US1");
    CHECK(p.stories[0].role == "student");
    CHECK(p.stories[0].priority == 1);
    CHECK(p.screens.size() == 1);
    CHECK(p.screens[0].tags.entry);
    CHECK(p.features.size() == 1);
}

TEST_CASE("parse: layout-sourced connect parses, then validation flags it") {
    const auto result = parse(
        "screen home entry {\n"
        "  layout card1 card \"Summary\"\n"
        "  button go \"Continue\"\n"
        "}\n"
        "screen detail {\n"
        "  button bk \"Go back\"\n"
        "}\n"
        "story S1 as \"user\" want \"browse\" prio 1\n"
        "feature f1 for S1 {\n"
        "  use home detail\n"
        "  connect home.card1 -> detail\n"
        "}\n");
    REQUIRE(result.ok());
    const auto errors = validate_structure(result.project);
    REQUIRE(errors.size() == 1);
    CHECK(errors[0].code == "E-CONN-SRC");
}

TEST_CASE("parse: unterminated string points at the opening quote") {
    const auto result = parse("story S1 as \"user want \"x\" prio 1\n");
    // The dangling quote near the end of the line is the one that never closes.
    REQUIRE_FALSE(result.ok());
    bool found = false;
    for (const auto& e : result.errors)
        found |= (e.code == "E-LEX" || e.code == "E-SYN");
    CHECK(found);

    const auto single = parse("screen a \"Title\n");
    REQUIRE(single.errors.size() == 1);
    CHECK(single.errors[0].code == "E-LEX");
    CHECK(single.errors[0].message == "unterminated string literal");
    CHECK(single.errors[0].span.line == 1);
    CHECK(single.errors[0].span.column == 10);  // the opening quote
}

TEST_CASE("parse: recovery continues past bad statements") {
    const auto result = parse(
        "story S1 as \"user\" want \"w\" prio 1\n"
        "bogus statement here\n"
        "screen a entry {\n"
        "  gadget x\n"
        "  button go \"Continue\"\n"
        "}\n"
        "feature f1 for S1 {\n"
        "  use a\n"
        "}\n");
    CHECK(result.errors.size() == 2);
    CHECK(result.project.stories.size() == 1);
    CHECK(result.project.screens.size() == 1);
    CHECK(result.project.screens[0].elements.size() == 1);  // gadget line skipped
    CHECK(result.project.features.size() == 1);
}

TEST_CASE("parse: unclosed block is reported") {
    const auto result = parse("screen a entry {\n  button go \"Go\"\n");
    REQUIRE_FALSE(result.ok());
    CHECK(result.errors.back().message == "block is never closed");
}

TEST_CASE("parse: duplicate tag and bad priority are rejected") {
    CHECK_FALSE(parse("screen a entry entry {\n}\n").ok());
    CHECK_FALSE(parse("story S1 as \"u\" want \"w\" prio 0\n").ok());
    CHECK_FALSE(parse("story S1 as \"  \" want \"w\" prio 1\n").ok());
}

TEST_CASE("parse: omitted required clause means unspecified") {
    const auto result = parse(
        "screen a entry {\n"
        "  field name \"Name\"\n"
        "}\n");
    REQUIRE(result.ok());
    const auto* f = std::get_if<InputField>(&result.project.screens[0].elements[0]);
    REQUIRE(f != nullptr);
    CHECK(f->required == Requiredness::Unspecified);
    // The canonical form always spells it out.
    CHECK(format(result.project).find("required unspecified") != std::string::npos);
}

TEST_CASE("parse: a new top-level statement closes a dangling block") {
    const auto result = parse(
        "screen a entry {\n"
        "  button go \"Go\"\n"
        "screen b {\n"
        "  button bk \"Back\"\n"
        "}\n");
    REQUIRE_FALSE(result.ok());
    REQUIRE(result.errors.size() == 1);
    CHECK(result.errors[0].message == "missing '}' before 'screen'");
    // Both screens made it into the model regardless.
    REQUIRE(result.project.screens.size() == 2);
    CHECK(result.project.screens[0].elements.size() == 1);
    CHECK(result.project.screens[1].elements.size() == 1);
}

TEST_CASE("parse: duplicate project header is rejected") {
    const auto result = parse("project \"one\"\nproject \"two\"\n");
    REQUIRE(result.errors.size() == 1);
    CHECK(result.errors[0].message == "duplicate project header");
    CHECK(result.project.name == "one");
}

TEST_CASE("parse: screen title defaults to the id") {
    const auto result = parse("screen home entry {\n  button t \"Go\"\n}\n");
    REQUIRE(result.ok());
    CHECK(result.project.screens[0].title == "home");
}

TEST_CASE("parse: oversized numbers and bare dashes are lexical errors") {
    CHECK_FALSE(parse("story S1 as \"u\" want \"w\" prio 99999999999\n").ok());
    const auto dash = parse("story S1 as \"u\" want \"w\" prio - 1\n");
    REQUIRE_FALSE(dash.ok());
    CHECK(dash.errors[0].code == "E-LEX");
}

TEST_CASE("parse accepts CRLF input") {
    const auto result = parse("project \"x\"\r\nstory S1 as \"u\" want \"w\" prio 1\r\n");
    REQUIRE(result.ok());
    CHECK(result.project.name == "x");
    CHECK(result.project.stories.size() == 1);
}

TEST_CASE("format: empty project is the header line only") {
    CHECK(format(Project{}) == "project \"\"\n");
}

TEST_CASE("format: idempotent and stable") {
    const Project p = testutil::load_fixture("caa.sfw");
    const std::string once = format(p);
    const auto reparsed = parse(once);
    REQUIRE(reparsed.ok());
    const std::string twice = format(reparsed.project);
    CHECK(once == twice);
    CHECK(once.find("\r") == std::string::npos);  // canonical form is LF only
}

TEST_CASE("round-trip: parse(format(parse(f))) equals parse(f) for the corpus") {
    for (const auto& path : testutil::fixture_files("valid", ".sfw")) {
        CAPTURE(path.string());
        const auto first = parse(testutil::read_file(path));
        REQUIRE(first.ok());
        const auto second = parse(format(first.project));
        REQUIRE(second.ok());
        CHECK(first.project == second.project);
    }
}

TEST_CASE("round-trip: escapes and optional clauses survive") {
    Project p;
    p.name = "quote\"and\\slash";
    p.stories.push_back({"S1", "a \"quoted\" role", "multi\nline", std::string("tab\there"), 2});
    Screen s;
    s.id = "scr";
    s.title = "Fancy Title";
    s.tags = {.entry = true, .feedback = true, .error = true};
    s.elements = {Layout{"l1", "card", std::nullopt},
                  Layout{"l2", "list", std::string("labeled")},
                  InputField{"f1", "Field", Requiredness::Unspecified},
                  InputField{"f2", "Field2", Requiredness::No},
                  TriggerText{"b1", "Press", true},
                  TriggerIcon{"i1", "gear", std::nullopt, false},
                  TriggerIcon{"i2", "gear", std::string("Settings"), true}};
    p.screens.push_back(s);
    Feature f;
    f.id = "f1";
    f.story = "S1";
    f.screens = {"scr"};
    f.connectors = {{"c001", "scr", "b1", "scr", ConnectorKind::Error},
                    {"c002", "scr", "i2", "scr", ConnectorKind::Back}};
    f.tasks = {{"walk", {{"scr", "b1"}, {"scr", "i2"}}}};
    p.features.push_back(f);

    const auto reparsed = parse(format(p));
    REQUIRE(reparsed.ok());
    CHECK(reparsed.project == p);
}

TEST_CASE("parser survives random utf-8 documents and keeps spans in bounds") {
    std::mt19937 rng(1234);
    const std::vector<std::string> vocab = {
        "screen", "story",  "feature", "connect", "use",    "task",   "button", "icon",
        "layout", "field",  "required", "yes",    "no",     "prio",   "as",     "want",
        "entry",  "{",      "}",        "->",     ".",      ":",      "\"str\"", "\"open",
        "id1",    "x-y_z",  "42",       "#c",     "\t",     " ",      "\n",     "\xC3\xA9",
        "\xE2\x82\xAC",     "\\",       "\"a\\q\"",
    };
    for (int round = 0; round < 500; ++round) {
        std::string doc;
        const int pieces = static_cast<int>(rng() % 60);
        for (int i = 0; i < pieces; ++i) {
            doc += vocab[rng() % vocab.size()];
            if (rng() % 3 == 0) doc += ' ';
            if (rng() % 5 == 0) doc += '\n';
        }
        CAPTURE(doc);
        const auto result = parse(doc);  // must not crash or throw
        const auto lines = startflow::detail::split_lines(doc);
        for (const auto& e : result.errors) {
            REQUIRE(e.span.line >= 1);
            REQUIRE(e.span.line <= static_cast<int>(lines.size()));
            const auto& line = lines[static_cast<size_t>(e.span.line - 1)];
            REQUIRE(e.span.column >= 1);
            REQUIRE(e.span.column <= static_cast<int>(line.size()) + 1);
            CHECK_FALSE(e.message.empty());
        }
    }
}
