#include <algorithm>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "startflow/model.hpp"

using namespace startflow;

namespace {

Screen make_screen(std::string id, std::vector<Element> elements, ScreenTags tags = {}) {
    Screen s;
    s.id = id;
    s.title = id;
    s.elements = std::move(elements);
    s.tags = tags;
    return s;
}

/// Two screens joined by one button: the smallest meaningful project.
Project two_screen_project() {
    Project p;
    p.name = "tiny";
    p.stories.push_back({"S1", "user", "do the thing", std::nullopt, 1});
    p.screens.push_back(make_screen("a", {TriggerText{"go", "Continue", false}}, {.entry = true}));
    p.screens.push_back(make_screen("b", {TriggerText{"back-btn", "Go back", false}}));
    Feature f;
    f.id = "f1";
    f.story = "S1";
    f.screens = {"a", "b"};
    f.connectors.push_back({"c001", "a", "go", "b", ConnectorKind::Normal});
    p.features.push_back(std::move(f));
    return p;
}

}  // namespace

TEST_CASE("validate_structure: connector sourced at a layout is E-CONN-SRC") {
    Project p = two_screen_project();
    p.screens[0].elements.push_back(Layout{"card1", "card", std::nullopt});
    p.features[0].connectors.push_back({"c002", "a", "card1", "b", ConnectorKind::Normal});

    const auto errors = validate_structure(p);
    REQUIRE(errors.size() == 1);
    CHECK(errors[0].code == "E-CONN-SRC");
    CHECK(errors[0].feature == "f1");
    CHECK(errors[0].connector == "c002");
}

TEST_CASE("validate_structure: dangling target is E-REF") {
    Project p = two_screen_project();
    p.features[0].connectors.push_back({"c002", "a", "go", "ghost", ConnectorKind::Normal});

    const auto errors = validate_structure(p);
    REQUIRE(errors.size() == 1);
    CHECK(errors[0].code == "E-REF");
}

TEST_CASE("validate_structure: well-formed single screen project is vacuously valid") {
    Project p;
    p.name = "solo";
    p.stories.push_back({"S1", "user", "look at one screen", std::nullopt, 1});
    p.screens.push_back(make_screen("only", {TriggerText{"t", "Stay", false}}, {.entry = true}));
    Feature f;
    f.id = "f1";
    f.story = "S1";
    f.screens = {"only"};
    p.features.push_back(f);

    CHECK(validate_structure(p).empty());
}

TEST_CASE("validate_structure: duplicates, empty features and bad refs") {
    Project p = two_screen_project();
    p.screens.push_back(make_screen("a", {}));  // duplicate screen id
    Feature empty;
    empty.id = "f0";
    empty.story = "S1";
    p.features.push_back(empty);
    Feature badstory;
    badstory.id = "f2";
    badstory.story = "nope";
    badstory.screens = {"a"};
    p.features.push_back(badstory);

    const auto errors = validate_structure(p);
    auto has = [&](const char* code, const char* feature) {
        return std::any_of(errors.begin(), errors.end(), [&](const StructureError& e) {
            return e.code == code && e.feature == feature;
        });
    };
    CHECK(has("E-DUP", ""));
    CHECK(has("E-EMPTY", "f0"));
    CHECK(has("E-REF", "f2"));

    // Deterministic ordering: (feature, connector, code).
    auto sorted = errors;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const StructureError& a, const StructureError& b) {
                         return std::tie(a.feature, a.connector, a.code) <
                                std::tie(b.feature, b.connector, b.code);
                     });
    CHECK(errors == sorted);
}

TEST_CASE("validate_structure: multiple entry screens in one feature") {
    Project p = two_screen_project();
    p.screens[1].tags.entry = true;
    const auto errors = validate_structure(p);
    REQUIRE(errors.size() == 1);
    CHECK(errors[0].code == "E-DUP");
    CHECK(errors[0].message.find("entry") != std::string::npos);
}

TEST_CASE("build_graph: two screens, one connector") {
    const Project p = two_screen_project();
    const FlowGraph g = build_graph(p.features[0], p);
    CHECK(g.nodes.size() == 2);
    CHECK(g.edges.size() == 1);
    CHECK(g.entry == "a");
}

TEST_CASE("build_graph: edgeless graph keeps every screen") {
    Project p = two_screen_project();
    p.screens.push_back(make_screen("c", {TriggerText{"t", "Go", false}}));
    p.features[0].screens = {"a", "b", "c"};
    p.features[0].connectors.clear();
    const FlowGraph g = build_graph(p.features[0], p);
    CHECK(g.nodes.size() == 3);
    CHECK(g.edges.empty());
}

TEST_CASE("build_graph: entry defaults to first declared screen") {
    Project p = two_screen_project();
    p.screens[0].tags.entry = false;
    const FlowGraph g = build_graph(p.features[0], p);
    CHECK(g.entry == "a");
}

TEST_CASE("build_graph: empty feature throws E-NO-SCREENS") {
    const Project p = two_screen_project();
    Feature f;
    f.id = "f0";
    f.story = "S1";
    CHECK_THROWS_WITH_AS(build_graph(f, p), doctest::Contains("E-NO-SCREENS"), Error);
}

// Counted by hand from fixtures/valid/caa.sfw before build_graph existed:
// request-caa uses 7 screens and declares 13 connect lines; manage-caa 6 and 10.
TEST_CASE("build_graph: CAA fixture node and edge counts") {
    const Project p = testutil::load_fixture("caa.sfw");
    REQUIRE(validate_structure(p).empty());

    const Feature* request = p.find_feature("request-caa");
    REQUIRE(request != nullptr);
    FlowGraph g = build_graph(*request, p);
    CHECK(g.nodes.size() == 7);
    CHECK(g.edges.size() == 13);
    CHECK(g.edges.size() == request->connectors.size());
    CHECK(g.entry == "login");

    const Feature* manage = p.find_feature("manage-caa");
    REQUIRE(manage != nullptr);
    g = build_graph(*manage, p);
    CHECK(g.nodes.size() == 6);
    CHECK(g.edges.size() == 10);
    CHECK(g.entry == "login");
}

TEST_CASE("build_graph is pure: same inputs give identical graphs") {
    const Project p = testutil::load_fixture("caa.sfw");
    const Feature& f = p.features.front();
    CHECK(build_graph(f, p) == build_graph(f, p));
}

TEST_CASE("after clean validation every connector source is a trigger") {
    for (const char* name : {"caa.sfw", "clean.sfw", "navdrift.sfw"}) {
        const Project p = testutil::load_fixture(name);
        REQUIRE(validate_structure(p).empty());
        for (const auto& f : p.features) {
            for (const auto& c : f.connectors) {
                const Screen* s = p.find_screen(c.source_screen);
                REQUIRE(s != nullptr);
                const Element* e = s->find_element(c.source_element);
                REQUIRE(e != nullptr);
                CHECK(is_trigger(*e));
            }
        }
    }
}

TEST_CASE("prioritize_stories: examples") {
    CHECK(prioritize_stories({}).empty());

    std::vector<UserStory> stories = {{"S-x", "u", "w", std::nullopt, 2},
                                      {"S-y", "u", "w", std::nullopt, 1},
                                      {"S-z", "u", "w", std::nullopt, 3}};
    const auto ordered = prioritize_stories(stories);
    CHECK(ordered[0].id == "S-y");
    CHECK(ordered[1].id == "S-x");
    CHECK(ordered[2].id == "S-z");

    // Stability: equal priorities keep declaration order.
    const auto tied = prioritize_stories(
        {{"S-a", "u", "w", std::nullopt, 1}, {"S-b", "u", "w", std::nullopt, 1}});
    CHECK(tied[0].id == "S-a");
    CHECK(tied[1].id == "S-b");
}

TEST_CASE("prioritize_stories permutes its input") {
    std::mt19937 rng(7);
    for (int round = 0; round < 50; ++round) {
        std::vector<UserStory> stories;
        const int n = static_cast<int>(rng() % 12);
        for (int i = 0; i < n; ++i)
            stories.push_back({"S" + std::to_string(i), "u", "w", std::nullopt,
                               static_cast<int>(rng() % 5) + 1});
        auto ordered = prioritize_stories(stories);
        REQUIRE(ordered.size() == stories.size());
        auto ids = [](std::vector<UserStory> v) {
            std::vector<std::string> out;
            for (const auto& s : v) out.push_back(s.id);
            std::sort(out.begin(), out.end());
            return out;
        };
        CHECK(ids(ordered) == ids(stories));
        CHECK(std::is_sorted(ordered.begin(), ordered.end(),
                             [](const UserStory& a, const UserStory& b) {
                                 return a.priority < b.priority;
                             }));
    }
}
