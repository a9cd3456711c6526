#include "lrcvar/errors.hpp"
#include "lrcvar/instance_io.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <filesystem>

using namespace lrcvar;

namespace {

const char* kSmall = R"({
  "name": "small",
  "states": ["s", "t"],
  "actions": {"s": ["a", "b"], "t": ["c"]},
  "transitions": {
    "s": {"a": {"s": 1.0}, "b": {"t": 1.0}},
    "t": {"c": {"s": 0.5, "t": 0.5}}
  },
  "rewards": {"s": {"a": 1, "b": 2}, "t": {"c": 3}}
})";

std::string without(const std::string& text, const std::string& key) {
    auto doc = nlohmann::json::parse(text);
    doc.erase(key);
    return doc.dump(2);
}

} // namespace

TEST_SUITE("io") {

TEST_CASE("parse a small instance") {
    const auto mdp = parse_instance(kSmall);
    CHECK(mdp.name() == "small");
    CHECK(mdp.n_pairs() == 3);
    CHECK(mdp.transition(mdp.pair(1, 0), 0) == 0.5);
    CHECK(mdp.reward(mdp.pair(0, 1), 0) == 2.0);
    CHECK_FALSE(mdp.future_state_rewards());
}

TEST_CASE("round trips keep the kernel and rewards") {
    for (const auto& name : builtin_names()) {
        const auto mdp = builtin(name);
        CHECK(parse_instance(serialize_instance(mdp)) == mdp);
    }
    const auto path = std::filesystem::temp_directory_path() / "lrcvar_io_roundtrip.json";
    save_instance(builtin("example2"), path);
    const auto back = load_instance(path);
    std::filesystem::remove(path);
    CHECK(back == builtin("example2"));
}

TEST_CASE("triple rewards select the next-state mode") {
    const auto mdp = parse_instance(serialize_instance(builtin("endowment")));
    CHECK(mdp.future_state_rewards());
    CHECK(serialize_instance(builtin("endowment")).find("rewards3") != std::string::npos);
}

TEST_CASE("a missing block is named") {
    try {
        parse_instance(without(kSmall, "transitions"));
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("transitions") != std::string::npos);
        CHECK(e.field() == "transitions");
    }
}

TEST_CASE("syntax errors carry a line number") {
    try {
        parse_instance("{\n  \"name\": \"x\",\n  \"states\": [\"s\",]\n}");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
}

TEST_CASE("unknown names are rejected") {
    std::string text = kSmall;
    text.replace(text.find("\"t\": 1.0"), 8, "\"q\": 1.0");
    CHECK_THROWS_AS(parse_instance(text), ParseError);
    std::string extra = kSmall;
    extra.insert(1, "\"colour\": 1,");
    CHECK_THROWS_AS(parse_instance(extra), ParseError);
    std::string version = kSmall;
    version.insert(1, "\"version\": 2,");
    CHECK_THROWS_AS(parse_instance(version), ParseError);
    std::string ok = kSmall;
    ok.insert(1, "\"version\": 1,");
    CHECK_NOTHROW(parse_instance(ok));
}

TEST_CASE("missing files") {
    CHECK_THROWS_AS(load_instance("/nonexistent/instance.json"), InputError);
}

}
