#include <random>

#include "doctest.h"
#include "json.hpp"
#include "tdfa/fuzz.hpp"
#include "tdfa/regex.hpp"

using namespace tdfa;

TEST_SUITE("resyntax") {

TEST_CASE("capturing groups produce tag pairs numbered left to right") {
    const auto e = parse_regex("(a)*#(?:a|#b)#b*");
    CHECK(tags_of(*e) == std::vector<Tag>{1, 2, 3, 4, 5});
    CHECK(max_tag(*e) == 5);
    CHECK(to_pattern(*e) == "(?:#a#)*#(?:a|#b)#b*");
}

TEST_CASE("printing and parsing round trip") {
    for (const char* p : {"", "a", "a|b", "(?:ab)*", "a{2,3}", "a{2,}", "a{3}", "#", "a+b?", "\\(\\#", "(a|)(b)"}) {
        CAPTURE(p);
        const auto e = parse_regex(p);
        const auto again = parse_regex(to_pattern(*e));
        CHECK(to_json(*e) == to_json(*again));
    }
}

TEST_CASE("random expressions survive a print and parse round trip") {
    std::mt19937_64 rng(7);
    FuzzLimits limits;
    for (int i = 0; i < 300; ++i) {
        const auto e = random_regex(rng, limits);
        const std::string p = to_pattern(*e);
        CAPTURE(p);
        CHECK(to_json(*parse_regex(p)) == to_json(*e));
        CHECK(node_count(*e) <= 10);
        CHECK(tags_of(*e).size() <= 6);
    }
}

TEST_CASE("syntax errors report a position") {
    auto position_of = [](const char* p) -> long {
        try {
            parse_regex(p);
        } catch (const SyntaxError& e) {
            return static_cast<long>(e.position());
        }
        return -1;
    };
    CHECK(position_of("(a") == 0);
    CHECK(position_of("ab)") == 2);
    CHECK(position_of("*a") == 0);
    CHECK(position_of("a{3,2}") == 1);
    CHECK(position_of("a{2") == 3);
    CHECK(position_of("a\\") == 1);
    CHECK(position_of("ok") == -1);
}

TEST_CASE("repetition bound cap") {
    ParseOptions po;
    po.max_bound = 5;
    CHECK_NOTHROW(parse_regex("a{5}", po));
    CHECK_THROWS_AS(parse_regex("a{6}", po), SyntaxError);
}

TEST_CASE("nullable and node count") {
    CHECK(nullable(*parse_regex("a*")));
    CHECK(nullable(*parse_regex("#")));
    CHECK(nullable(*parse_regex("a|")));
    CHECK_FALSE(nullable(*parse_regex("a{1,}")));
    CHECK(node_count(*parse_regex("ab")) == 3);
    CHECK(node_count(*parse_regex("a*")) == 2);
}

TEST_CASE("auto_tag wraps every subexpression") {
    const auto e = auto_tag(parse_regex("ab"));
    // cat and its two symbols: three pairs
    CHECK(max_tag(*e) == 6);
    const auto nest = auto_tag_nesting(*e, 6);
    CHECK(nest[0] == std::vector<Tag>{2, 3, 4, 5});
    CHECK(nest[5] == std::vector<Tag>{2, 3, 4, 5});
    CHECK(nest[1].empty());
    CHECK_THROWS(auto_tag(parse_regex("#a")));
}

TEST_CASE("AST JSON names kinds, children and tags") {
    const auto j = nlohmann::json::parse(to_json(*parse_regex("(a)*")));
    CHECK(j["kind"] == "rep");
    CHECK(j["hi"] == "inf");
    const auto& cat = j["children"][0];
    CHECK(cat["kind"] == "cat");
    CHECK(cat["children"][0]["kind"] == "tag");
    CHECK(cat["children"][0]["tag"] == 1);
}

}
