#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "tdfa/fuzz.hpp"
#include "tdfa/regex.hpp"
#include "tdfa/tnfa.hpp"

using namespace tdfa;

namespace {

const char* const kExample = "(a)*#(?:a|#b)#b*";

}

TEST_SUITE("tnfa") {

TEST_CASE("running example final tag values") {
    const Tnfa nfa = build_tnfa(*parse_regex(kExample));
    CHECK(nfa.ntags == 5);
    CHECK(nfa.initial == 0);
    CHECK(nfa.final == nfa.size() - 1);
    const auto v = simulate(nfa, "aab");
    REQUIRE(v);
    CHECK(*v == TagValues{1, 2, 2, 2, 3});
    CHECK_FALSE(simulate(nfa, ""));
    CHECK_FALSE(simulate(nfa, "ba"));
}

TEST_CASE("simulation agrees with exhaustive path enumeration") {
    for (const char* p : {kExample, "(a|ab)(c|bcd)(d*)", "(a*)(a*)", "(#|a)*", "((a)|(b))*", "(a{0,2}){2}"}) {
        const Tnfa nfa = build_tnfa(*parse_regex(p));
        for (const auto& w : all_inputs("abcd", 4)) {
            CAPTURE(p);
            CAPTURE(w);
            const auto search = oracle::best_path(nfa, w);
            REQUIRE(search.complete);
            const auto& brute = search.trace;
            const auto sim = simulate(nfa, w);
            REQUIRE(brute.has_value() == sim.has_value());
            if (!sim) continue;
            CHECK(*sim == oracle::last_values(*brute, nfa.ntags));
            const auto tr = simulate_trace(nfa, w);
            REQUIRE(tr);
            CHECK(*tr == *brute);
        }
    }
}

TEST_CASE("random expressions: simulation agrees with path enumeration") {
    FuzzLimits limits;
    const auto inputs = all_inputs("ab", 5);
    std::size_t checked = 0;
    std::size_t skipped = 0;
    for (int i = 0; i < 300; ++i) {
        const auto e = fuzz_pattern(11, i, limits);
        const Tnfa nfa = build_tnfa(*e);
        for (const auto& w : inputs) {
            const auto search = oracle::best_path(nfa, w, 20000);
            if (!search.complete) {
                ++skipped;
                continue;
            }
            ++checked;
            const auto& brute = search.trace;
            const auto tr = simulate_trace(nfa, w);
            CAPTURE(to_pattern(*e));
            CAPTURE(w);
            REQUIRE(brute.has_value() == tr.has_value());
            if (!tr) continue;
            CHECK(*tr == *brute);
            CHECK(trace_offsets(*tr, nfa.ntags) == oracle::last_values(*brute, nfa.ntags));
            CHECK(trace_lists(*tr, nfa.ntags) == oracle::all_values(*brute, nfa.ntags));
            CHECK(*simulate(nfa, w) == oracle::last_values(*brute, nfa.ntags));
        }
    }
    MESSAGE("path enumeration checked " << checked << ", over budget " << skipped);
    CHECK(skipped * 10 < checked);
}

TEST_CASE("tagged string of the running example") {
    const Tnfa nfa = build_tnfa(*parse_regex(kExample));
    const auto tr = simulate_trace(nfa, "aab");
    REQUIRE(tr);
    const TaggedString s = trace_tstring(*tr, "aab");
    const TaggedString want{TstringItem::tag(1), TstringItem::sym('a'), TstringItem::tag(2), TstringItem::tag(1),
                            TstringItem::sym('a'), TstringItem::tag(2), TstringItem::tag(3), TstringItem::tag(4),
                            TstringItem::sym('b'), TstringItem::tag(5)};
    CHECK(s == want);
    CHECK(oracle::lists_from_tstring(s, 5) == trace_lists(*tr, 5));
}

TEST_CASE("bypassed tags appear negated") {
    const Tnfa nfa = build_tnfa(*parse_regex(kExample));
    const auto tr = simulate_trace(nfa, "b");
    REQUIRE(tr);
    CHECK(trace_lists(*tr, 5) == TagLists{{-1}, {-1}, {0}, {0}, {1}});
    CHECK(*simulate(nfa, "b") == TagValues{kNil, kNil, 0, 0, 1});
}

TEST_CASE("negative tag chain") {
    const Tnfa n = ntags({2, 3});
    CHECK(simulate_trace(n, "") == TagTrace{{-2, 0}, {-3, 0}});
}

TEST_CASE("epsilon transitions carry distinct priorities in order") {
    const Tnfa nfa = build_tnfa(*parse_regex("(a|b|)*c{0,2}"));
    for (const auto& st : nfa.states) {
        for (std::size_t i = 1; i < st.epsilon.size(); ++i) CHECK(st.epsilon[i - 1].priority < st.epsilon[i].priority);
        if (st.symbol) CHECK(st.epsilon.empty());
    }
}

TEST_CASE("DOT output uses bold symbol edges and dashed tagged edges") {
    const std::string dot = to_dot(build_tnfa(*parse_regex("(a)")));
    CHECK(dot.find("digraph") != std::string::npos);
    CHECK(dot.find("bold") != std::string::npos);
    CHECK(dot.find("dashed") != std::string::npos);
}

}
