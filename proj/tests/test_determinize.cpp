#include <set>

#include "doctest.h"
#include "tdfa/determinize.hpp"
#include "tdfa/fuzz.hpp"
#include "tdfa/regex.hpp"
#include "tdfa/runtime.hpp"

using namespace tdfa;

namespace {

const char* const kExample = "(a)*#(?:a|#b)#b*";

Tdfa example_tdfa() {
    const Tnfa nfa = build_tnfa(*parse_regex(kExample));
    return determinize(nfa, std::vector<bool>(5, false));
}

const TdfaTransition& on(const Tdfa& d, int s, char c) { return d.step(s, static_cast<std::uint8_t>(c)); }

}

TEST_SUITE("determinize") {

TEST_CASE("history projects a tag sequence onto one tag") {
    CHECK(det::history({1, -2, 1, 2}, 1) == "pp");
    CHECK(det::history({1, -2, 1, 2}, 2) == "np");
    CHECK(det::history({3}, 1).empty());
}

TEST_CASE("operation right-hand side depends on the tag kind") {
    const std::vector<Reg> r{4, 5};
    CHECK(det::regop_rhs(r, "np", 1, true) == RegOp::append(0, 4, "np"));
    CHECK(det::regop_rhs(r, "np", 2, false) == RegOp::set(0, true));
    CHECK(det::regop_rhs(r, "pn", 2, false) == RegOp::set(0, false));
}

TEST_CASE("running example: four states, finals 1 to 3") {
    const Tdfa d = example_tdfa();
    REQUIRE(d.states.size() == 4);
    CHECK(d.initial == 0);
    CHECK_FALSE(d.states[0].final);
    CHECK(d.states[1].final);
    CHECK(d.states[2].final);
    CHECK(d.states[3].final);
    CHECK(d.final_regs == std::vector<Reg>{6, 7, 8, 9, 10});
    CHECK(stats(d).max_register == 20);
    CHECK(on(d, 0, 'a').target == 1);
    CHECK(on(d, 0, 'b').target == 2);
    CHECK(on(d, 1, 'a').target == 1);
    CHECK(on(d, 1, 'b').target == 2);
    CHECK(on(d, 2, 'b').target == 3);
    CHECK(on(d, 2, 'a').target == kNoState);
    CHECK(on(d, 3, 'b').target == 3);
    CHECK(on(d, 3, 'b').ops.empty());
}

TEST_CASE("running example: loop on state 1 shifts the previous iteration") {
    const Tdfa d = example_tdfa();
    const OpList& ops = on(d, 1, 'a').ops;
    REQUIRE_FALSE(ops.empty());
    CHECK(ops.front() == RegOp::copy(12, 11));
    CHECK(std::find(ops.begin(), ops.end(), RegOp::set(11, true)) != ops.end());
    CHECK(to_string(on(d, 0, 'a').ops) == "r11 ← p, r12 ← n, r13 ← n, r14 ← p");
}

TEST_CASE("final operations copy or set final registers") {
    const Tdfa d = example_tdfa();
    const OpList& f1 = d.states[1].final_ops;
    CHECK(std::find(f1.begin(), f1.end(), RegOp::copy(6, 12)) != f1.end());
    CHECK(std::find(f1.begin(), f1.end(), RegOp::set(9, false)) != f1.end());
    CHECK(std::find(f1.begin(), f1.end(), RegOp::set(10, true)) != f1.end());
    for (const auto& st : d.states) {
        std::set<Reg> written;
        for (const auto& op : st.final_ops) CHECK(written.insert(op.lhs).second);
        if (st.final) CHECK(written.size() == 5);
    }
}

TEST_CASE("initial closure keeps only final and symbol states in priority order") {
    const Tnfa nfa = build_tnfa(*parse_regex(kExample));
    const Determinizer det(nfa, std::vector<bool>(5, false));
    const det::Closure c = det.initial_closure();
    REQUIRE(c.size() == 3);
    for (const auto& x : c) {
        CHECK((nfa.has_symbol(x.q) || x.q == nfa.final));
        CHECK(x.r == std::vector<Reg>{1, 2, 3, 4, 5});
    }
    CHECK(c[0].l == TagSeq{1});
    CHECK(c[1].l == TagSeq{-1, -2, 3});
    CHECK(c[2].l == TagSeq{-1, -2, 3, 4});
}

TEST_CASE("construction is deterministic") {
    for (int i = 0; i < 200; ++i) {
        const auto e = fuzz_pattern(21, i, {});
        const Tnfa nfa = build_tnfa(*e);
        const std::vector<bool> multi(static_cast<std::size_t>(nfa.ntags), i % 2 == 0);
        CHECK(to_json(determinize(nfa, multi)) == to_json(determinize(nfa, multi)));
    }
}

TEST_CASE("JSON round trip preserves the automaton") {
    for (int i = 0; i < 200; ++i) {
        const auto e = fuzz_pattern(22, i, {});
        const Tnfa nfa = build_tnfa(*e);
        const Tdfa d = determinize(nfa, std::vector<bool>(static_cast<std::size_t>(nfa.ntags), i % 2 == 1));
        const std::string j = to_json(d);
        const Tdfa back = tdfa_from_json(j);
        CHECK(to_json(back) == j);
        for (const auto& w : all_inputs("ab", 4)) {
            const auto x = exec(d, w);
            const auto y = exec(back, w);
            CHECK(x.kind == y.kind);
            CHECK(x.lists == y.lists);
        }
    }
}

TEST_CASE("state cap raises a resource error") {
    const Tnfa nfa = build_tnfa(*parse_regex("(a|b)*a(a|b){8}"));
    CHECK_THROWS_AS(determinize(nfa, {}, 10), ResourceError);
    CHECK_NOTHROW(determinize(nfa, {}, 1000));
}

TEST_CASE("multi-valued tags use append operations") {
    const Tnfa nfa = build_tnfa(*parse_regex(kExample));
    const Tdfa d = determinize(nfa, {true, true, false, false, false});
    bool append = false;
    for (const auto& st : d.states)
        for (const auto& t : st.next)
            for (const auto& op : t.ops) append = append || op.kind == RegOp::Kind::Append;
    CHECK(append);
    CHECK(d.reg_multi.size() == static_cast<std::size_t>(d.nregs) + 1);
}

TEST_CASE("byte classes: one per used byte plus a dead class") {
    const ByteClasses c = byte_classes(build_tnfa(*parse_regex("ab|c")));
    CHECK(c.count() == 4);
    CHECK(c.of['a'] != c.of['b']);
    CHECK(c.of['x'] == c.of['\0']);
    CHECK(c.representative[c.of['c']] == 'c');
}

TEST_CASE("tag-free expressions need no registers") {
    const Tdfa d = determinize(build_tnfa(*parse_regex("(?:a|b)*c")), {});
    CHECK(stats(d).operations == 0);
    CHECK(exec(d, "abac").matched());
    CHECK_FALSE(exec(d, "aba").matched());
}

}
