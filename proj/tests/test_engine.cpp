#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"
#include "tdfa/engine.hpp"
#include "tdfa/fuzz.hpp"

using namespace tdfa;

namespace {

const char* const kExample = "(a)*#(?:a|#b)#b*";

Options with(Engine e, bool fixed = false) {
    Options o;
    o.engine = e;
    o.fixed_tags = fixed;
    return o;
}

}

TEST_SUITE("engine") {

TEST_CASE("formatting") {
    CHECK(format_offsets({1, kNil, 3}) == "t1=1 t2=n t3=3");
    CHECK(format_lists({{0, 1}, {-1}, {}}) == "t1={0,1} t2={-1} t3={}");
    TaggedString s{TstringItem::tag(1), TstringItem::sym('a'), TstringItem::tag(-2), TstringItem::sym('7'),
                   TstringItem::sym(' '), TstringItem::sym('-')};
    CHECK(format_tstring(s) == "1 a -2 \\x37 \\x20 \\x2D");
    CHECK(format_tstring({}).empty());
}

TEST_CASE("every engine reproduces the running example") {
    for (Engine e : {Engine::Simulation, Engine::Tdfa, Engine::Multipass}) {
        for (bool fixed : {false, true}) {
            const Compiled c = compile(kExample, with(e, fixed));
            const MatchResult r = match(c, "aab");
            REQUIRE(r.matched());
            CHECK(format_offsets(r.offsets) == "t1=1 t2=2 t3=2 t4=2 t5=3");
            CHECK_FALSE(match(c, "ba").matched());
        }
    }
    const Compiled m = compile(kExample, with(Engine::Multipass));
    CHECK(format_tstring(match(m, "aab", MatchMode::Full, Repr::Tstring).tstring) == "1 a 2 1 a 2 3 4 b 5");
    CHECK(format_lists(match(m, "aab", MatchMode::Full, Repr::Lists).lists) == "t1={0,1} t2={1,2} t3={2} t4={2} t5={3}");
}

TEST_CASE("fixed tags are reported for the running example") {
    const Compiled c = compile(kExample, with(Engine::Tdfa, true));
    CHECK(c.stripped.kept == std::vector<Tag>{2, 4, 5});
    CHECK(c.nfa.ntags == 3);
    CHECK(format_offsets(match(c, "b").offsets) == "t1=n t2=n t3=0 t4=0 t5=1");
}

TEST_CASE("unsupported combinations are rejected") {
    const Compiled sim = compile(kExample, with(Engine::Simulation));
    const Compiled mp = compile(kExample, with(Engine::Multipass));
    const Compiled mp_fixed = compile(kExample, with(Engine::Multipass, true));
    const Compiled dfa = compile(kExample, with(Engine::Tdfa));
    CHECK_THROWS_AS(match(sim, "aab", MatchMode::LongestPrefix), std::invalid_argument);
    CHECK_THROWS_AS(match(mp, "aab", MatchMode::LongestPrefix), std::invalid_argument);
    CHECK_THROWS_AS(match(dfa, "aab", MatchMode::Full, Repr::Tstring), std::invalid_argument);
    CHECK_THROWS_AS(match(sim, "aab", MatchMode::Full, Repr::Tstring), std::invalid_argument);
    CHECK_THROWS_AS(match(mp_fixed, "aab", MatchMode::Full, Repr::Tstring), std::invalid_argument);
    Options fp = with(Engine::Tdfa);
    fp.full_parsing = true;
    CHECK_THROWS_AS(compile("#a", fp), std::invalid_argument);
    CHECK_THROWS_AS(compile("(a", fp), SyntaxError);
}

TEST_CASE("state cap surfaces as a resource error") {
    Options o = with(Engine::Tdfa);
    o.max_states = 4;
    CHECK_THROWS_AS(compile("(a|b)*a(a|b){6}", o), ResourceError);
}

TEST_CASE("longest prefix through the engine") {
    const Compiled c = compile("#a(bc)?", with(Engine::Tdfa));
    const MatchResult r = match(c, "abx", MatchMode::LongestPrefix);
    CHECK(r.kind == MatchResult::Kind::PrefixMatch);
    CHECK(r.end == 1);
    CHECK(format_offsets(r.offsets) == "t1=0 t2=n t3=n");
}

TEST_CASE("full parsing tags every subexpression") {
    Options o = with(Engine::Multipass);
    o.full_parsing = true;
    const Compiled c = compile("(?:a|b)*", o);
    CHECK(c.ntags() > 0);
    const MatchResult r = match(c, "ab", MatchMode::Full, Repr::Tstring);
    REQUIRE(r.matched());
    std::string symbols;
    for (const auto& item : r.tstring) {
        if (item.is_symbol) symbols += static_cast<char>(item.value);
    }
    CHECK(symbols == "ab");
}

TEST_CASE("all engines agree on random expressions") {
    const auto inputs = all_inputs("ab", 4);
    for (int i = 0; i < 200; ++i) {
        const auto e = fuzz_pattern(71, i, {});
        CAPTURE(to_pattern(*e));
        for (bool fixed : {false, true}) {
            Options o;
            o.all_engines = true;
            o.fixed_tags = fixed;
            o.multi = MultiValuedPolicy::All;
            const Compiled c = compile(e, o);
            const Tnfa full = build_tnfa(*e);
            for (const auto& w : inputs) {
                CAPTURE(w);
                const auto want = simulate_trace(full, w);
                Compiled sim = c, dfa = c, mp = c;
                sim.options.engine = Engine::Simulation;
                mp.options.engine = Engine::Multipass;
                const MatchResult a = match(sim, w);
                const MatchResult b = match(dfa, w);
                const MatchResult d = match(mp, w);
                REQUIRE(a.matched() == want.has_value());
                REQUIRE(b.matched() == want.has_value());
                REQUIRE(d.matched() == want.has_value());
                if (!want) continue;
                const TagValues last = oracle::last_values(*want, full.ntags);
                CHECK(a.offsets == last);
                CHECK(b.offsets == last);
                CHECK(d.offsets == last);
                CHECK(b.lists == match(mp, w, MatchMode::Full, Repr::Lists).lists);
                if (!fixed) CHECK(b.lists == oracle::all_values(*want, full.ntags));
            }
        }
    }
}

}
