#include <set>

#include "doctest.h"
#include "tdfa/determinize.hpp"
#include "tdfa/fuzz.hpp"
#include "tdfa/optimizer.hpp"
#include "tdfa/regex.hpp"
#include "tdfa/runtime.hpp"

using namespace tdfa;

namespace {

const char* const kExample = "(a)*#(?:a|#b)#b*";

Tdfa raw(const RegexPtr& e, bool multi) {
    const Tnfa nfa = build_tnfa(*e);
    Tdfa d = determinize(nfa, std::vector<bool>(static_cast<std::size_t>(nfa.ntags), multi));
    add_fallback_regops(d);
    return d;
}

bool same(const RegCfg& a, const RegCfg& b) {
    if (a.nregs != b.nregs || a.final_regs != b.final_regs || a.blocks.size() != b.blocks.size()) return false;
    for (std::size_t i = 0; i < a.blocks.size(); ++i) {
        if (a.blocks[i].ops != b.blocks[i].ops) return false;
    }
    return true;
}

void optimize_to_fixpoint(Tdfa& d) {
    OptimizeOptions one;
    one.rounds = 1;
    for (int k = 0; k < 50; ++k) {
        const std::string before = to_json(d);
        optimize(d, one);
        if (to_json(d) == before) return;
    }
    FAIL("optimization did not reach a fixpoint");
}

void check_same_results(const Tdfa& a, const Tdfa& b, const std::vector<std::string>& inputs) {
    for (const auto& w : inputs) {
        for (MatchMode mode : {MatchMode::Full, MatchMode::LongestPrefix}) {
            const auto x = exec(a, w, mode);
            const auto y = exec(b, w, mode);
            CAPTURE(w);
            CHECK(x.kind == y.kind);
            CHECK(x.end == y.end);
            CHECK(x.lists == y.lists);
        }
    }
}

}

TEST_SUITE("optimizer") {

TEST_CASE("running example: 20 registers, 11 after compaction, 5 at the end, 9 blocks") {
    Tdfa d = raw(parse_regex(kExample), false);
    CHECK(build_cfg(d).blocks.size() == 9);
    const OptimizeReport rep = optimize(d);
    CHECK(rep.registers_initial == 20);
    CHECK(rep.registers_compacted == 11);
    CHECK(rep.registers_final == 5);
    CHECK(rep.blocks == 9);
    CHECK(d.nregs == 5);
    std::set<Reg> finals(d.final_regs.begin(), d.final_regs.end());
    CHECK(finals == std::set<Reg>{1, 2, 3, 4, 5});
}

TEST_CASE("running example: interference is diagonal after allocation") {
    Tdfa d = raw(parse_regex(kExample), false);
    std::vector<std::string> grids;
    OptimizeOptions oo;
    oo.hook = [&](const std::string& pass, const RegCfg&, const Liveness*, const Interference* inter) {
        if (pass == "interference") grids.push_back(interference_grid(*inter));
    };
    optimize(d, oo);
    REQUIRE(grids.size() == 2);
    CHECK(grids[0].find('*') != std::string::npos);
    // second round: only registers holding distinct values interfere
    CHECK(grids[1].find('.') != std::string::npos);
}

TEST_CASE("fallback states and clobbered registers") {
    const Tdfa d = determinize(build_tnfa(*parse_regex("#a(bc)?")), {false, false, false});
    const FallbackInfo fb = find_fallback_states(d);
    int count = 0;
    for (std::size_t s = 0; s < d.states.size(); ++s) {
        if (!fb.fallback[s]) continue;
        ++count;
        CHECK(d.states[s].final);
    }
    CHECK(count == 1);
    const Tdfa ex = determinize(build_tnfa(*parse_regex(kExample)), std::vector<bool>(5, false));
    for (bool f : find_fallback_states(ex).fallback) CHECK_FALSE(f);
}

TEST_CASE("every fallback state gets fallback operations") {
    for (int i = 0; i < 300; ++i) {
        const Tdfa d = raw(fuzz_pattern(51, i, {}), i % 2 == 0);
        const FallbackInfo fb = find_fallback_states(d);
        for (std::size_t s = 0; s < d.states.size(); ++s) CHECK(d.states[s].fallback == fb.fallback[s]);
    }
}

TEST_CASE("no operation reads a register written earlier in its list") {
    for (int i = 0; i < 300; ++i) {
        Tdfa d = raw(fuzz_pattern(52, i, {}), i % 2 == 0);
        optimize(d);
        for (const auto& st : d.states) {
            for (const auto& t : st.next) {
                std::set<Reg> written;
                for (const auto& op : t.ops) {
                    if (op.reads() && op.rhs != op.lhs) CHECK(written.count(op.rhs) == 0);
                    written.insert(op.lhs);
                }
            }
        }
    }
}

TEST_CASE("optimization and minimization preserve results") {
    const auto inputs = all_inputs("ab", 5);
    for (int i = 0; i < 300; ++i) {
        const auto e = fuzz_pattern(53, i, {});
        CAPTURE(to_pattern(*e));
        const Tdfa d = raw(e, i % 2 == 0);
        Tdfa o = d;
        optimize(o);
        check_same_results(d, o, inputs);
        check_same_results(d, minimize(o), inputs);
    }
}

TEST_CASE("each pass changes nothing at a fixpoint") {
    for (int i = 0; i < 300; ++i) {
        const auto e = fuzz_pattern(54, i, {});
        CAPTURE(to_pattern(*e));
        Tdfa d = raw(e, i % 2 == 0);
        optimize_to_fixpoint(d);
        const RegCfg g = build_cfg(d);
        {
            RegCfg h = g;
            renaming(h, compaction(h));
            CHECK(same(g, h));
        }
        {
            RegCfg h = g;
            dead_code_elimination(h, liveness_analysis(h));
            CHECK(same(g, h));
        }
        {
            RegCfg h = g;
            const Liveness live = liveness_analysis(h);
            renaming(h, register_allocation(h, interference_analysis(h, live)));
            CHECK(same(g, h));
        }
        {
            RegCfg h = g;
            normalization(h);
            CHECK(same(g, h));
        }
        const Tdfa m = minimize(d);
        CHECK(to_json(minimize(m)) == to_json(m));
    }
}

TEST_CASE("minimization merges equivalent states") {
    Tdfa d = raw(parse_regex("ac|bc"), false);
    const Tdfa m = minimize(d);
    CHECK(m.states.size() < d.states.size());
    check_same_results(d, m, all_inputs("abc", 3));
}

TEST_CASE("normalization sorts sets, deduplicates and orders copies") {
    RegCfg g;
    g.nregs = 4;
    g.final_regs = {1};
    g.reg_multi = {false, false, false, false, false};
    CfgBlock b;
    b.ops = {RegOp::copy(1, 2), RegOp::copy(2, 3), RegOp::set(4, true), RegOp::set(3, false), RegOp::set(4, true)};
    g.blocks.push_back(b);
    normalization(g);
    CHECK(g.blocks[0].ops == OpList{RegOp::copy(1, 2), RegOp::copy(2, 3), RegOp::set(3, false), RegOp::set(4, true)});
}

TEST_CASE("liveness grid uses stars and dots") {
    Tdfa d = raw(parse_regex(kExample), false);
    const RegCfg g = build_cfg(d);
    const std::string grid = liveness_grid(g, liveness_analysis(g));
    CHECK(grid.find('*') != std::string::npos);
    CHECK(grid.find('.') != std::string::npos);
    CHECK(to_dot(g).find("digraph") != std::string::npos);
}

TEST_CASE("skipping normalization is visible") {
    std::size_t differ = 0;
    for (int i = 0; i < 100; ++i) {
        Tdfa a = raw(fuzz_pattern(55, i, {}), false);
        Tdfa b = a;
        optimize(a);
        OptimizeOptions skip;
        skip.skip_normalization = true;
        optimize(b, skip);
        differ += to_json(a) != to_json(b);
    }
    CHECK(differ > 0);
}

}
