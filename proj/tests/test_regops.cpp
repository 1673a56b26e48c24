#include <algorithm>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "tdfa/regops.hpp"

using namespace tdfa;

namespace {

// Operations with distinct left-hand sides over registers 1..nregs.
OpList random_ops(std::mt19937_64& rng, int nregs) {
    std::vector<Reg> lhs(static_cast<std::size_t>(nregs));
    for (int i = 0; i < nregs; ++i) lhs[static_cast<std::size_t>(i)] = i + 1;
    std::shuffle(lhs.begin(), lhs.end(), rng);
    const int n = std::uniform_int_distribution<int>(0, nregs)(rng);
    std::uniform_int_distribution<int> reg(1, nregs);
    std::uniform_int_distribution<int> kind(0, 2);
    OpList ops;
    for (int i = 0; i < n; ++i) {
        const Reg l = lhs[static_cast<std::size_t>(i)];
        switch (kind(rng)) {
        case 0: ops.push_back(RegOp::set(l, reg(rng) % 2 == 0)); break;
        case 1: ops.push_back(RegOp::copy(l, reg(rng))); break;
        default: ops.push_back(RegOp::append(l, reg(rng), reg(rng) % 2 ? "p" : "np")); break;
        }
    }
    return ops;
}

oracle::Registers initial_registers(int nregs) {
    oracle::Registers r;
    for (Reg i = 1; i <= nregs; ++i) r[i] = {100 + i};
    return r;
}

// Does the copy/append graph contain a cycle other than self-loops?
bool has_nontrivial_cycle(const OpList& ops) {
    std::map<Reg, Reg> edge;
    for (const auto& op : ops) {
        if (op.reads() && op.rhs != op.lhs) edge[op.lhs] = op.rhs;
    }
    for (const auto& [start, unused] : edge) {
        Reg r = start;
        for (std::size_t i = 0; i <= edge.size(); ++i) {
            auto it = edge.find(r);
            if (it == edge.end()) break;
            r = it->second;
            if (r == start) return true;
        }
    }
    return false;
}

}

TEST_SUITE("regops") {

TEST_CASE("operations print in arrow notation") {
    CHECK(to_string(RegOp::set(11, true)) == "r11 ← p");
    CHECK(to_string(RegOp::set(3, false)) == "r3 ← n");
    CHECK(to_string(RegOp::copy(12, 11)) == "r12 ← r11");
    CHECK(to_string(RegOp::append(3, 2, "np")) == "r3 ← r2·np");
}

TEST_CASE("topological sort rejects a two-register cycle") {
    OpList ops{RegOp::copy(1, 2), RegOp::copy(2, 1)};
    CHECK_FALSE(topological_sort(ops));
}

TEST_CASE("topological sort accepts a self append") {
    OpList ops{RegOp::append(1, 1, "p")};
    CHECK(topological_sort(ops));
    CHECK(ops == OpList{RegOp::append(1, 1, "p")});
}

TEST_CASE("readers move before writers") {
    OpList ops{RegOp::set(1, true), RegOp::copy(2, 1)};
    REQUIRE(topological_sort(ops));
    CHECK(ops == OpList{RegOp::copy(2, 1), RegOp::set(1, true)});
}

TEST_CASE("sorted lists run sequentially like simultaneous assignment") {
    std::mt19937_64 rng(42);
    int accepted = 0;
    int rejected = 0;
    for (int i = 0; i < 5000; ++i) {
        const int nregs = std::uniform_int_distribution<int>(1, 6)(rng);
        const OpList original = random_ops(rng, nregs);
        OpList sorted = original;
        const bool ok = topological_sort(sorted);
        CAPTURE(to_string(original));

        OpList a = original, b = sorted;
        auto by_text = [](const RegOp& x, const RegOp& y) { return to_string(x) < to_string(y); };
        std::sort(a.begin(), a.end(), by_text);
        std::sort(b.begin(), b.end(), by_text);
        CHECK(a == b);

        CHECK(ok == !has_nontrivial_cycle(original));
        if (!ok) {
            ++rejected;
            continue;
        }
        ++accepted;
        const auto regs = initial_registers(nregs);
        CHECK(oracle::sequential_assign(sorted, regs, 7) == oracle::parallel_assign(original, regs, 7));
    }
    CHECK(accepted > 1000);
    CHECK(rejected > 10);
}

TEST_CASE("remove_duplicates keeps first occurrences") {
    OpList ops{RegOp::set(1, true), RegOp::copy(2, 1), RegOp::set(1, true), RegOp::copy(2, 1), RegOp::set(1, false)};
    remove_duplicates(ops);
    CHECK(ops == OpList{RegOp::set(1, true), RegOp::copy(2, 1), RegOp::set(1, false)});
}

TEST_CASE("naive register semantics match the reference") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 2000; ++i) {
        const int nregs = std::uniform_int_distribution<int>(1, 6)(rng);
        const OpList ops = random_ops(rng, nregs);
        std::vector<NaiveRegister> regs(static_cast<std::size_t>(nregs) + 1);
        for (Reg r = 1; r <= nregs; ++r) regs[static_cast<std::size_t>(r)].values = {100 + r};
        run_naive(ops, regs, 7);
        const auto want = oracle::sequential_assign(ops, initial_registers(nregs), 7);
        for (Reg r = 1; r <= nregs; ++r) CHECK(regs[static_cast<std::size_t>(r)].values == want.at(r));
    }
}

}
