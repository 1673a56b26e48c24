#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tdfa/common.hpp"

namespace tdfa {

// Register operation on a TDFA transition or quasi-transition.
//   Set:    lhs <- n | p
//   Copy:   lhs <- rhs
//   Append: lhs <- rhs . history     (history is a nonempty string over {n, p})
struct RegOp {
    enum class Kind : std::uint8_t { Set, Copy, Append };

    Kind kind = Kind::Set;
    Reg lhs = 0;
    Reg rhs = 0;
    bool pos = false; // Set: true for p, false for n
    std::string history;

    static RegOp set(Reg lhs, bool pos) { return {Kind::Set, lhs, 0, pos, {}}; }
    static RegOp copy(Reg lhs, Reg rhs) { return {Kind::Copy, lhs, rhs, false, {}}; }
    static RegOp append(Reg lhs, Reg rhs, std::string h) { return {Kind::Append, lhs, rhs, false, std::move(h)}; }

    bool reads() const { return kind != Kind::Set; }
    friend bool operator==(const RegOp&, const RegOp&) = default;
};

using OpList = std::vector<RegOp>;

// Arrow notation, e.g. "r11 ← p", "r12 ← r11", "r3 ← r2·np".
std::string to_string(const RegOp& op);
std::string to_string(const OpList& ops);

// Orders operations so that every register is read before it is
// overwritten. Returns false if a nontrivial cycle (e.g. 1←2, 2←1) remains;
// trivial cycles such as 1←1·h are tolerated. Cyclic leftovers are kept in
// their original order at the end.
bool topological_sort(OpList& ops);

// Removes later duplicates of each operation, keeping first occurrences.
void remove_duplicates(OpList& ops);

// Reference semantics of an operation list on a register file of offsets
// (single-valued) or offset lists (multi-valued), used by tests and the
// naive runtime oracle.
struct NaiveRegister {
    std::vector<Offset> values;
    friend bool operator==(const NaiveRegister&, const NaiveRegister&) = default;
};
void run_naive(const OpList& ops, std::vector<NaiveRegister>& regs, Offset pos);

} // namespace tdfa
