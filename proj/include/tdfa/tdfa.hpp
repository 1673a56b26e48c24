#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "tdfa/common.hpp"
#include "tdfa/regops.hpp"
#include "tdfa/tnfa.hpp"

namespace tdfa {

// Byte equivalence classes. Every byte that labels some TNFA transition is
// a class of its own; all other bytes share one dead class. Classes are
// numbered in order of their smallest byte.
struct ByteClasses {
    std::array<std::uint16_t, 256> of{};
    std::vector<std::uint8_t> representative; // smallest byte per class

    std::size_t count() const { return representative.size(); }
};

ByteClasses byte_classes(const Tnfa& nfa);

inline constexpr int kNoState = -1;

struct TdfaTransition {
    int target = kNoState;
    OpList ops;
};

struct TdfaState {
    std::vector<TdfaTransition> next; // indexed by byte class
    bool final = false;
    OpList final_ops;
    bool fallback = false;
    OpList fallback_ops;
};

// Deterministic automaton with registers numbered 1..nregs.
struct Tdfa {
    ByteClasses classes;
    int ntags = 0;
    std::vector<bool> multi;      // per tag (index t-1)
    std::vector<Reg> final_regs;  // per tag (index t-1)
    std::vector<bool> reg_multi;  // per register (index r), size nregs+1
    int nregs = 0;
    std::vector<TdfaState> states;
    int initial = 0;

    const TdfaTransition& step(int state, std::uint8_t byte) const {
        return states[static_cast<std::size_t>(state)].next[classes.of[byte]];
    }
};

struct TdfaStats {
    std::size_t states = 0;
    std::size_t finals = 0;
    std::size_t transitions = 0;
    std::size_t registers = 0; // distinct registers mentioned by any operation
    std::size_t max_register = 0;
    std::size_t operations = 0;
};

TdfaStats stats(const Tdfa& dfa);
std::string stats_json(const TdfaStats& s);

std::string to_dot(const Tdfa& dfa);

// Lossless JSON serialization.
std::string to_json(const Tdfa& dfa);
Tdfa tdfa_from_json(const std::string& text);

} // namespace tdfa
