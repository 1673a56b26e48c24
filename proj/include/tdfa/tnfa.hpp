#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tdfa/common.hpp"
#include "tdfa/regex.hpp"

namespace tdfa {

using StateId = std::uint32_t;

struct EpsilonTransition {
    int priority; // 1, 2, ... distinct per source state
    Tag tag;      // 0 for untagged, t or -t
    StateId target;
};

struct SymbolTransition {
    std::uint8_t symbol;
    StateId target;
};

struct TnfaState {
    std::optional<SymbolTransition> symbol; // at most one per state
    std::vector<EpsilonTransition> epsilon; // sorted by priority
};

// Tagged NFA. States are numbered in reverse post-order of a depth-first
// walk from the initial state, which puts the initial state first and the
// final state last.
struct Tnfa {
    int ntags = 0;
    std::vector<TnfaState> states;
    StateId initial = 0;
    StateId final = 0;

    std::size_t size() const { return states.size(); }
    bool has_symbol(StateId q) const { return states[q].symbol.has_value(); }
};

// Builds the automaton by structural recursion. Tags must be 1..N.
// With `nesting` (full-parsing mode) bypass chains emit negative tags only
// for the outermost tags of the bypassed subexpression.
Tnfa build_tnfa(const Regex& e, const TagNesting* nesting = nullptr);

// Standalone negative-tag chain from a fresh start state to a final state.
Tnfa ntags(const std::vector<Tag>& tags);

// Input symbols interleaved with (signed) tags.
struct TstringItem {
    bool is_symbol;
    int value; // byte for symbols, t or -t for tags

    static TstringItem sym(std::uint8_t c) { return {true, c}; }
    static TstringItem tag(Tag t) { return {false, t}; }
    friend bool operator==(const TstringItem&, const TstringItem&) = default;
};
using TaggedString = std::vector<TstringItem>;

// Leftmost-greedy simulation.
struct SimConfig {
    StateId state;
    TagValues tags;
};
using SimConfigs = std::vector<SimConfig>;

SimConfigs sim_epsilon_closure(const SimConfigs& configs, const Tnfa& nfa, Offset k);
SimConfigs sim_step_on_symbol(const SimConfigs& configs, const Tnfa& nfa, std::uint8_t a);

std::optional<TagValues> simulate(const Tnfa& nfa, std::string_view input);

// Simulation that records, for the winning path, every tag occurrence in
// path order as (signed tag, offset).
using TagEvent = std::pair<Tag, Offset>;
using TagTrace = std::vector<TagEvent>;
std::optional<TagTrace> simulate_trace(const Tnfa& nfa, std::string_view input);

// Reductions of a trace to the three result representations.
TagValues trace_offsets(const TagTrace& trace, int ntags);
TagLists trace_lists(const TagTrace& trace, int ntags);
TaggedString trace_tstring(const TagTrace& trace, std::string_view input);

std::string to_dot(const Tnfa& nfa);

} // namespace tdfa
