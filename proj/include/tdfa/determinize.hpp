#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "tdfa/regops.hpp"
#include "tdfa/tdfa.hpp"
#include "tdfa/tnfa.hpp"

namespace tdfa {

inline constexpr std::size_t kDefaultMaxStates = 100000;

namespace det {

// Closure configuration (q, o, r, h, l). Registers are indexed by t-1.
struct Config {
    StateId q = 0;
    StateId origin = 0;
    std::vector<Reg> r;
    TagSeq h;
    TagSeq l;
};
using Closure = std::vector<Config>;

// Projection of a tag sequence onto tag t: 'p' for t, 'n' for -t.
std::string history(const TagSeq& h, Tag t);

// Right-hand side for tag t with nonempty history h_t: Append(r[t], h_t)
// for multi-valued tags, Set(last element) otherwise. The lhs is left 0.
RegOp regop_rhs(const std::vector<Reg>& r, const std::string& h_t, Tag t, bool multi);

// Leftmost-greedy closure: depth-first, transitions in priority order,
// first arrival wins; keeps final and symbol-bearing states only.
Closure epsilon_closure(const Tnfa& nfa, const Closure& seeds);

// Follows symbol transitions on `a` from configurations in precedence
// order; the lookahead of each configuration becomes the inherited h.
Closure step_on_symbol(const Tnfa& nfa, const Closure& state, std::uint8_t a);

std::vector<StateId> precedence(const Closure& c);

// Per-source-state cache from (tag, operation rhs) to register.
using RhsKey = std::tuple<Tag, int, Reg, std::string>;
using RhsCache = std::map<RhsKey, Reg>;

} // namespace det

class Determinizer {
public:
    Determinizer(const Tnfa& nfa, std::vector<bool> multi, std::size_t max_states = kDefaultMaxStates);

    Tdfa run();

    // Steps of the construction, public for testing.
    det::Closure initial_closure() const;
    OpList transition_regops(det::Closure& c, det::RhsCache& v);
    OpList final_regops(const std::vector<Reg>& r, const TagSeq& l) const;
    bool map_states(const det::Closure& s, const det::Closure& old, OpList& ops) const;
    int add_state(const det::Closure& c, OpList& ops);

    const det::Closure& kernel(int state) const { return kernels_[static_cast<std::size_t>(state)]; }
    std::size_t state_count() const { return kernels_.size(); }
    const Tdfa& automaton() const { return dfa_; }

private:
    std::vector<int> identity_key(const det::Closure& c) const;
    std::vector<int> shape_key(const det::Closure& c) const;

    const Tnfa& nfa_;
    std::size_t max_states_;
    int ntags_;
    std::vector<bool> multi_;
    Reg max_reg_ = 0;
    Tdfa dfa_;
    std::vector<det::Closure> kernels_;
    std::map<std::vector<int>, int> by_identity_;
    std::map<std::vector<int>, std::vector<int>> by_shape_;
};

// Builds the register TDFA. `multi` flags multi-valued tags (index t-1).
// Throws ResourceError when the state count exceeds `max_states`.
Tdfa determinize(const Tnfa& nfa, const std::vector<bool>& multi, std::size_t max_states = kDefaultMaxStates);

} // namespace tdfa
