#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "tdfa/common.hpp"
#include "tdfa/determinize.hpp"
#include "tdfa/regex.hpp"
#include "tdfa/tdfa.hpp"
#include "tdfa/tnfa.hpp"

namespace tdfa {

// (i, h): index into the backlink array of the preceding transition and the
// tag sequence of the path fragment.
struct Backlink {
    int index = 0;
    TagSeq h;
    friend bool operator==(const Backlink&, const Backlink&) = default;
};
using BacklinkArray = std::vector<Backlink>;

struct MpTransition {
    int target = kNoState;
    int links = -1; // index into MultipassTdfa::arrays
};

struct MpState {
    std::vector<MpTransition> next; // indexed by byte class
    bool final = false;
    Backlink final_link;
};

struct MultipassTdfa {
    ByteClasses classes;
    int ntags = 0;
    std::vector<MpState> states;
    std::vector<BacklinkArray> arrays;
    int initial = 0;

    const MpTransition& step(int state, std::uint8_t byte) const {
        return states[static_cast<std::size_t>(state)].next[classes.of[byte]];
    }
};

// Unique origin index of every configuration in c (aligned with c),
// numbered in order of first appearance.
std::vector<int> unique_origins(const det::Closure& c);

// Backlink array for closure c reached from a state whose kernel is
// `source` with unique origin indices `u_source`; `u_target` are the unique
// origin indices of c.
BacklinkArray construct_backlinks(const det::Closure& c, const det::Closure& source,
                                  const std::vector<int>& u_source, const std::vector<int>& u_target);

// With `nesting`, the automaton must have been built with the same nesting
// map; bypassed outer tags are expanded to their nested tags in backlinks.
MultipassTdfa determinize_multipass(const Tnfa& nfa, std::size_t max_states = kDefaultMaxStates,
                                    const TagNesting* nesting = nullptr);

struct ForwardTrace {
    std::vector<int> states;                    // s_0 .. s_n
    std::vector<const BacklinkArray*> links;    // backlinks of transition k+1
};

std::optional<ForwardTrace> match_forward(const MultipassTdfa& f, std::string_view input);

TagValues extract_offsets(const MultipassTdfa& f, const ForwardTrace& trace);
TagLists extract_offset_lists(const MultipassTdfa& f, const ForwardTrace& trace);
TaggedString extract_tstring(const MultipassTdfa& f, std::string_view input, const ForwardTrace& trace);

// Work done by the backward pass: one forward transition and one backlink
// step per byte, plus every tag visited.
std::size_t backward_steps(const MultipassTdfa& f, const ForwardTrace& trace);

std::string to_dot(const MultipassTdfa& f);

} // namespace tdfa
