#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "tdfa/determinize.hpp"
#include "tdfa/fixed_tags.hpp"
#include "tdfa/multipass.hpp"
#include "tdfa/optimizer.hpp"
#include "tdfa/regex.hpp"
#include "tdfa/runtime.hpp"
#include "tdfa/tdfa.hpp"
#include "tdfa/tnfa.hpp"

namespace tdfa {

enum class Engine { Simulation, Tdfa, Multipass };
enum class Repr { Offsets, Lists, Tstring };
enum class OptLevel { None, Full };

struct Options {
    Engine engine = Engine::Tdfa;
    OptLevel opt = OptLevel::Full;
    bool fixed_tags = false;
    MultiValuedPolicy multi = MultiValuedPolicy::None;
    bool full_parsing = false; // tag every subexpression
    std::size_t max_states = kDefaultMaxStates;
    int max_bound = 1000;
    bool all_engines = false; // build every automaton regardless of engine
};

// Compiled pattern. Tags inside automata are numbered 1..K after fixed
// tags are removed; `kept` maps them back to the pattern's tags.
struct Compiled {
    Options options;
    RegexPtr regex;    // as parsed (auto-tagged in full-parsing mode)
    TagTable tags;     // analysis of `regex`
    StrippedRegex stripped;
    TagNesting nesting; // full-parsing mode only
    Tnfa nfa;
    std::optional<Tdfa> raw;       // determinized, fallback operations added
    std::optional<Tdfa> optimized; // register optimizations
    std::optional<Tdfa> minimized; // optimized and minimized
    OptimizeReport report;
    std::optional<MultipassTdfa> multipass;

    int ntags() const { return static_cast<int>(tags.size()); }
    // The automaton used by the tdfa engine at the configured level.
    const Tdfa& tdfa() const;
};

// Throws SyntaxError on bad patterns and ResourceError on state caps.
Compiled compile(std::string_view pattern, const Options& opts);
Compiled compile(const RegexPtr& regex, const Options& opts);

// Throws std::invalid_argument for unsupported engine/mode/representation
// combinations: longest-prefix needs the tdfa engine, tagged strings need
// the multipass engine without fixed tags.
MatchResult match(const Compiled& c, std::string_view input, MatchMode mode = MatchMode::Full,
                  Repr repr = Repr::Offsets, ExecStats* stats = nullptr);

// Runs a specific register automaton and maps results back to pattern tags.
MatchResult match_tdfa(const Compiled& c, const Tdfa& dfa, std::string_view input, MatchMode mode,
                       ExecStats* stats = nullptr);

// Printing: offsets as "t1=1 t2=n", lists as "t1={0,1}", tagged strings
// as space-separated items where tags print as signed integers and bytes
// literally (digits, '-', space, backslash and non-printables as \xHH).
std::string format_offsets(const TagValues& v);
std::string format_lists(const TagLists& l);
std::string format_tstring(const TaggedString& s);

} // namespace tdfa
