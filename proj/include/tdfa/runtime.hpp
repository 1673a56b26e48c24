#pragma once

#include <cstdint>
#include <memory>
#include <string_view>
#include <vector>

#include "tdfa/common.hpp"
#include "tdfa/regops.hpp"
#include "tdfa/tdfa.hpp"

namespace tdfa {

// Offset histories of multi-valued tags as an append-only prefix tree.
// Node 0 is the empty sequence; nodes are allocated in fixed-size chunks so
// indices stay valid while the tree grows.
class PrefixTree {
public:
    static constexpr std::size_t kChunk = 4096;

    struct Node {
        std::int64_t pred;
        Offset offs;
    };

    PrefixTree();

    std::int64_t append(std::int64_t idx, std::string_view h, Offset pos);
    std::vector<Offset> unpack(std::int64_t idx) const;

    const Node& node(std::int64_t idx) const {
        const auto i = static_cast<std::size_t>(idx);
        return chunks_[i / kChunk][i % kChunk];
    }
    std::size_t size() const { return size_; }

private:
    std::vector<std::unique_ptr<Node[]>> chunks_;
    std::size_t size_ = 0;
};

// Scalar offsets (or kNil) for single-valued registers, tree indices for
// multi-valued ones.
using RegisterFile = std::vector<std::int64_t>;

void run_ops(const OpList& ops, RegisterFile& regs, PrefixTree& tree, Offset pos);

enum class MatchMode { Full, LongestPrefix };

struct ExecStats {
    std::uint64_t transitions = 0;
    std::uint64_t operations = 0;
};

struct MatchResult {
    enum class Kind { NoMatch, Match, PrefixMatch };

    Kind kind = Kind::NoMatch;
    Offset end = 0;     // length of the matched prefix
    TagValues offsets;  // per tag; last list element for multi-valued tags
    TagLists lists;     // per tag; singleton list for single-valued tags
    TaggedString tstring;

    bool matched() const { return kind != Kind::NoMatch; }
};

// Runs the automaton. Longest-prefix mode needs fallback operations on
// fallback states (see add_fallback_regops).
MatchResult exec(const Tdfa& dfa, std::string_view input, MatchMode mode = MatchMode::Full,
                 ExecStats* stats = nullptr);

} // namespace tdfa
