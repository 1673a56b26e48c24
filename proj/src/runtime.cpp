#include "tdfa/runtime.hpp"

#include <algorithm>
#include <stdexcept>

namespace tdfa {

PrefixTree::PrefixTree() {
    chunks_.push_back(std::make_unique<Node[]>(kChunk));
    chunks_[0][0] = {0, kNil};
    size_ = 1;
}

std::int64_t PrefixTree::append(std::int64_t idx, std::string_view h, Offset pos) {
    for (const char c : h) {
        if (size_ % kChunk == 0) chunks_.push_back(std::make_unique<Node[]>(kChunk));
        chunks_[size_ / kChunk][size_ % kChunk] = {idx, c == 'p' ? pos : kNil};
        idx = static_cast<std::int64_t>(size_++);
    }
    return idx;
}

std::vector<Offset> PrefixTree::unpack(std::int64_t idx) const {
    std::vector<Offset> out;
    while (idx != 0) {
        const Node& n = node(idx);
        out.push_back(n.offs);
        idx = n.pred;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

void run_ops(const OpList& ops, RegisterFile& regs, PrefixTree& tree, Offset pos) {
    for (const RegOp& op : ops) {
        switch (op.kind) {
        case RegOp::Kind::Set: regs[op.lhs] = op.pos ? pos : kNil; break;
        case RegOp::Kind::Copy: regs[op.lhs] = regs[op.rhs]; break;
        case RegOp::Kind::Append: regs[op.lhs] = tree.append(regs[op.rhs], op.history, pos); break;
        }
    }
}

namespace {

MatchResult finish(const Tdfa& dfa, const OpList& ops, RegisterFile& regs, PrefixTree& tree, Offset pos,
                   MatchResult::Kind kind, ExecStats* stats) {
    run_ops(ops, regs, tree, pos);
    if (stats) stats->operations += ops.size();
    MatchResult res;
    res.kind = kind;
    res.end = pos;
    res.offsets.resize(static_cast<std::size_t>(dfa.ntags));
    res.lists.resize(static_cast<std::size_t>(dfa.ntags));
    for (int t = 0; t < dfa.ntags; ++t) {
        const std::int64_t v = regs[dfa.final_regs[t]];
        if (dfa.multi[t]) {
            res.lists[t] = tree.unpack(v);
            res.offsets[t] = res.lists[t].empty() ? kNil : res.lists[t].back();
        } else {
            res.offsets[t] = v;
            res.lists[t] = {v};
        }
    }
    return res;
}

} // namespace

namespace {

struct Cursor {
    int state;
    Offset k = 0;
    int last_final = kNoState;
    Offset last_pos = 0;
};

template <bool Prefix, bool Count>
void scan(const Tdfa& dfa, std::string_view input, RegisterFile& regs, PrefixTree& tree, Cursor& c,
          ExecStats* stats) {
    const auto* begin = reinterpret_cast<const std::uint8_t*>(input.data());
    const auto* end = begin + input.size();
    const auto* p = begin;
    const TdfaState* const states = dfa.states.data();
    const std::uint16_t* const cls = dfa.classes.of.data();
    int state = c.state;
    for (; p != end; ++p) {
        if constexpr (Prefix) {
            if (states[state].final) {
                c.last_final = state;
                c.last_pos = p - begin;
            }
        }
        const TdfaTransition& tr = states[state].next[cls[*p]];
        if (tr.target == kNoState) break;
        if (!tr.ops.empty()) run_ops(tr.ops, regs, tree, p - begin);
        if constexpr (Count) {
            ++stats->transitions;
            stats->operations += tr.ops.size();
        }
        state = tr.target;
    }
    if constexpr (Prefix) {
        if (p == end && states[state].final) {
            c.last_final = state;
            c.last_pos = p - begin;
        }
    }
    c.state = state;
    c.k = p - begin;
}

} // namespace

MatchResult exec(const Tdfa& dfa, std::string_view input, MatchMode mode, ExecStats* stats) {
    RegisterFile regs(static_cast<std::size_t>(dfa.nregs) + 1, kNil);
    for (std::size_t r = 0; r < regs.size() && r < dfa.reg_multi.size(); ++r) {
        if (dfa.reg_multi[r]) regs[r] = 0;
    }
    PrefixTree tree;
    const bool prefix = mode == MatchMode::LongestPrefix;
    const auto kind = prefix ? MatchResult::Kind::PrefixMatch : MatchResult::Kind::Match;

    Cursor c{dfa.initial};
    if (prefix) {
        stats ? scan<true, true>(dfa, input, regs, tree, c, stats) : scan<true, false>(dfa, input, regs, tree, c, stats);
    } else {
        stats ? scan<false, true>(dfa, input, regs, tree, c, stats) : scan<false, false>(dfa, input, regs, tree, c, stats);
    }

    const Offset n = static_cast<Offset>(input.size());
    const TdfaState& st = dfa.states[static_cast<std::size_t>(c.state)];
    if (c.k == n && st.final) return finish(dfa, st.final_ops, regs, tree, c.k, kind, stats);
    if (!prefix) return {};
    if (st.final) return finish(dfa, st.final_ops, regs, tree, c.k, kind, stats);
    if (c.last_final == kNoState) return {};
    const TdfaState& fb = dfa.states[static_cast<std::size_t>(c.last_final)];
    if (!fb.fallback) throw std::logic_error("fallback state without fallback operations");
    return finish(dfa, fb.fallback_ops, regs, tree, c.last_pos, kind, stats);
}

} // namespace tdfa
