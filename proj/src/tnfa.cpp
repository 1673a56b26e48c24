#include "tdfa/tnfa.hpp"

#include <algorithm>
#include <sstream>

namespace tdfa {

namespace {

class Builder {
public:
    explicit Builder(const TagNesting* nesting) : nesting_(nesting) {}

    StateId fresh() {
        states_.emplace_back();
        return static_cast<StateId>(states_.size() - 1);
    }

    void eps(StateId from, int prio, Tag tag, StateId to) {
        states_[from].epsilon.push_back({prio, tag, to});
    }

    // Chain of negative tags ending in qf; returns the chain start.
    StateId negative_chain(const std::vector<Tag>& tags, StateId qf) {
        const std::vector<Tag> emit = nesting_ ? outermost(tags) : tags;
        StateId next = qf;
        for (auto it = emit.rbegin(); it != emit.rend(); ++it) {
            const StateId q = fresh();
            eps(q, 1, -*it, next);
            next = q;
        }
        return next;
    }

    StateId build(const Regex& e, StateId qf) {
        using K = Regex::Kind;
        switch (e.kind) {
        case K::Empty:
            return qf;
        case K::Symbol: {
            const StateId q0 = fresh();
            states_[q0].symbol = SymbolTransition{e.symbol, qf};
            return q0;
        }
        case K::Tag: {
            const StateId q0 = fresh();
            eps(q0, 1, e.tag, qf);
            return q0;
        }
        case K::Cat: {
            const StateId q2 = build(*e.right, qf);
            return build(*e.left, q2);
        }
        case K::Alt: {
            const StateId q2 = build(*e.right, qf);
            const StateId q2n = negative_chain(tags_of(*e.right), qf);
            const StateId q1 = build(*e.left, q2n);
            const StateId q1n = negative_chain(tags_of(*e.left), q2);
            const StateId q0 = fresh();
            eps(q0, 1, 0, q1);
            eps(q0, 2, 0, q1n);
            return q0;
        }
        case K::Rep:
            return build_rep(*e.left, e.lo, e.hi, qf);
        }
        return qf;
    }

    std::vector<TnfaState> take() { return std::move(states_); }

private:
    static int dec(int bound) { return bound == kInfinity ? kInfinity : bound - 1; }

    StateId build_rep(const Regex& body, int lo, int hi, StateId qf) {
        if (lo > 1) {
            const StateId q2 = build_rep(body, lo - 1, dec(hi), qf);
            return build(body, q2);
        }
        if (lo == 0) {
            const auto tags = tags_of(body);
            if (hi == 0) return negative_chain(tags, qf);
            const StateId q1 = build_rep(body, 1, hi, qf);
            const StateId q1n = negative_chain(tags, qf);
            const StateId q0 = fresh();
            eps(q0, 1, 0, q1);
            eps(q0, 2, 0, q1n);
            return q0;
        }
        // lo == 1
        if (hi == 1) return build(body, qf);
        if (hi == kInfinity) {
            const StateId q1 = fresh();
            const StateId q0 = build(body, q1);
            eps(q1, 1, 0, q0);
            eps(q1, 2, 0, qf);
            return q0;
        }
        // Bounded: after each iteration, repeating is preferred to leaving.
        const StateId rest = build_rep(body, 1, hi - 1, qf);
        const StateId mid = fresh();
        eps(mid, 1, 0, rest);
        eps(mid, 2, 0, qf);
        return build(body, mid);
    }

    std::vector<Tag> outermost(const std::vector<Tag>& tags) const {
        std::vector<Tag> out;
        for (Tag t : tags) {
            bool nested = false;
            for (Tag u : tags) {
                const auto& inner = (*nesting_)[u - 1];
                if (u != t && std::binary_search(inner.begin(), inner.end(), t)) {
                    nested = true;
                    break;
                }
            }
            if (!nested) out.push_back(t);
        }
        return out;
    }

    const TagNesting* nesting_;
    std::vector<TnfaState> states_;
};

// Renumbers states in reverse post-order of a DFS that visits successors in
// reverse priority order.
Tnfa renumber(std::vector<TnfaState> states, StateId initial, StateId final, int ntags) {
    const std::size_t n = states.size();
    std::vector<std::uint8_t> mark(n, 0);
    std::vector<StateId> post;
    post.reserve(n);

    struct Frame {
        StateId q;
        std::vector<StateId> succ;
        std::size_t next = 0;
    };
    auto successors = [&](StateId q) {
        std::vector<StateId> succ;
        if (states[q].symbol) succ.push_back(states[q].symbol->target);
        for (auto it = states[q].epsilon.rbegin(); it != states[q].epsilon.rend(); ++it) {
            succ.push_back(it->target);
        }
        return succ;
    };
    std::vector<Frame> stack;
    stack.push_back({initial, successors(initial)});
    mark[initial] = 1;
    while (!stack.empty()) {
        Frame& f = stack.back();
        if (f.next < f.succ.size()) {
            const StateId p = f.succ[f.next++];
            if (!mark[p]) {
                mark[p] = 1;
                stack.push_back({p, successors(p)});
            }
        } else {
            post.push_back(f.q);
            stack.pop_back();
        }
    }

    std::vector<StateId> id(n, 0);
    StateId next = 0;
    for (auto it = post.rbegin(); it != post.rend(); ++it) id[*it] = next++;

    Tnfa nfa;
    nfa.ntags = ntags;
    nfa.states.resize(post.size());
    for (std::size_t q = 0; q < n; ++q) {
        if (!mark[q]) continue;
        TnfaState s = std::move(states[q]);
        if (s.symbol) s.symbol->target = id[s.symbol->target];
        for (auto& t : s.epsilon) t.target = id[t.target];
        nfa.states[id[q]] = std::move(s);
    }
    nfa.initial = id[initial];
    nfa.final = id[final];
    return nfa;
}

template <typename Payload, typename Apply>
std::vector<std::pair<StateId, Payload>> closure(const std::vector<std::pair<StateId, Payload>>& seeds,
                                                 const Tnfa& nfa, Apply apply) {
    std::vector<std::pair<StateId, Payload>> stack(seeds.rbegin(), seeds.rend());
    std::vector<std::pair<StateId, Payload>> out;
    std::vector<std::uint8_t> done(nfa.size(), 0);
    while (!stack.empty()) {
        auto [q, m] = std::move(stack.back());
        stack.pop_back();
        if (done[q]) continue;
        done[q] = 1;
        const auto& eps = nfa.states[q].epsilon;
        for (auto it = eps.rbegin(); it != eps.rend(); ++it) {
            if (done[it->target]) continue;
            Payload m2 = m;
            if (it->tag != 0) apply(m2, it->tag);
            stack.emplace_back(it->target, std::move(m2));
        }
        out.emplace_back(q, std::move(m));
    }
    std::erase_if(out, [&](const auto& c) { return c.first != nfa.final && !nfa.has_symbol(c.first); });
    return out;
}

template <typename Payload, typename Apply>
std::optional<Payload> run(const Tnfa& nfa, std::string_view input, Payload init, Apply apply) {
    using Configs = std::vector<std::pair<StateId, Payload>>;
    Configs c{{nfa.initial, std::move(init)}};
    Offset k = 0;
    auto at = [&](Payload& m, Tag t) { apply(m, t, k); };
    for (const char ch : input) {
        c = closure(c, nfa, at);
        Configs next;
        for (auto& [q, m] : c) {
            const auto& sym = nfa.states[q].symbol;
            if (sym && sym->symbol == static_cast<std::uint8_t>(ch)) next.emplace_back(sym->target, std::move(m));
        }
        if (next.empty()) return std::nullopt;
        c = std::move(next);
        ++k;
    }
    c = closure(c, nfa, at);
    for (auto& [q, m] : c) {
        if (q == nfa.final) return std::move(m);
    }
    return std::nullopt;
}

void set_tag(TagValues& m, Tag t, Offset k) {
    if (t > 0) {
        m[t - 1] = k;
    } else {
        m[-t - 1] = kNil;
    }
}

} // namespace

Tnfa build_tnfa(const Regex& e, const TagNesting* nesting) {
    Builder b(nesting);
    const StateId qf = b.fresh();
    const StateId q0 = b.build(e, qf);
    return renumber(b.take(), q0, qf, max_tag(e));
}

Tnfa ntags(const std::vector<Tag>& tags) {
    Builder b(nullptr);
    const StateId qf = b.fresh();
    const StateId q0 = b.negative_chain(tags, qf);
    int n = 0;
    for (Tag t : tags) n = std::max(n, t);
    return renumber(b.take(), q0, qf, n);
}

SimConfigs sim_epsilon_closure(const SimConfigs& configs, const Tnfa& nfa, Offset k) {
    std::vector<std::pair<StateId, TagValues>> seeds;
    seeds.reserve(configs.size());
    for (const auto& c : configs) seeds.emplace_back(c.state, c.tags);
    auto out = closure(seeds, nfa, [k](TagValues& m, Tag t) { set_tag(m, t, k); });
    SimConfigs result;
    result.reserve(out.size());
    for (auto& [q, m] : out) result.push_back({q, std::move(m)});
    return result;
}

SimConfigs sim_step_on_symbol(const SimConfigs& configs, const Tnfa& nfa, std::uint8_t a) {
    SimConfigs out;
    for (const auto& c : configs) {
        const auto& sym = nfa.states[c.state].symbol;
        if (sym && sym->symbol == a) out.push_back({sym->target, c.tags});
    }
    return out;
}

std::optional<TagValues> simulate(const Tnfa& nfa, std::string_view input) {
    return run(nfa, input, TagValues(static_cast<std::size_t>(nfa.ntags), kNil), set_tag);
}

std::optional<TagTrace> simulate_trace(const Tnfa& nfa, std::string_view input) {
    return run(nfa, input, TagTrace{}, [](TagTrace& tr, Tag t, Offset k) { tr.emplace_back(t, k); });
}

TagValues trace_offsets(const TagTrace& trace, int ntags) {
    TagValues out(static_cast<std::size_t>(ntags), kNil);
    for (const auto& [t, k] : trace) set_tag(out, t, k);
    return out;
}

TagLists trace_lists(const TagTrace& trace, int ntags) {
    TagLists out(static_cast<std::size_t>(ntags));
    for (const auto& [t, k] : trace) {
        if (t > 0) {
            out[t - 1].push_back(k);
        } else {
            out[-t - 1].push_back(kNil);
        }
    }
    return out;
}

TaggedString trace_tstring(const TagTrace& trace, std::string_view input) {
    TaggedString out;
    std::size_t pos = 0;
    for (const auto& [t, k] : trace) {
        for (; pos < static_cast<std::size_t>(k); ++pos) {
            out.push_back(TstringItem::sym(static_cast<std::uint8_t>(input[pos])));
        }
        out.push_back(TstringItem::tag(t));
    }
    for (; pos < input.size(); ++pos) out.push_back(TstringItem::sym(static_cast<std::uint8_t>(input[pos])));
    return out;
}

std::string to_dot(const Tnfa& nfa) {
    std::ostringstream os;
    os << "digraph tnfa {\n  rankdir=LR;\n  node [shape=circle];\n";
    os << "  " << nfa.final << " [shape=doublecircle];\n";
    for (StateId q = 0; q < nfa.size(); ++q) {
        const auto& s = nfa.states[q];
        if (s.symbol) {
            const char c = static_cast<char>(s.symbol->symbol);
            os << "  " << q << " -> " << s.symbol->target << " [style=bold, label=\"";
            if (c == '"' || c == '\\') os << '\\';
            os << c << "\"];\n";
        }
        for (const auto& t : s.epsilon) {
            os << "  " << q << " -> " << t.target << " [label=\"" << t.priority << '/';
            if (t.tag == 0) {
                os << "&epsilon;\"];\n";
            } else {
                os << (t.tag < 0 ? "-" : "") << 't' << std::abs(t.tag) << "\", style=dashed];\n";
            }
        }
    }
    os << "}\n";
    return os.str();
}

} // namespace tdfa
