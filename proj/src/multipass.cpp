#include "tdfa/multipass.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace tdfa {

std::vector<int> unique_origins(const det::Closure& c) {
    std::vector<int> u(c.size(), -1);
    std::vector<StateId> seen;
    for (std::size_t k = 0; k < c.size(); ++k) {
        auto it = std::find(seen.begin(), seen.end(), c[k].origin);
        if (it == seen.end()) {
            u[k] = static_cast<int>(seen.size());
            seen.push_back(c[k].origin);
        } else {
            u[k] = static_cast<int>(it - seen.begin());
        }
    }
    return u;
}

BacklinkArray construct_backlinks(const det::Closure& c, const det::Closure& source,
                                  const std::vector<int>& u_source, const std::vector<int>& u_target) {
    const int size = u_target.empty() ? 0 : *std::max_element(u_target.begin(), u_target.end()) + 1;
    BacklinkArray b(static_cast<std::size_t>(size));
    std::vector<bool> defined(b.size(), false);
    for (std::size_t k = 0; k < c.size(); ++k) {
        const auto i = static_cast<std::size_t>(u_target[k]);
        if (defined[i]) continue;
        defined[i] = true;
        int origin_index = 0;
        for (std::size_t m = 0; m < source.size(); ++m) {
            if (source[m].q == c[k].origin) {
                origin_index = u_source[m];
                break;
            }
        }
        b[i] = {origin_index, c[k].h};
    }
    return b;
}

namespace {

// Reinserts tags nested inside a bypassed outer tag pair: the opening tag
// of a pair is followed by the negations of all tags inside it.
TagSeq expand(const TagSeq& h, const TagNesting* nesting) {
    if (!nesting) return h;
    TagSeq out;
    for (Tag t : h) {
        out.push_back(t);
        if (t >= 0) continue;
        const auto& inner = (*nesting)[static_cast<std::size_t>(-t - 1)];
        if (!inner.empty() && -t < inner.front()) {
            for (Tag u : inner) out.push_back(-u);
        }
    }
    return out;
}

struct MpKernel {
    det::Closure configs;
    std::vector<int> origins;
};

std::vector<int> kernel_key(const det::Closure& c, const std::vector<int>& u) {
    std::vector<int> key;
    for (std::size_t k = 0; k < c.size(); ++k) {
        key.push_back(static_cast<int>(c[k].q));
        key.push_back(u[k]);
        key.push_back(static_cast<int>(c[k].l.size()));
        key.insert(key.end(), c[k].l.begin(), c[k].l.end());
    }
    return key;
}

} // namespace

MultipassTdfa determinize_multipass(const Tnfa& nfa, std::size_t max_states, const TagNesting* nesting) {
    MultipassTdfa f;
    f.classes = byte_classes(nfa);
    f.ntags = nfa.ntags;
    std::vector<MpKernel> kernels;
    std::map<std::vector<int>, int> ids;

    auto add_state = [&](det::Closure c, std::vector<int> u) {
        for (det::Config& x : c) x.h.clear();
        std::vector<int> key = kernel_key(c, u);
        if (auto it = ids.find(key); it != ids.end()) return it->second;
        if (kernels.size() >= max_states) {
            throw ResourceError("determinization exceeded " + std::to_string(max_states) + " states");
        }
        const int id = static_cast<int>(kernels.size());
        MpState st;
        st.next.resize(f.classes.count());
        for (std::size_t k = 0; k < c.size(); ++k) {
            if (c[k].q == nfa.final) {
                st.final = true;
                st.final_link = {u[k], expand(c[k].l, nesting)};
            }
        }
        f.states.push_back(std::move(st));
        kernels.push_back({std::move(c), std::move(u)});
        ids.emplace(std::move(key), id);
        return id;
    };

    det::Closure c0 = det::epsilon_closure(nfa, {{nfa.initial, nfa.initial, {}, {}, {}}});
    std::vector<int> u0 = unique_origins(c0);
    f.initial = add_state(std::move(c0), std::move(u0));

    for (std::size_t s = 0; s < kernels.size(); ++s) {
        for (std::size_t cls = 0; cls < f.classes.count(); ++cls) {
            const MpKernel src = kernels[s];
            const det::Closure b = det::step_on_symbol(nfa, src.configs, f.classes.representative[cls]);
            if (b.empty()) continue;
            det::Closure c = det::epsilon_closure(nfa, b);
            if (c.empty()) continue;
            std::vector<int> u = unique_origins(c);
            BacklinkArray links = construct_backlinks(c, src.configs, src.origins, u);
            for (Backlink& bl : links) bl.h = expand(bl.h, nesting);
            const int target = add_state(std::move(c), std::move(u));
            f.arrays.push_back(std::move(links));
            f.states[s].next[cls] = {target, static_cast<int>(f.arrays.size() - 1)};
        }
    }
    return f;
}

std::optional<ForwardTrace> match_forward(const MultipassTdfa& f, std::string_view input) {
    ForwardTrace tr;
    tr.states.reserve(input.size() + 1);
    tr.links.reserve(input.size());
    int s = f.initial;
    tr.states.push_back(s);
    for (const char ch : input) {
        const MpTransition& t = f.step(s, static_cast<std::uint8_t>(ch));
        if (t.target == kNoState) return std::nullopt;
        tr.links.push_back(&f.arrays[static_cast<std::size_t>(t.links)]);
        s = t.target;
        tr.states.push_back(s);
    }
    if (!f.states[static_cast<std::size_t>(s)].final) return std::nullopt;
    return tr;
}

TagValues extract_offsets(const MultipassTdfa& f, const ForwardTrace& trace) {
    TagValues e(static_cast<std::size_t>(f.ntags), kNil);
    std::vector<bool> set(e.size(), false);
    const Backlink* b = &f.states[static_cast<std::size_t>(trace.states.back())].final_link;
    for (std::size_t k = trace.links.size();; --k) {
        for (auto it = b->h.rbegin(); it != b->h.rend(); ++it) {
            const auto t = static_cast<std::size_t>(std::abs(*it) - 1);
            if (set[t]) continue;
            set[t] = true;
            e[t] = *it > 0 ? static_cast<Offset>(k) : kNil;
        }
        if (k == 0) break;
        b = &(*trace.links[k - 1])[static_cast<std::size_t>(b->index)];
    }
    return e;
}

TagLists extract_offset_lists(const MultipassTdfa& f, const ForwardTrace& trace) {
    TagLists e(static_cast<std::size_t>(f.ntags));
    const Backlink* b = &f.states[static_cast<std::size_t>(trace.states.back())].final_link;
    for (std::size_t k = trace.links.size();; --k) {
        for (auto it = b->h.rbegin(); it != b->h.rend(); ++it) {
            const auto t = static_cast<std::size_t>(std::abs(*it) - 1);
            e[t].push_back(*it > 0 ? static_cast<Offset>(k) : -1);
        }
        if (k == 0) break;
        b = &(*trace.links[k - 1])[static_cast<std::size_t>(b->index)];
    }
    for (auto& list : e) std::reverse(list.begin(), list.end());
    return e;
}

TaggedString extract_tstring(const MultipassTdfa& f, std::string_view input, const ForwardTrace& trace) {
    const std::size_t n = trace.links.size();
    const Backlink* last = &f.states[static_cast<std::size_t>(trace.states.back())].final_link;

    // first backward pass sizes the output
    std::size_t total = last->h.size();
    {
        const Backlink* b = last;
        for (std::size_t k = n; k > 0; --k) {
            b = &(*trace.links[k - 1])[static_cast<std::size_t>(b->index)];
            total += b->h.size() + 1;
        }
    }

    TaggedString x(total, TstringItem::sym(0));
    std::size_t pos = total;
    auto put_tags = [&](const TagSeq& h) {
        for (auto it = h.rbegin(); it != h.rend(); ++it) x[--pos] = TstringItem::tag(*it);
    };
    put_tags(last->h);
    const Backlink* b = last;
    for (std::size_t k = n; k > 0; --k) {
        b = &(*trace.links[k - 1])[static_cast<std::size_t>(b->index)];
        x[--pos] = TstringItem::sym(static_cast<std::uint8_t>(input[k - 1]));
        put_tags(b->h);
    }
    return x;
}

namespace {

std::string seq_label(const TagSeq& h) {
    std::string s;
    for (Tag t : h) {
        if (!s.empty()) s += ' ';
        s += std::to_string(t);
    }
    return s.empty() ? "&epsilon;" : s;
}

} // namespace

std::size_t backward_steps(const MultipassTdfa& f, const ForwardTrace& trace) {
    const Backlink* b = &f.states[static_cast<std::size_t>(trace.states.back())].final_link;
    std::size_t steps = b->h.size();
    for (std::size_t k = trace.links.size(); k > 0; --k) {
        b = &(*trace.links[k - 1])[static_cast<std::size_t>(b->index)];
        steps += 2 + b->h.size();
    }
    return steps;
}

std::string to_dot(const MultipassTdfa& f) {
    std::ostringstream os;
    os << "digraph multipass {\n  rankdir=LR;\n  node [shape=circle];\n";
    for (std::size_t s = 0; s < f.states.size(); ++s) {
        const MpState& st = f.states[s];
        os << "  " << s << (st.final ? " [shape=doublecircle];\n" : ";\n");
        if (st.final) {
            os << "  f" << s << " [shape=point];\n";
            os << "  " << s << " -> f" << s << " [style=dashed, label=\"(" << st.final_link.index << ", "
               << seq_label(st.final_link.h) << ")\"];\n";
        }
        for (std::size_t c = 0; c < st.next.size(); ++c) {
            const MpTransition& t = st.next[c];
            if (t.target == kNoState) continue;
            os << "  " << s << " -> " << t.target << " [label=\"";
            const std::uint8_t rep = f.classes.representative[c];
            if (rep >= 0x21 && rep < 0x7f && rep != '"' && rep != '\\') {
                os << static_cast<char>(rep);
            } else {
                os << "\\\\x" << std::hex << static_cast<int>(rep) << std::dec;
            }
            for (const Backlink& b : f.arrays[static_cast<std::size_t>(t.links)]) {
                os << "\\n(" << b.index << ", " << seq_label(b.h) << ")";
            }
            os << "\"];\n";
        }
    }
    os << "}\n";
    return os.str();
}

} // namespace tdfa
