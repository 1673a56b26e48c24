#include "tdfa/engine.hpp"

#include <cstdio>
#include <stdexcept>

namespace tdfa {

const Tdfa& Compiled::tdfa() const {
    const auto& dfa = options.opt == OptLevel::Full ? minimized : raw;
    if (!dfa) throw std::logic_error("register automaton was not built");
    return *dfa;
}

Compiled compile(std::string_view pattern, const Options& opts) {
    ParseOptions po;
    po.max_bound = opts.max_bound;
    return compile(parse_regex(pattern, po), opts);
}

Compiled compile(const RegexPtr& regex, const Options& opts) {
    Compiled c;
    c.options = opts;
    if (opts.full_parsing) {
        if (max_tag(*regex) != 0) throw std::invalid_argument("full parsing requires a pattern without tags");
        c.regex = auto_tag(regex);
    } else {
        c.regex = regex;
    }
    c.tags = analyze_tags(*c.regex, opts.multi, opts.fixed_tags);
    c.stripped = strip_fixed_tags(c.regex, c.tags);
    const bool nested = opts.full_parsing && c.stripped.kept.size() == c.tags.size();
    if (nested) c.nesting = auto_tag_nesting(*c.regex, c.ntags());
    c.nfa = build_tnfa(*c.stripped.regex);

    std::vector<bool> multi;
    for (Tag t : c.stripped.kept) multi.push_back(c.tags[static_cast<std::size_t>(t - 1)].multi_valued);

    const bool all = opts.all_engines;
    if (all || opts.engine == Engine::Tdfa) {
        c.raw = determinize(c.nfa, multi, opts.max_states);
        add_fallback_regops(*c.raw);
        if (all || opts.opt == OptLevel::Full) {
            c.optimized = *c.raw;
            c.report = optimize(*c.optimized);
            c.minimized = minimize(*c.optimized);
        }
    }
    if (all || opts.engine == Engine::Multipass) {
        if (nested) {
            const Tnfa reduced = build_tnfa(*c.stripped.regex, &c.nesting);
            c.multipass = determinize_multipass(reduced, opts.max_states, &c.nesting);
        } else {
            c.multipass = determinize_multipass(c.nfa, opts.max_states);
        }
    }
    return c;
}

namespace {

bool has_fixed(const Compiled& c) { return c.stripped.kept.size() != c.tags.size(); }

// Maps automaton tags back to pattern tags and fills in fixed tags.
void restore_tags(const Compiled& c, MatchResult& r) {
    const std::size_t n = c.tags.size();
    TagValues v(n, kNil);
    TagLists l(n);
    for (std::size_t i = 0; i < c.stripped.kept.size(); ++i) {
        const auto t = static_cast<std::size_t>(c.stripped.kept[i] - 1);
        if (i < r.offsets.size()) v[t] = r.offsets[i];
        if (i < r.lists.size()) l[t] = r.lists[i];
    }
    if (has_fixed(c)) {
        apply_fixed_tags(v, c.tags, r.end);
        apply_fixed_tags(l, c.tags, r.end);
    }
    r.offsets = std::move(v);
    r.lists = std::move(l);
}

TagLists singletons(const TagValues& v) {
    TagLists l;
    for (Offset x : v) l.push_back({x});
    return l;
}

TagValues last_elements(const TagLists& l) {
    TagValues v;
    for (const auto& x : l) v.push_back(x.empty() ? kNil : x.back());
    return v;
}

} // namespace

MatchResult match_tdfa(const Compiled& c, const Tdfa& dfa, std::string_view input, MatchMode mode,
                       ExecStats* stats) {
    MatchResult r = exec(dfa, input, mode, stats);
    if (r.matched()) restore_tags(c, r);
    return r;
}

MatchResult match(const Compiled& c, std::string_view input, MatchMode mode, Repr repr, ExecStats* stats) {
    const Engine engine = c.options.engine;
    if (mode == MatchMode::LongestPrefix && engine != Engine::Tdfa) {
        throw std::invalid_argument("longest-prefix matching requires the tdfa engine");
    }
    if (repr == Repr::Tstring && (engine != Engine::Multipass || has_fixed(c))) {
        throw std::invalid_argument("tagged strings require the multipass engine without fixed tags");
    }
    MatchResult r;
    switch (engine) {
    case Engine::Tdfa: return match_tdfa(c, c.tdfa(), input, mode, stats);
    case Engine::Simulation: {
        if (repr == Repr::Offsets) {
            auto v = simulate(c.nfa, input);
            if (!v) return r;
            r.offsets = std::move(*v);
            r.lists = singletons(r.offsets);
        } else {
            auto tr = simulate_trace(c.nfa, input);
            if (!tr) return r;
            r.offsets = trace_offsets(*tr, c.nfa.ntags);
            r.lists = trace_lists(*tr, c.nfa.ntags);
        }
        break;
    }
    case Engine::Multipass: {
        if (!c.multipass) throw std::logic_error("multipass automaton was not built");
        auto tr = match_forward(*c.multipass, input);
        if (stats) stats->transitions += input.size();
        if (!tr) return r;
        if (repr == Repr::Offsets) {
            r.offsets = extract_offsets(*c.multipass, *tr);
            r.lists = singletons(r.offsets);
        } else if (repr == Repr::Lists) {
            r.lists = extract_offset_lists(*c.multipass, *tr);
            r.offsets = last_elements(r.lists);
        } else {
            r.tstring = extract_tstring(*c.multipass, input, *tr);
        }
        break;
    }
    }
    r.kind = MatchResult::Kind::Match;
    r.end = static_cast<Offset>(input.size());
    restore_tags(c, r);
    return r;
}

std::string format_offsets(const TagValues& v) {
    std::string s;
    for (std::size_t t = 0; t < v.size(); ++t) {
        if (t) s += ' ';
        s += 't' + std::to_string(t + 1) + '=' + (v[t] == kNil ? std::string("n") : std::to_string(v[t]));
    }
    return s;
}

std::string format_lists(const TagLists& l) {
    std::string s;
    for (std::size_t t = 0; t < l.size(); ++t) {
        if (t) s += ' ';
        s += 't' + std::to_string(t + 1) + "={";
        for (std::size_t k = 0; k < l[t].size(); ++k) {
            if (k) s += ',';
            s += std::to_string(l[t][k]);
        }
        s += '}';
    }
    return s;
}

std::string format_tstring(const TaggedString& x) {
    std::string s;
    for (const TstringItem& item : x) {
        if (!s.empty()) s += ' ';
        if (!item.is_symbol) {
            s += std::to_string(item.value);
            continue;
        }
        const auto c = static_cast<unsigned char>(item.value);
        if (c > 0x20 && c < 0x7f && !(c >= '0' && c <= '9') && c != '-' && c != '\\') {
            s += static_cast<char>(c);
        } else {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\x%02X", c);
            s += buf;
        }
    }
    return s;
}

} // namespace tdfa
