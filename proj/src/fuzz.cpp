#include "tdfa/fuzz.hpp"

#include <map>

#include "tdfa/engine.hpp"

namespace tdfa {

namespace {

class Generator {
public:
    Generator(std::mt19937_64& rng, const FuzzLimits& limits) : rng_(rng), limits_(limits) {}

    RegexPtr make() { return node(pick((limits_.max_nodes + 1) / 2, limits_.max_nodes)); }

private:
    int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    RegexPtr leaf() {
        const int r = pick(0, 9);
        if (r >= 6 && r < 9 && tags_ < limits_.max_tags) return Regex::tagged(++tags_);
        if (r == 9) return Regex::empty();
        const auto& a = limits_.alphabet;
        return Regex::sym(static_cast<std::uint8_t>(a[static_cast<std::size_t>(pick(0, static_cast<int>(a.size()) - 1))]));
    }

    RegexPtr repeat(int size) {
        const int lo = pick(0, limits_.max_bound);
        int hi = pick(lo, limits_.max_bound + 1);
        if (hi > limits_.max_bound) hi = kInfinity;
        if (lo == 0 && hi == 0) hi = 1;
        return Regex::rep(node(size), lo, hi);
    }

    // exactly `size` nodes, children generated left to right
    RegexPtr node(int size) {
        if (size == 1) return leaf();
        if (size == 2) return repeat(1);
        const int r = pick(0, 19);
        if (r < 7) return repeat(size - 1);
        const int left = pick(1, size - 2);
        RegexPtr l = node(left);
        RegexPtr rt = node(size - 1 - left);
        return r < 12 ? Regex::alt(std::move(l), std::move(rt)) : Regex::cat(std::move(l), std::move(rt));
    }

    std::mt19937_64& rng_;
    const FuzzLimits& limits_;
    int tags_ = 0;
};

RegexPtr untag(const RegexPtr& e) {
    switch (e->kind) {
    case Regex::Kind::Tag: return Regex::empty();
    case Regex::Kind::Alt: return Regex::alt(untag(e->left), untag(e->right));
    case Regex::Kind::Cat: return Regex::cat(untag(e->left), untag(e->right));
    case Regex::Kind::Rep: return Regex::rep(untag(e->left), e->lo, e->hi);
    default: return e;
    }
}

std::string show(const MatchResult& r, Repr repr) {
    if (!r.matched()) return "nomatch";
    std::string s = r.kind == MatchResult::Kind::PrefixMatch ? "prefix " + std::to_string(r.end) + " " : "";
    switch (repr) {
    case Repr::Offsets: return s + format_offsets(r.offsets);
    case Repr::Lists: return s + format_lists(r.lists);
    case Repr::Tstring: return s + format_tstring(r.tstring);
    }
    return s;
}

// Oracle results for one input, from simulation of the full TNFA.
struct Expected {
    MatchResult offsets;
    MatchResult lists;
    MatchResult tstring;
};

Expected oracle(const Tnfa& nfa, const std::string& input) {
    Expected x;
    auto tr = simulate_trace(nfa, input);
    auto v = simulate(nfa, input);
    if (!v) return x;
    const Offset end = static_cast<Offset>(input.size());
    x.offsets.kind = x.lists.kind = x.tstring.kind = MatchResult::Kind::Match;
    x.offsets.end = x.lists.end = x.tstring.end = end;
    x.offsets.offsets = *v;
    if (tr) {
        x.lists.lists = trace_lists(*tr, nfa.ntags);
        x.tstring.tstring = trace_tstring(*tr, input);
    }
    return x;
}

class Checker {
public:
    Checker(std::string pattern, PatternReport& out) : pattern_(std::move(pattern)), out_(out) {}

    void expect(const std::string& check, const std::string& input, const MatchResult& want, const MatchResult& got,
                Repr repr) {
        ++out_.checks;
        const std::string a = show(want, repr);
        const std::string b = show(got, repr);
        if (a != b) out_.divergences.push_back({pattern_, input, check, a, b});
    }

    void fail(const std::string& check, const std::string& expected, const std::string& actual) {
        ++out_.checks;
        out_.divergences.push_back({pattern_, "", check, expected, actual});
    }

    void ok() { ++out_.checks; }

private:
    std::string pattern_;
    PatternReport& out_;
};

// Register automata built step by step so that mutations can be injected.
struct Pipeline {
    Tdfa raw;
    Tdfa optimized;
    Tdfa minimized;
};

Pipeline build_pipeline(const Tnfa& nfa, const std::vector<bool>& multi, Mutation mutation) {
    Pipeline p;
    p.raw = determinize(nfa, multi);
    if (mutation == Mutation::DropBackups) {
        const FallbackInfo fb = find_fallback_states(p.raw);
        for (std::size_t s = 0; s < p.raw.states.size(); ++s) {
            if (!fb.fallback[s]) continue;
            p.raw.states[s].fallback = true;
            p.raw.states[s].fallback_ops = p.raw.states[s].final_ops;
        }
    } else {
        add_fallback_regops(p.raw);
    }
    p.optimized = p.raw;
    OptimizeOptions opts;
    opts.skip_normalization = mutation == Mutation::SkipNormalization;
    optimize(p.optimized, opts);
    p.minimized = minimize(p.optimized);
    return p;
}

bool normalized(const Tdfa& dfa) {
    const RegCfg g = build_cfg(dfa);
    RegCfg h = g;
    normalization(h);
    for (std::size_t b = 0; b < g.blocks.size(); ++b) {
        if (g.blocks[b].ops != h.blocks[b].ops) return false;
    }
    return true;
}

} // namespace

RegexPtr random_regex(std::mt19937_64& rng, const FuzzLimits& limits) { return Generator(rng, limits).make(); }

std::vector<std::string> all_inputs(const std::string& alphabet, int max_len) {
    std::vector<std::string> out{""};
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (static_cast<int>(out[i].size()) == max_len) continue;
        for (char c : alphabet) out.push_back(out[i] + c);
    }
    return out;
}

PatternReport check_pattern(const RegexPtr& re, const FuzzLimits& limits, Mutation mutation) {
    PatternReport report;
    Checker check(to_pattern(*re), report);
    const auto inputs = all_inputs(limits.alphabet, limits.max_input);

    const Tnfa nfa = build_tnfa(*re);
    std::map<std::string, Expected> want;
    for (const auto& w : inputs) want.emplace(w, oracle(nfa, w));

    const Pipeline single = build_pipeline(nfa, std::vector<bool>(static_cast<std::size_t>(nfa.ntags), false), mutation);
    const Pipeline multi = build_pipeline(nfa, std::vector<bool>(static_cast<std::size_t>(nfa.ntags), true), mutation);
    if (normalized(single.optimized)) {
        check.ok();
    } else {
        check.fail("normalization fixpoint", "normalized", "not normalized");
    }

    Options fixed_opts;
    fixed_opts.all_engines = true;
    fixed_opts.fixed_tags = true;
    const Compiled fixed = compile(re, fixed_opts);
    fixed_opts.multi = MultiValuedPolicy::UnderRepetition;
    const Compiled fixed_lists = compile(re, fixed_opts);
    const MultipassTdfa mp = determinize_multipass(nfa);

    for (const auto& w : inputs) {
        const Expected& x = want.at(w);
        check.expect("tdfa raw offsets", w, x.offsets, exec(single.raw, w), Repr::Offsets);
        check.expect("tdfa optimized offsets", w, x.offsets, exec(single.optimized, w), Repr::Offsets);
        check.expect("tdfa minimized offsets", w, x.offsets, exec(single.minimized, w), Repr::Offsets);
        check.expect("tdfa raw lists", w, x.lists, exec(multi.raw, w), Repr::Lists);
        check.expect("tdfa optimized lists", w, x.lists, exec(multi.optimized, w), Repr::Lists);
        check.expect("tdfa minimized lists", w, x.lists, exec(multi.minimized, w), Repr::Lists);

        check.expect("fixed tags raw offsets", w, x.offsets, match_tdfa(fixed, *fixed.raw, w, MatchMode::Full),
                     Repr::Offsets);
        check.expect("fixed tags minimized offsets", w, x.offsets,
                     match_tdfa(fixed, *fixed.minimized, w, MatchMode::Full), Repr::Offsets);
        check.expect("fixed tags minimized lists", w, x.lists,
                     match_tdfa(fixed_lists, *fixed_lists.minimized, w, MatchMode::Full), Repr::Lists);

        MatchResult got;
        if (auto tr = match_forward(mp, w)) {
            got.kind = MatchResult::Kind::Match;
            got.end = static_cast<Offset>(w.size());
            got.offsets = extract_offsets(mp, *tr);
            got.lists = extract_offset_lists(mp, *tr);
            got.tstring = extract_tstring(mp, w, *tr);
        }
        check.expect("multipass offsets", w, x.offsets, got, Repr::Offsets);
        check.expect("multipass lists", w, x.lists, got, Repr::Lists);
        check.expect("multipass tstring", w, x.tstring, got, Repr::Tstring);
        {
            Compiled fx = fixed;
            fx.options.engine = Engine::Multipass;
            check.expect("fixed tags multipass offsets", w, x.offsets, match(fx, w), Repr::Offsets);
        }

        // longest prefix accepted by simulation
        MatchResult lp;
        for (std::size_t k = w.size() + 1; k-- > 0;) {
            const Expected& y = want.at(w.substr(0, k));
            if (!y.offsets.matched()) continue;
            lp = y.offsets;
            lp.kind = MatchResult::Kind::PrefixMatch;
            break;
        }
        check.expect("longest prefix raw", w, lp, exec(single.raw, w, MatchMode::LongestPrefix), Repr::Offsets);
        check.expect("longest prefix minimized", w, lp, exec(single.minimized, w, MatchMode::LongestPrefix),
                     Repr::Offsets);
    }

    // full parsing of the same expression without its tags
    Options fp;
    fp.all_engines = true;
    fp.full_parsing = true;
    fp.multi = MultiValuedPolicy::UnderRepetition;
    const Compiled full = compile(untag(re), fp);
    const Tnfa flat = build_tnfa(*full.regex);
    for (const auto& w : inputs) {
        const Expected x = oracle(flat, w);
        Compiled c = full;
        c.options.engine = Engine::Multipass;
        check.expect("full parsing multipass lists", w, x.lists, match(c, w, MatchMode::Full, Repr::Lists),
                     Repr::Lists);
        check.expect("full parsing multipass tstring", w, x.tstring, match(c, w, MatchMode::Full, Repr::Tstring),
                     Repr::Tstring);
        c.options.engine = Engine::Tdfa;
        check.expect("full parsing tdfa lists", w, x.lists, match(c, w, MatchMode::Full, Repr::Lists), Repr::Lists);
    }
    return report;
}

RegexPtr fuzz_pattern(std::uint64_t seed, int index, const FuzzLimits& limits) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index)};
    std::mt19937_64 rng(seq);
    return random_regex(rng, limits);
}

FuzzReport fuzz(const FuzzOptions& opts) {
    FuzzReport r;
    for (int i = opts.start; i < opts.start + opts.count; ++i) {
        const RegexPtr re = fuzz_pattern(opts.seed, i, opts.limits);
        const PatternReport p = check_pattern(re, opts.limits, opts.mutation);
        ++r.patterns;
        r.checks += p.checks;
        r.divergences += p.divergences.size();
        if (!r.first && !p.divergences.empty()) {
            r.first = p.divergences.front();
            r.first_index = i;
        }
    }
    return r;
}

} // namespace tdfa
