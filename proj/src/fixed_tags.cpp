#include "tdfa/fixed_tags.hpp"

#include <functional>

namespace tdfa {

namespace {

FixedTagsState fixed_rec(const Regex& e, FixedTagsState s, int level, TagTable& table,
                         std::size_t& visits) {
    using K = Regex::Kind;
    ++visits;
    switch (e.kind) {
    case K::Empty:
        return s;
    case K::Symbol:
        return {s.base, s.dist + Distance(1), s.level + Distance(1)};
    case K::Alt: {
        const FixedTagsState fresh{kNoBaseTag, Distance::nan(), Distance(0)};
        const Distance k1 = fixed_rec(*e.left, fresh, level + 1, table, visits).level;
        const Distance k2 = fixed_rec(*e.right, fresh, level + 1, table, visits).level;
        if (k1 == k2) return {s.base, s.dist + k1, s.level + k1};
        return {s.base, Distance::nan(), Distance::nan()};
    }
    case K::Cat: {
        const FixedTagsState r = fixed_rec(*e.right, s, level, table, visits);
        return fixed_rec(*e.left, r, level, table, visits);
    }
    case K::Rep: {
        const FixedTagsState fresh{kNoBaseTag, Distance::nan(), Distance(0)};
        const Distance k1 = fixed_rec(*e.left, fresh, level + 1, table, visits).level;
        if (e.lo == e.hi) return {s.base, s.dist + e.lo * k1, s.level + e.lo * k1};
        return {s.base, Distance::nan(), Distance::nan()};
    }
    case K::Tag: {
        TagInfo& info = table.at(static_cast<std::size_t>(e.tag - 1));
        info.level = level;
        if (s.base != kNoBaseTag && !s.dist.is_nan()) {
            info.fixed_base = s.base;
            info.fixed_distance = s.dist.value();
            return s;
        }
        return {e.tag, Distance(0), s.level};
    }
    }
    return s;
}

void mark_multi(const Regex& e, bool under_rep, TagTable& table) {
    using K = Regex::Kind;
    switch (e.kind) {
    case K::Tag: table[e.tag - 1].multi_valued = under_rep; break;
    case K::Alt:
    case K::Cat:
        mark_multi(*e.left, under_rep, table);
        mark_multi(*e.right, under_rep, table);
        break;
    case K::Rep:
        mark_multi(*e.left, under_rep || e.hi == kInfinity || e.hi > 1, table);
        break;
    default: break;
    }
}

Offset fixed_value(Offset base, std::int64_t dist) {
    return base == kNil ? kNil : base - dist;
}

} // namespace

FixedTagsState find_fixed_tags(const Regex& e, FixedTagsState in, TagTable& table,
                               std::size_t* visits) {
    std::size_t count = 0;
    const FixedTagsState out = fixed_rec(e, in, 0, table, count);
    if (visits) *visits = count;
    return out;
}

TagTable analyze_tags(const Regex& e, MultiValuedPolicy policy, bool fix) {
    const int n = max_tag(e);
    TagTable table(static_cast<std::size_t>(n));
    for (int t = 1; t <= n; ++t) table[t - 1].tag = t;
    if (policy == MultiValuedPolicy::UnderRepetition) {
        mark_multi(e, false, table);
    } else if (policy == MultiValuedPolicy::All) {
        for (auto& info : table) info.multi_valued = true;
    }
    if (fix) {
        find_fixed_tags(e, {kRightmostTag, Distance(0), Distance(0)}, table);
    }
    return table;
}

// Bases are never fixed themselves, so one pass in any order suffices.
void apply_fixed_tags(TagValues& values, const TagTable& table, Offset end) {
    for (const TagInfo& info : table) {
        if (!info.is_fixed()) continue;
        const Offset base = info.fixed_base == kRightmostTag ? end : values[info.fixed_base - 1];
        values[info.tag - 1] = fixed_value(base, info.fixed_distance);
    }
}

void apply_fixed_tags(TagLists& lists, const TagTable& table, Offset end) {
    for (const TagInfo& info : table) {
        if (!info.is_fixed()) continue;
        auto& out = lists[info.tag - 1];
        out.clear();
        if (info.fixed_base == kRightmostTag) {
            out.push_back(fixed_value(end, info.fixed_distance));
        } else {
            for (Offset v : lists[info.fixed_base - 1]) {
                out.push_back(fixed_value(v, info.fixed_distance));
            }
        }
    }
}

StrippedRegex strip_fixed_tags(const RegexPtr& e, const TagTable& table) {
    StrippedRegex out;
    std::vector<Tag> renumber(table.size() + 1, 0);
    for (const TagInfo& info : table) {
        if (!info.is_fixed()) {
            out.kept.push_back(info.tag);
            renumber[info.tag] = static_cast<Tag>(out.kept.size());
        }
    }
    std::function<RegexPtr(const RegexPtr&)> rec = [&](const RegexPtr& r) -> RegexPtr {
        using K = Regex::Kind;
        switch (r->kind) {
        case K::Tag:
            return renumber[r->tag] == 0 ? Regex::empty() : Regex::tagged(renumber[r->tag]);
        case K::Alt: return Regex::alt(rec(r->left), rec(r->right));
        case K::Cat: return Regex::cat(rec(r->left), rec(r->right));
        case K::Rep: return Regex::rep(rec(r->left), r->lo, r->hi);
        default: return r;
        }
    };
    out.regex = rec(e);
    return out;
}

} // namespace tdfa
