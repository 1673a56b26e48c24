#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tdfa/common.hpp"
#include "tdfa/regex.hpp"

namespace tdfa {

// Distance with an absorbing "unknown" value: any arithmetic on NaN is NaN.
class Distance {
public:
    constexpr Distance() = default; // NaN
    constexpr explicit Distance(std::int64_t v) : value_(v) {}
    static constexpr Distance nan() { return Distance(); }

    constexpr bool is_nan() const { return !value_.has_value(); }
    constexpr std::int64_t value() const { return *value_; }

    friend constexpr Distance operator+(Distance a, Distance b) {
        return (a.is_nan() || b.is_nan()) ? Distance() : Distance(*a.value_ + *b.value_);
    }
    friend constexpr Distance operator*(std::int64_t n, Distance a) {
        return a.is_nan() ? Distance() : Distance(n * *a.value_);
    }
    // NaN compares unequal to everything, itself included.
    friend constexpr bool operator==(Distance a, Distance b) {
        return !a.is_nan() && !b.is_nan() && *a.value_ == *b.value_;
    }

private:
    std::optional<std::int64_t> value_;
};

inline constexpr Tag kNoBaseTag = -1;

struct TagInfo {
    Tag tag = 0;
    bool multi_valued = false;
    Tag fixed_base = kNoBaseTag; // kRightmostTag, another tag, or none
    std::int64_t fixed_distance = 0;
    int level = 0; // recursion level the tag was visited at

    bool is_fixed() const { return fixed_base != kNoBaseTag; }
};

// Index t-1 describes tag t.
using TagTable = std::vector<TagInfo>;

struct FixedTagsState {
    Tag base;
    Distance dist;  // distance to the base tag
    Distance level; // distance to the start of the current level
};

// Structural recursion that marks tags as fixed on a base tag of the same
// level. `table` must have one entry per tag; `visits` counts recursive
// calls.
FixedTagsState find_fixed_tags(const Regex& e, FixedTagsState in, TagTable& table,
                               std::size_t* visits = nullptr);

enum class MultiValuedPolicy { None, UnderRepetition, All };

// Builds the tag table for an expression: multi-valued flags per policy
// and, when `fix` is set, fixations found from the rightmost pseudo-tag.
TagTable analyze_tags(const Regex& e, MultiValuedPolicy policy, bool fix);

// Fills in fixed tags from their bases. `end` is the value of the
// rightmost pseudo-tag (the match end).
void apply_fixed_tags(TagValues& values, const TagTable& table, Offset end);
void apply_fixed_tags(TagLists& lists, const TagTable& table, Offset end);

// Expression with fixed tags removed and the remaining tags renumbered
// 1..K in increasing order. kept[i] is the original id of new tag i+1.
struct StrippedRegex {
    RegexPtr regex;
    std::vector<Tag> kept;
};
StrippedRegex strip_fixed_tags(const RegexPtr& e, const TagTable& table);

} // namespace tdfa
