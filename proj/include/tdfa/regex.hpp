#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "tdfa/common.hpp"

namespace tdfa {

inline constexpr int kInfinity = -1; // upper repetition bound "unbounded"

struct Regex;
using RegexPtr = std::shared_ptr<const Regex>;

// Abstract syntax of tagged regular expressions. Nodes are immutable and
// may be shared between trees.
struct Regex {
    enum class Kind : std::uint8_t { Empty, Symbol, Tag, Alt, Cat, Rep };

    Kind kind = Kind::Empty;
    std::uint8_t symbol = 0; // Symbol
    tdfa::Tag tag = 0;       // Tag
    RegexPtr left;           // Alt, Cat, Rep (body)
    RegexPtr right;          // Alt, Cat
    int lo = 0;              // Rep
    int hi = 0;              // Rep; kInfinity for unbounded

    static RegexPtr empty();
    static RegexPtr sym(std::uint8_t c);
    static RegexPtr tagged(tdfa::Tag t);
    static RegexPtr alt(RegexPtr l, RegexPtr r);
    static RegexPtr cat(RegexPtr l, RegexPtr r);
    static RegexPtr rep(RegexPtr body, int lo, int hi);
};

struct ParseOptions {
    int max_bound = 1000;
};

// Parses the concrete syntax:
//   literals are bytes; operators | * + ? {n} {n,} {n,m}
//   (e)   capturing group, produces an opening and a closing tag
//   (?:e) non-capturing group
//   #     standalone tag
//   \c    escapes one of | ( ) { } * + ? # \ (any escaped byte is literal)
// Tags are numbered 1..N in order of appearance.
RegexPtr parse_regex(std::string_view text, const ParseOptions& opts = {});

// Prints an expression in the concrete syntax above; tags print as '#',
// so re-parsing yields the same tree when tags are numbered left to right.
std::string to_pattern(const Regex& e);

// Surrounds every subexpression with a fresh tag pair. Tags are numbered
// contiguously: opening tag before the subexpression's own tags, closing
// tag after them.
RegexPtr auto_tag(const RegexPtr& e);

// Sorted, deduplicated tag ids occurring in e.
std::vector<Tag> tags_of(const Regex& e);
int max_tag(const Regex& e);
std::size_t node_count(const Regex& e);
bool nullable(const Regex& e);

// Tag-pair nesting as produced by auto_tag: nesting[t-1] lists the tags
// strictly inside the pair that t belongs to (empty for unpaired tags).
using TagNesting = std::vector<std::vector<Tag>>;
TagNesting auto_tag_nesting(const Regex& tagged, int ntags);

std::string to_json(const Regex& e);

} // namespace tdfa
