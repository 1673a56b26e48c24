#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "tdfa/regex.hpp"

namespace tdfa {

struct FuzzLimits {
    int max_nodes = 10;
    int max_tags = 6;
    std::string alphabet = "ab";
    int max_bound = 3;
    int max_input = 6;
};

// Random expression with at most max_nodes AST nodes. Tags are numbered
// 1..N left to right, so to_pattern() output re-parses to the same tree.
RegexPtr random_regex(std::mt19937_64& rng, const FuzzLimits& limits);

// All strings over the alphabet up to the given length, shortest first.
std::vector<std::string> all_inputs(const std::string& alphabet, int max_len);

// Deliberate pipeline defects used to check that the harness notices them.
enum class Mutation { None, SkipNormalization, DropBackups };

struct Divergence {
    std::string pattern;
    std::string input;
    std::string check;
    std::string expected;
    std::string actual;
};

struct PatternReport {
    std::size_t checks = 0;
    std::vector<Divergence> divergences;
};

// Cross-checks every engine, representation and optimization level on
// one pattern against TNFA simulation over all inputs.
PatternReport check_pattern(const RegexPtr& re, const FuzzLimits& limits, Mutation mutation = Mutation::None);

struct FuzzOptions {
    std::uint64_t seed = 1;
    int start = 0;
    int count = 1000;
    FuzzLimits limits;
    Mutation mutation = Mutation::None;
};

struct FuzzReport {
    int patterns = 0;
    std::size_t checks = 0;
    std::size_t divergences = 0;
    std::optional<Divergence> first;
    int first_index = -1;
};

// Pattern i is generated from its own generator seeded with (seed, i).
FuzzReport fuzz(const FuzzOptions& opts);
RegexPtr fuzz_pattern(std::uint64_t seed, int index, const FuzzLimits& limits);

} // namespace tdfa
