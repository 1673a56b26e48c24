#include "doctest.h"
#include "oracles.hpp"
#include "tdfa/fixed_tags.hpp"
#include "tdfa/fuzz.hpp"
#include "tdfa/regex.hpp"
#include "tdfa/tnfa.hpp"

using namespace tdfa;

namespace {

TagTable fixed(const char* p) { return analyze_tags(*parse_regex(p), MultiValuedPolicy::None, true); }

}

TEST_SUITE("fixed_tags") {

TEST_CASE("distance arithmetic absorbs NaN") {
    CHECK((Distance(2) + Distance(3)) == Distance(5));
    CHECK((Distance(2) + Distance::nan()).is_nan());
    CHECK((3 * Distance(2)) == Distance(6));
    CHECK((3 * Distance::nan()).is_nan());
    CHECK_FALSE(Distance::nan() == Distance::nan());
}

TEST_CASE("running example fixes t1 on t2 and t3 on t5") {
    const TagTable t = fixed("(a)*#(?:a|#b)#b*");
    REQUIRE(t.size() == 5);
    CHECK(t[0].fixed_base == 2);
    CHECK(t[0].fixed_distance == 1);
    CHECK(t[2].fixed_base == 5);
    CHECK(t[2].fixed_distance == 1);
    CHECK_FALSE(t[1].is_fixed());
    CHECK_FALSE(t[3].is_fixed());
    CHECK_FALSE(t[4].is_fixed());
}

TEST_CASE("tags at a constant distance from the end are fixed on it") {
    const TagTable t = fixed("a#bc");
    CHECK(t[0].fixed_base == kRightmostTag);
    CHECK(t[0].fixed_distance == 2);
    CHECK_FALSE(fixed("#a*")[0].is_fixed());
    CHECK_FALSE(fixed("#(?:a|bb)")[0].is_fixed());
}

TEST_CASE("without fixing every tag is kept") {
    const auto e = parse_regex("(a)*#(?:a|#b)#b*");
    const TagTable t = analyze_tags(*e, MultiValuedPolicy::None, false);
    for (const auto& info : t) CHECK_FALSE(info.is_fixed());
    CHECK(strip_fixed_tags(e, t).kept == std::vector<Tag>{1, 2, 3, 4, 5});
}

TEST_CASE("bases are never fixed themselves") {
    for (int i = 0; i < 500; ++i) {
        const auto e = fuzz_pattern(3, i, {});
        const TagTable t = analyze_tags(*e, MultiValuedPolicy::None, true);
        for (const auto& info : t) {
            if (info.is_fixed() && info.fixed_base != kRightmostTag) {
                CHECK_FALSE(t[static_cast<std::size_t>(info.fixed_base - 1)].is_fixed());
            }
        }
    }
}

TEST_CASE("multi-valued policy marks tags under repetition") {
    const auto e = parse_regex("(a)*#b");
    const TagTable t = analyze_tags(*e, MultiValuedPolicy::UnderRepetition, false);
    CHECK(t[0].multi_valued);
    CHECK(t[1].multi_valued);
    CHECK_FALSE(t[2].multi_valued);
    const TagTable all = analyze_tags(*e, MultiValuedPolicy::All, false);
    for (const auto& info : all) CHECK(info.multi_valued);
}

TEST_CASE("stripping renumbers the remaining tags") {
    const auto e = parse_regex("(a)*#(?:a|#b)#b*");
    const TagTable t = analyze_tags(*e, MultiValuedPolicy::None, true);
    const StrippedRegex s = strip_fixed_tags(e, t);
    CHECK(s.kept == std::vector<Tag>{2, 4, 5});
    CHECK(tags_of(*s.regex) == std::vector<Tag>{1, 2, 3});
}

TEST_CASE("analysis visits each node once") {
    for (int i = 0; i < 500; ++i) {
        const auto e = fuzz_pattern(5, i, {});
        TagTable t(static_cast<std::size_t>(max_tag(*e)));
        for (std::size_t k = 0; k < t.size(); ++k) t[k].tag = static_cast<Tag>(k + 1);
        std::size_t visits = 0;
        find_fixed_tags(*e, {kRightmostTag, Distance(0), Distance(0)}, t, &visits);
        CHECK(visits == node_count(*e));
    }
}

TEST_CASE("restored fixed tags equal simulation of the full expression") {
    FuzzLimits limits;
    const auto inputs = all_inputs("ab", 6);
    std::size_t with_fixed = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto e = fuzz_pattern(9, i, limits);
        const TagTable t = analyze_tags(*e, MultiValuedPolicy::None, true);
        const StrippedRegex s = strip_fixed_tags(e, t);
        if (s.kept.size() == t.size()) continue;
        ++with_fixed;
        const Tnfa full = build_tnfa(*e);
        const Tnfa reduced = build_tnfa(*s.regex);
        for (const auto& w : inputs) {
            const auto want = simulate_trace(full, w);
            const auto got = simulate(reduced, w);
            REQUIRE(want.has_value() == got.has_value());
            if (!got) continue;
            TagValues v(t.size(), kNil);
            for (std::size_t k = 0; k < s.kept.size(); ++k) v[static_cast<std::size_t>(s.kept[k] - 1)] = (*got)[k];
            apply_fixed_tags(v, t, static_cast<Offset>(w.size()));
            CAPTURE(to_pattern(*e));
            CAPTURE(w);
            CHECK(v == oracle::last_values(*want, full.ntags));
        }
    }
    CHECK(with_fixed > 50);
}

}
