#include "entsparse/analyzer.hpp"
#include "entsparse/error.hpp"
#include "entsparse/expansion.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <regex>

namespace entsparse {
namespace {

// Digests computed with Python's hashlib.md5.
const std::vector<std::pair<std::string, std::string>> md5_fixtures = {
    {"Eagles (band)", "457e38cd8f6a6c4145a2038dc309f9e8"},
    {"Glenn Frey", "4971ffb62e1dce8405b2feab585e8edf"},
    {"Don Henley", "a39e2ecea5fa96a9738c2d1eb39b9aa3"},
    {"Randy Meisner", "c38e79aebf6c47eb74c9e6f9b2d457ab"},
    {"Bernie Leadon", "3ca3f4b037e95379327e0c8385b48aff"},
    {"Los Angeles", "d0aa2dffa0da83f1f34681308d04db5d"},
    {"California", "356779a9a1696714480f57fa3fb66d4c"},
    {"Zürich", "103a821a3a6a0b923c9f74a39662bb51"},
};

const EntityCounts eagles_entities = {{"Eagles (band)", 2}, {"Glenn Frey", 1}, {"Don Henley", 1},
                                      {"Bernie Leadon", 1}, {"Randy Meisner", 1}, {"Los Angeles", 1},
                                      {"California", 1}};

TEST(HashEntity, MatchesReferenceDigests) {
    for (const auto& [name, digest] : md5_fixtures) {
        EXPECT_EQ(hash_entity(name), digest) << name;
    }
}

TEST(HashEntity, EmptyNameRejected) { EXPECT_THROW(hash_entity(""), Error); }

TEST(HashEntity, Deterministic) { EXPECT_EQ(hash_entity("Eagles (band)"), hash_entity("Eagles (band)")); }

TEST(Expand, ExplicitSingleQueryExample) {
    auto e = expand("who are in the eagles", {{"Eagles (band)", 1}}, ExpansionStrategy::explicit_single());
    EXPECT_EQ(e.full_text, "who are in the eagles Eagles (band)");
    EXPECT_EQ(e.appended_terms, std::vector<std::string>{"Eagles (band)"});
    EXPECT_EQ(e.original, "who are in the eagles");
}

TEST(Expand, EmptyEntitySetIsIdentity) {
    for (auto s : {ExpansionStrategy::none(), ExpansionStrategy::explicit_single(), ExpansionStrategy::hashed_single(),
                   ExpansionStrategy::explicit_constant(3), ExpansionStrategy::explicit_weighted()}) {
        auto e = expand("some text", {}, s);
        EXPECT_EQ(e.full_text, "some text");
        EXPECT_TRUE(e.appended_terms.empty());
    }
}

TEST(Expand, Weighted) {
    auto e = expand("x", {{"Eagles (band)", 3}}, ExpansionStrategy::explicit_weighted());
    EXPECT_EQ(e.full_text, "x Eagles (band) Eagles (band) Eagles (band)");
}

TEST(Expand, ConstantAndHashed) {
    EntityCounts ents = {{"A b", 2}, {"C", 1}};
    EXPECT_EQ(expand("t", ents, ExpansionStrategy::explicit_constant(3)).full_text, "t A b A b A b C C C");
    EXPECT_EQ(expand("t", {{"Eagles (band)", 4}}, ExpansionStrategy::hashed_single()).full_text,
              "t 457e38cd8f6a6c4145a2038dc309f9e8");
    EXPECT_EQ(expand("t", ents, ExpansionStrategy::none()).full_text, "t");
}

TEST(Expand, NonPositiveCountRejected) {
    EXPECT_THROW(expand("t", {{"A", 0}}, ExpansionStrategy::explicit_single()), Error);
}

TEST(ExpansionStrategy, ParseFlags) {
    EXPECT_EQ(ExpansionStrategy::parse("none"), ExpansionStrategy::none());
    EXPECT_EQ(ExpansionStrategy::parse("explicit"), ExpansionStrategy::explicit_single());
    EXPECT_EQ(ExpansionStrategy::parse("hashed"), ExpansionStrategy::hashed_single());
    EXPECT_EQ(ExpansionStrategy::parse("weighted"), ExpansionStrategy::explicit_weighted());
    EXPECT_EQ(ExpansionStrategy::parse("constant:5"), ExpansionStrategy::explicit_constant(5));
    EXPECT_EQ(ExpansionStrategy::parse("constant:5").to_string(), "constant:5");
    EXPECT_THROW(ExpansionStrategy::parse("constant:0"), Error);
    EXPECT_THROW(ExpansionStrategy::parse("constant:"), Error);
    EXPECT_THROW(ExpansionStrategy::parse("bogus"), Error);
}

TEST(ExpandCollection, EaglesPassageExplicit) {
    std::vector<Passage> passages = {{"p1", "Who are the original members of The Eagles rock band?"}, {"p2", "other"}};
    AnnotationMap ann;
    std::size_t pos = 0;
    for (const auto& [name, count] : eagles_entities) {
        for (int c = 0; c < count; ++c, pos += 10) {
            ann["p1"].push_back({name, pos, pos + 5, name, 6.0});
        }
    }
    auto out = expand_collection(passages, ann, ExpansionStrategy::explicit_single());
    ASSERT_EQ(out.passages.size(), 2u);
    EXPECT_EQ(out.passages[0].text,
              "Who are the original members of The Eagles rock band? Eagles (band) Glenn Frey Don Henley Bernie "
              "Leadon Randy Meisner Los Angeles California");
    EXPECT_EQ(out.passages[1], passages[1]);
    EXPECT_TRUE(out.unknown_ids.empty());

    auto hashed = expand_collection(passages, ann, ExpansionStrategy::hashed_single());
    auto tokens = analyze(hashed.passages[0].text);
    std::vector<std::string> tail(tokens.end() - 7, tokens.end());
    std::set<std::string> distinct(tail.begin(), tail.end());
    EXPECT_EQ(distinct.size(), 7u);
    const std::regex hex32("[0-9a-f]{32}");
    for (const auto& t : tail) EXPECT_TRUE(std::regex_match(t, hex32)) << t;
    EXPECT_EQ(tail.front(), "457e38cd8f6a6c4145a2038dc309f9e8");
}

TEST(ExpandCollection, NoAnnotationsIsIdentityAndUnknownIdsReported) {
    std::vector<Passage> passages = {{"1", "a"}, {"2", "b c"}};
    auto out = expand_collection(passages, {}, ExpansionStrategy::explicit_single());
    EXPECT_EQ(out.passages, passages);
    AnnotationMap ann = {{"99", {{"x", 0, 1, "X", 5.0}}}};
    auto with_unknown = expand_collection(passages, ann, ExpansionStrategy::explicit_single());
    EXPECT_EQ(with_unknown.passages, passages);
    EXPECT_EQ(with_unknown.unknown_ids, std::vector<std::string>{"99"});
}

TEST(CheckHashCollisions, DistinctNamesPass) {
    std::vector<std::string> names;
    for (const auto& [name, digest] : md5_fixtures) names.push_back(name);
    names.push_back("Eagles (band)");  // repeats are not collisions
    EXPECT_NO_THROW(check_hash_collisions(names));
}

// Random entity names built from words, digits and punctuation.
EntityCounts random_entities(std::mt19937_64& rng) {
    static const std::vector<std::string> parts = {"Eagles", "(band)", "Los", "Angeles", "São", "Paulo", "F.C.",
                                                   "1971", "don't", "-", "Über", "x"};
    EntityCounts out;
    std::set<std::string> seen;
    auto n = std::uniform_int_distribution<int>(0, 8)(rng);
    for (int i = 0; i < n; ++i) {
        std::string name;
        for (int w = std::uniform_int_distribution<int>(1, 3)(rng); w > 0; --w) {
            name += (name.empty() ? "" : " ") + parts[std::uniform_int_distribution<std::size_t>(0, parts.size() - 1)(rng)];
        }
        if (seen.insert(name).second) {
            out.emplace_back(name, std::uniform_int_distribution<int>(1, 4)(rng));
        }
    }
    return out;
}

TEST(ExpansionProperty, TokenCountLaw) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 500; ++trial) {
        auto text = testing::random_text(rng, 0, 20);
        auto ents = random_entities(rng);
        const auto base = analyze(text).size();
        std::size_t single = 0;
        std::size_t weighted = 0;
        for (const auto& [name, count] : ents) {
            single += analyze(name).size();
            weighted += static_cast<std::size_t>(count) * analyze(name).size();
        }
        EXPECT_EQ(analyze(expand(text, ents, ExpansionStrategy::explicit_single()).full_text).size(), base + single);
        EXPECT_EQ(analyze(expand(text, ents, ExpansionStrategy::explicit_constant(3)).full_text).size(),
                  base + 3 * single);
        EXPECT_EQ(analyze(expand(text, ents, ExpansionStrategy::explicit_weighted()).full_text).size(),
                  base + weighted);
        EXPECT_EQ(analyze(expand(text, ents, ExpansionStrategy::hashed_single()).full_text).size(),
                  base + ents.size());
        EXPECT_EQ(expand(text, ents, ExpansionStrategy::explicit_constant(1)).full_text,
                  expand(text, ents, ExpansionStrategy::explicit_single()).full_text);
        EXPECT_EQ(expand(text, ents, ExpansionStrategy::none()).full_text, text);
    }
}

}  // namespace
}  // namespace entsparse
