#include "entsparse/error.hpp"
#include "entsparse/index.hpp"

#include "bm25_oracle.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace entsparse {
namespace {

using testing::BruteForceBM25;
using testing::TempDir;

std::vector<Passage> toy_corpus() {
    return {{"d0", "the eagles rock band"},          {"d1", "eagles are birds of prey"},
            {"d2", "rock music from los angeles"},   {"d3", "the band played rock and rock"},
            {"d4", "birds birds birds"},             {"d5", "los angeles california"},
            {"d6", ""},                              {"d7", "prey"},
            {"d8", "the the the the the the eagles"}, {"d9", "a band of eagles"}};
}

TEST(BuildIndex, OneWordPassages) {
    auto index = InvertedIndex::build({{"1", "a"}, {"2", "b"}, {"3", "c"}});
    EXPECT_EQ(index.num_docs(), 3u);
    EXPECT_DOUBLE_EQ(index.avgdl(), 1.0);
}

TEST(BuildIndex, EmptyCollection) {
    auto index = InvertedIndex::build({});
    EXPECT_EQ(index.num_docs(), 0u);
    EXPECT_TRUE(search(index, {}, "anything", 10).empty());
}

TEST(BuildIndex, DocumentFrequencies) {
    auto index = InvertedIndex::build({{"1", "a b"}, {"2", "b c"}});
    EXPECT_EQ(index.df("b"), 2u);
    EXPECT_EQ(index.df("a"), 1u);
    EXPECT_EQ(index.df("c"), 1u);
    EXPECT_EQ(index.df("zzz"), 0u);
}

TEST(BuildIndex, DuplicateIdRejected) {
    EXPECT_THROW(InvertedIndex::build({{"1", "a"}, {"1", "b"}}), Error);
}

TEST(BuildIndex, Invariants) {
    auto passages = toy_corpus();
    auto index = InvertedIndex::build(passages);
    double total = 0;
    for (std::uint32_t d = 0; d < index.num_docs(); ++d) {
        EXPECT_EQ(index.doc_length(d), analyze(passages[d].text).size());
        total += index.doc_length(d);
    }
    EXPECT_EQ(index.avgdl(), total / static_cast<double>(index.num_docs()));
    for (const auto& term : {"the", "eagles", "rock", "birds"}) {
        const auto& list = index.postings(term);
        for (std::size_t i = 1; i < list.size(); ++i) EXPECT_LT(list[i - 1].doc, list[i].doc);
    }
    EXPECT_EQ(index.tf("rock", 3), 2u);
    EXPECT_EQ(index.tf("the", 8), 6u);
}

TEST(BM25Score, SingleDocumentClosedForm) {
    auto index = InvertedIndex::build({{"1", "a"}});
    BM25Params p;
    // idf = ln(1 + 0.5 / 1.5); tf part = (k1 + 1) / (1 + k1) = 1
    EXPECT_NEAR(bm25_score(index, p, {"a"}, 0), std::log(4.0 / 3.0), 1e-15);
    EXPECT_NEAR(bm25_score(index, p, {"a"}, 0), 0.28768207245178085, 1e-15);
}

TEST(BM25Score, AbsentTermContributesZero) {
    auto index = InvertedIndex::build(toy_corpus());
    EXPECT_EQ(bm25_score(index, {}, {"birds"}, 0), 0.0);
    EXPECT_EQ(bm25_score(index, {}, {"unknown"}, 0), 0.0);
    EXPECT_EQ(bm25_score(index, {}, {"eagles", "birds"}, 0), bm25_score(index, {}, {"eagles"}, 0));
    EXPECT_THROW(bm25_score(index, {}, {"eagles"}, 99), Error);
}

TEST(BM25Score, RepeatedQueryTermCountsTwice) {
    auto index = InvertedIndex::build(toy_corpus());
    double once = bm25_score(index, {}, {"eagles"}, 1);
    EXPECT_DOUBLE_EQ(bm25_score(index, {}, {"eagles", "eagles"}, 1), 2 * once);
    auto hits = search(index, {}, "eagles eagles", 10);
    ASSERT_FALSE(hits.empty());
    EXPECT_DOUBLE_EQ(hits[0].score, 2 * search(index, {}, "eagles", 10)[0].score);
}

TEST(BM25Params, Validation) {
    EXPECT_THROW((BM25Params{-0.1, 0.5}).validate(), Error);
    EXPECT_THROW((BM25Params{1.0, 1.5}).validate(), Error);
    EXPECT_NO_THROW((BM25Params{0.0, 0.0}).validate());
}

TEST(Search, NoIndexedTerms) {
    auto index = InvertedIndex::build(toy_corpus());
    EXPECT_TRUE(search(index, {}, "zebra unicorn", 1000).empty());
    EXPECT_TRUE(search(index, {}, "", 1000).empty());
    EXPECT_THROW(search(index, {}, "eagles", 0), Error);
}

TEST(Search, KLargerThanCorpus) {
    auto index = InvertedIndex::build(toy_corpus());
    auto hits = search(index, {}, "eagles", 1000);
    EXPECT_EQ(hits.size(), 4u);  // d0, d1, d8, d9
}

TEST(Search, KTruncates) {
    auto index = InvertedIndex::build(toy_corpus());
    auto all = search(index, {}, "the rock eagles", 1000);
    auto top2 = search(index, {}, "the rock eagles", 2);
    ASSERT_EQ(top2.size(), 2u);
    EXPECT_EQ(top2[0].passage_id, all[0].passage_id);
    EXPECT_EQ(top2[1].passage_id, all[1].passage_id);
}

TEST(Search, MatchesBruteForceOnToyCorpus) {
    auto passages = toy_corpus();
    auto index = InvertedIndex::build(passages);
    BruteForceBM25 oracle(passages, 0.82, 0.68);
    for (const auto& q : {"eagles", "rock band", "the birds of prey", "los angeles rock", "the the", "a"}) {
        auto hits = search(index, {}, q, 1000);
        auto expected = oracle.rank(q);
        ASSERT_EQ(hits.size(), expected.size()) << q;
        for (std::size_t i = 0; i < hits.size(); ++i) {
            EXPECT_EQ(hits[i].passage_id, expected[i].first) << q;
            EXPECT_EQ(hits[i].score, expected[i].second) << q;
            EXPECT_EQ(hits[i].rank, i + 1);
        }
    }
}

TEST(Search, TiesBreakByPassageId) {
    auto index = InvertedIndex::build({{"z", "same text"}, {"a", "same text"}, {"m", "same text"}});
    auto hits = search(index, {}, "text", 10);
    ASSERT_EQ(hits.size(), 3u);
    EXPECT_EQ(hits[0].passage_id, "a");
    EXPECT_EQ(hits[1].passage_id, "m");
    EXPECT_EQ(hits[2].passage_id, "z");
}

TEST(SearchProperty, RandomCorporaMatchBruteForce) {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<Passage> passages;
        auto n = std::uniform_int_distribution<int>(1, 200)(rng);
        for (int i = 0; i < n; ++i) {
            passages.push_back({"p" + std::to_string(i), testing::random_text(rng, 0, 25, 40)});
        }
        BM25Params params{std::uniform_real_distribution<double>(0.0, 2.0)(rng),
                          std::uniform_real_distribution<double>(0.0, 1.0)(rng)};
        auto index = InvertedIndex::build(passages);
        BruteForceBM25 oracle(passages, params.k1, params.b);
        for (int q = 0; q < 5; ++q) {
            auto query = testing::random_text(rng, 1, 5, 45);
            auto hits = search(index, params, query, passages.size());
            auto expected = oracle.rank(query);
            ASSERT_EQ(hits.size(), expected.size());
            for (std::size_t i = 0; i < hits.size(); ++i) {
                ASSERT_EQ(hits[i].passage_id, expected[i].first);
                ASSERT_GE(hits[i].score, 0.0);
                if (i > 0) ASSERT_GE(hits[i - 1].score, hits[i].score);
            }
        }
    }
}

TEST(SearchProperty, TermFrequencyMonotonicity) {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Passage> passages;
        for (int i = 0; i < 8; ++i) passages.push_back({"p" + std::to_string(i), testing::random_text(rng, 1, 12, 10)});
        const std::string term = "w" + std::to_string(std::uniform_int_distribution<int>(0, 9)(rng));
        BM25Params params{std::uniform_real_distribution<double>(0.0, 2.0)(rng),
                          std::uniform_real_distribution<double>(0.0, 1.0)(rng)};
        double before = bm25_score(InvertedIndex::build(passages), params, {term}, 0);
        passages[0].text += " " + term;
        double after = bm25_score(InvertedIndex::build(passages), params, {term}, 0);
        EXPECT_GE(after, before) << "k1=" << params.k1 << " b=" << params.b;
    }
}

TEST(IndexIo, SaveLoadRoundTrip) {
    TempDir dir;
    auto passages = toy_corpus();
    AnalyzerConfig cfg{.stem = true, .fold_accents = true, .stopwords = {"of"}};
    auto index = InvertedIndex::build(passages, cfg);
    index.save(dir / "idx");
    auto loaded = InvertedIndex::load(dir / "idx");
    EXPECT_EQ(loaded.num_docs(), index.num_docs());
    EXPECT_EQ(loaded.num_terms(), index.num_terms());
    EXPECT_EQ(loaded.avgdl(), index.avgdl());
    EXPECT_EQ(loaded.analyzer().config(), cfg);
    for (const auto& q : {"eagles", "birds of prey", "rocking bands"}) {
        auto a = search(index, {}, q, 5);
        auto b = search(loaded, {}, q, 5);
        ASSERT_EQ(a.size(), b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            EXPECT_EQ(a[i].passage_id, b[i].passage_id);
            EXPECT_EQ(a[i].score, b[i].score);
        }
    }
    // saving twice yields identical bytes
    loaded.save(dir / "idx2");
    EXPECT_EQ(testing::read_file(dir / "idx" / "index.bin"), testing::read_file(dir / "idx2" / "index.bin"));
}

TEST(IndexIo, RejectsForeignAndTruncatedFiles) {
    TempDir dir;
    std::filesystem::create_directories(dir / "bad");
    testing::write_file(dir / "bad" / "index.bin", "not an index at all");
    EXPECT_THROW(InvertedIndex::load(dir / "bad"), Error);
    InvertedIndex::build(toy_corpus()).save(dir / "ok");
    auto bytes = testing::read_file(dir / "ok" / "index.bin");
    testing::write_file(dir / "ok" / "index.bin", bytes.substr(0, bytes.size() / 2));
    EXPECT_THROW(InvertedIndex::load(dir / "ok"), Error);
    EXPECT_THROW(InvertedIndex::load(dir / "missing"), Error);
}

TEST(BatchSearch, OneEntryPerQuery) {
    auto index = InvertedIndex::build(toy_corpus());
    auto run = batch_search(index, {}, {{"q1", "eagles"}, {"q2", "rock"}}, 1000, "bm25");
    EXPECT_EQ(run.size(), 2u);
    EXPECT_EQ(run.tag(), "bm25");
    EXPECT_EQ(run.query_ids(), (std::vector<std::string>{"q1", "q2"}));
    EXPECT_TRUE(batch_search(index, {}, {}, 1000, "bm25").empty());
}

TEST(BatchSearch, IndependentOfThreadCount) {
    std::mt19937_64 rng(77);
    std::vector<Passage> passages;
    for (int i = 0; i < 300; ++i) passages.push_back({std::to_string(i), testing::random_text(rng, 3, 30, 60)});
    std::vector<Query> queries;
    for (int i = 0; i < 64; ++i) queries.push_back({"q" + std::to_string(i), testing::random_text(rng, 1, 6, 60)});
    auto index = InvertedIndex::build(passages);
    auto serial = batch_search(index, {}, queries, 50, "t", 1);
    for (unsigned threads : {2u, 4u, 8u, 0u}) {
        EXPECT_EQ(batch_search(index, {}, queries, 50, "t", threads), serial);
    }
}

}  // namespace
}  // namespace entsparse
