#include "entsparse/config.hpp"
#include "entsparse/error.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

namespace entsparse {
namespace {

TEST(PipelineConfig, Defaults) {
    PipelineConfig cfg;
    EXPECT_EQ(cfg.window.window_tokens, 128);
    EXPECT_EQ(cfg.window.overlap_tokens, 42);
    EXPECT_DOUBLE_EQ(cfg.linker.threshold, 4.5);
    EXPECT_DOUBLE_EQ(cfg.bm25.k1, 0.82);
    EXPECT_DOUBLE_EQ(cfg.bm25.b, 0.68);
    EXPECT_EQ(cfg.k, 1000u);
    EXPECT_EQ(cfg.fusion.rrf_k, 60);
    EXPECT_EQ(cfg.fusion.depth, 1000u);
    EXPECT_EQ(cfg.cutoffs, (std::vector<std::size_t>{10, 20, 50, 100, 200, 500, 1000}));
    EXPECT_EQ(cfg.strategy.to_string(), "explicit");
    EXPECT_NO_THROW(cfg.validate());
}

TEST(PipelineConfig, JsonRoundTrip) {
    PipelineConfig cfg;
    cfg.window.window_tokens = 64;
    cfg.window.overlap_tokens = 16;
    cfg.linker.threshold = 3.25;
    cfg.strategy = ExpansionStrategy::explicit_constant(3);
    cfg.bm25 = BM25Params{1.2, 0.75};
    cfg.k = 50;
    cfg.fusion.rrf_k = 10;
    cfg.cutoffs = {5, 50};
    cfg.hard = HardSetSpec{0.25, 2};
    cfg.analyzer.stem = false;
    cfg.analyzer.stopwords = {"the", "a"};
    auto back = PipelineConfig::from_json(cfg.to_json());
    EXPECT_EQ(back.to_json(), cfg.to_json());
    EXPECT_EQ(back.strategy.to_string(), "constant:3");
    EXPECT_EQ(back.analyzer, cfg.analyzer);
}

TEST(PipelineConfig, PartialJsonKeepsDefaults) {
    auto cfg = PipelineConfig::from_json(R"j({"bm25": {"k1": 0.9}, "strategy": "hashed"})j");
    EXPECT_DOUBLE_EQ(cfg.bm25.k1, 0.9);
    EXPECT_DOUBLE_EQ(cfg.bm25.b, 0.68);
    EXPECT_EQ(cfg.strategy.to_string(), "hashed");
    EXPECT_EQ(cfg.window.window_tokens, 128);
}

TEST(PipelineConfig, RejectsBadInput) {
    EXPECT_THROW(PipelineConfig::from_json(R"j({"bm25": {"k3": 1}})j"), Error);
    EXPECT_THROW(PipelineConfig::from_json(R"j({"speed": 1})j"), Error);
    EXPECT_THROW(PipelineConfig::from_json(R"j({"window": {"window_tokens": 10, "overlap_tokens": 10}})j"), Error);
    EXPECT_THROW(PipelineConfig::from_json(R"j({"bm25": {"b": 1.5}})j"), Error);
    EXPECT_THROW(PipelineConfig::from_json(R"j({"cutoffs": [100, 10]})j"), Error);
    EXPECT_THROW(PipelineConfig::from_json(R"j({"strategy": "sometimes"})j"), Error);
    EXPECT_THROW(PipelineConfig::from_json(R"j({"k": "many"})j"), Error);
    EXPECT_THROW(PipelineConfig::from_json("[1, 2]"), Error);
    EXPECT_THROW(PipelineConfig::from_json("{"), Error);
}

TEST(PipelineConfig, SaveAndLoad) {
    testing::TempDir dir;
    PipelineConfig cfg;
    cfg.k = 7;
    cfg.save(dir / "c.json");
    EXPECT_EQ(PipelineConfig::load(dir / "c.json").k, 7u);
    EXPECT_THROW(PipelineConfig::load(dir / "missing.json"), Error);
    testing::write_file(dir / "bad.json", R"j({"k": 0})j");
    try {
        PipelineConfig::load(dir / "bad.json");
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("bad.json"), std::string::npos);
    }
}

}  // namespace
}  // namespace entsparse
