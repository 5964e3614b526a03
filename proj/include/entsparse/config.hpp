#pragma once

#include "entsparse/analyzer.hpp"
#include "entsparse/eval.hpp"
#include "entsparse/expansion.hpp"
#include "entsparse/fusion.hpp"
#include "entsparse/index.hpp"
#include "entsparse/linker.hpp"

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace entsparse {

/// Every tunable of the pipeline. Defaults: window 128 / overlap 42,
/// threshold 4.5, k1 = 0.82, b = 0.68, depth k = 1000, RRF k = 60.
struct PipelineConfig {
    AnalyzerConfig analyzer;
    WindowConfig window;
    LinkerConfig linker;
    ExpansionStrategy strategy = ExpansionStrategy::explicit_single();
    BM25Params bm25;
    std::size_t k = 1000;
    FusionConfig fusion;
    std::vector<std::size_t> cutoffs = {10, 20, 50, 100, 200, 500, 1000};
    HardSetSpec hard;

    void validate() const;

    std::string to_json() const;
    /// Missing keys keep their defaults; unknown keys are rejected.
    static PipelineConfig from_json(const std::string& text);

    static PipelineConfig load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;
};

/// Environment variable naming the default config file.
inline constexpr const char* config_env_var = "ENTSPARSE_CONFIG";

}  // namespace entsparse
