#pragma once

// Random runs and qrels for fusion and evaluation property tests.

#include "entsparse/corpus.hpp"
#include "entsparse/run.hpp"

#include <algorithm>
#include <random>
#include <string>
#include <vector>

namespace entsparse::testing {

/// Ranking of `depth` distinct passages drawn from a pool of `pool` ids.
inline std::vector<RunEntry> random_ranking(std::mt19937_64& rng, std::size_t pool, std::size_t depth) {
    std::vector<std::size_t> ids(pool);
    for (std::size_t i = 0; i < pool; ++i) ids[i] = i;
    std::shuffle(ids.begin(), ids.end(), rng);
    depth = std::min(depth, pool);
    std::vector<RunEntry> ranking;
    for (std::size_t i = 0; i < depth; ++i) {
        ranking.push_back({"p" + std::to_string(ids[i]), static_cast<double>(depth - i)});
    }
    return ranking;
}

struct RunFixture {
    std::vector<Run> runs;
    Qrels qrels;
};

inline RunFixture random_run_fixture(std::mt19937_64& rng, std::size_t num_runs, std::size_t num_queries,
                                     std::size_t pool, std::size_t depth) {
    RunFixture f;
    for (std::size_t r = 0; r < num_runs; ++r) {
        f.runs.emplace_back("run" + std::to_string(r));
    }
    std::uniform_int_distribution<std::size_t> pick(0, pool - 1);
    std::uniform_int_distribution<int> nrel(1, 3);
    std::uniform_int_distribution<std::size_t> ddist(0, depth);
    std::bernoulli_distribution missing(0.05);
    for (std::size_t q = 0; q < num_queries; ++q) {
        const std::string qid = "q" + std::to_string(q);
        for (int i = nrel(rng); i > 0; --i) {
            f.qrels.add(qid, "p" + std::to_string(pick(rng)), 1);
        }
        for (auto& run : f.runs) {
            if (!missing(rng)) {
                run.set(qid, random_ranking(rng, pool, ddist(rng)));
            }
        }
    }
    return f;
}

}  // namespace entsparse::testing
