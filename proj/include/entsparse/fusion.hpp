#pragma once

#include "entsparse/corpus.hpp"
#include "entsparse/run.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace entsparse {

struct FusionConfig {
    int rrf_k = 60;
    std::size_t depth = 1000;

    void validate() const;
};

/// Reciprocal Rank Fusion. A passage scores the sum of 1 / (rrf_k + rank)
/// over the runs that retrieve it within `depth`; summands are added in
/// ascending rank order so the result does not depend on the order of
/// `runs`. Ties go to the smaller passage id.
Run rrf(const std::vector<Run>& runs, const FusionConfig& cfg = {}, const std::string& tag = "rrf");

/// Which run the oracle picked for a query, and the best relevant rank that
/// drove the choice (0 when no run retrieved a relevant passage).
struct OracleChoice {
    std::string qid;
    std::size_t run_index = 0;
    std::size_t best_rank = 0;
};

/// Per query, copies the ranking of the run in which some judged-relevant
/// passage attains the smallest rank. Earlier runs win ties. When no run
/// retrieves a relevant passage the first run holding the query is used.
/// Queries judged in `qrels` but absent from every run get an empty ranking.
Run oracle(const std::vector<Run>& runs, const Qrels& qrels, const std::string& tag = "oracle",
           std::vector<OracleChoice>* choices = nullptr);

}  // namespace entsparse
