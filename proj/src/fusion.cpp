#include "entsparse/fusion.hpp"

#include "entsparse/error.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>
#include <unordered_set>

namespace entsparse {
namespace {

// Queries in order of first appearance across runs.
std::vector<std::string> union_queries(const std::vector<Run>& runs) {
    std::vector<std::string> order;
    std::unordered_set<std::string> seen;
    for (const auto& run : runs) {
        for (const auto& qid : run.query_ids()) {
            if (seen.insert(qid).second) {
                order.push_back(qid);
            }
        }
    }
    return order;
}

}  // namespace

void FusionConfig::validate() const {
    if (rrf_k < 0) {
        throw Error("rrf_k must be >= 0");
    }
    if (depth == 0) {
        throw Error("fusion depth must be >= 1");
    }
}

Run rrf(const std::vector<Run>& runs, const FusionConfig& cfg, const std::string& tag) {
    cfg.validate();
    if (runs.empty()) {
        throw Error("rrf needs at least one run");
    }
    Run fused(tag);
    std::unordered_map<std::string, std::vector<std::size_t>> ranks;
    for (const auto& qid : union_queries(runs)) {
        ranks.clear();
        for (const auto& run : runs) {
            const auto& list = run.ranking(qid);
            const auto limit = std::min(list.size(), cfg.depth);
            for (std::size_t i = 0; i < limit; ++i) {
                ranks[list[i].passage_id].push_back(i + 1);
            }
        }
        std::vector<RunEntry> entries;
        entries.reserve(ranks.size());
        for (auto& [pid, rs] : ranks) {
            std::sort(rs.begin(), rs.end());
            double score = 0.0;
            for (auto r : rs) {
                score += 1.0 / (static_cast<double>(cfg.rrf_k) + static_cast<double>(r));
            }
            entries.push_back({pid, score});
        }
        std::sort(entries.begin(), entries.end(), [](const RunEntry& a, const RunEntry& b) {
            if (a.score != b.score) return a.score > b.score;
            return a.passage_id < b.passage_id;
        });
        if (entries.size() > cfg.depth) {
            entries.resize(cfg.depth);
        }
        fused.set(qid, std::move(entries));
    }
    return fused;
}

Run oracle(const std::vector<Run>& runs, const Qrels& qrels, const std::string& tag,
           std::vector<OracleChoice>* choices) {
    if (runs.empty()) {
        throw Error("oracle needs at least one run");
    }
    auto queries = union_queries(runs);
    {
        std::unordered_set<std::string> present(queries.begin(), queries.end());
        for (const auto& qid : qrels.judged_queries()) {
            if (!present.contains(qid)) {
                queries.push_back(qid);
            }
        }
    }

    Run out(tag);
    for (const auto& qid : queries) {
        constexpr auto none = std::numeric_limits<std::size_t>::max();
        std::size_t chosen = none;
        std::size_t chosen_rank = none;
        std::size_t first_holder = none;
        for (std::size_t r = 0; r < runs.size(); ++r) {
            if (!runs[r].contains(qid)) {
                continue;
            }
            if (first_holder == none) {
                first_holder = r;
            }
            const auto& list = runs[r].ranking(qid);
            for (std::size_t i = 0; i < list.size() && i + 1 < chosen_rank; ++i) {
                if (qrels.is_relevant(qid, list[i].passage_id)) {
                    chosen = r;
                    chosen_rank = i + 1;
                    break;
                }
            }
        }
        if (chosen == none) {
            chosen = first_holder;
            chosen_rank = 0;
        }
        if (chosen == none) {
            out.set(qid, {});
            if (choices) {
                choices->push_back({qid, 0, 0});
            }
            continue;
        }
        out.set(qid, runs[chosen].ranking(qid));
        if (choices) {
            choices->push_back({qid, chosen, chosen_rank});
        }
    }
    return out;
}

}  // namespace entsparse
