#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

namespace entsparse {

struct RunEntry {
    std::string passage_id;
    double score = 0.0;

    bool operator==(const RunEntry&) const = default;
};

/// Ranked lists per query. Rank is the 1-based list position. Queries keep
/// their insertion order.
class Run {
public:
    Run() = default;
    explicit Run(std::string tag) : tag_(std::move(tag)) {}

    const std::string& tag() const noexcept { return tag_; }
    void set_tag(std::string tag) { tag_ = std::move(tag); }

    /// Replaces (or creates) the ranking of `qid`. Passage ids must be unique
    /// and scores non-increasing.
    void set(const std::string& qid, std::vector<RunEntry> ranking);

    bool contains(const std::string& qid) const { return rankings_.contains(qid); }

    /// Ranking of `qid`; empty if the query is absent.
    const std::vector<RunEntry>& ranking(const std::string& qid) const;

    const std::vector<std::string>& query_ids() const noexcept { return order_; }
    std::size_t size() const noexcept { return order_.size(); }
    bool empty() const noexcept { return order_.empty(); }

    bool operator==(const Run& other) const;

private:
    std::string tag_;
    std::vector<std::string> order_;
    std::unordered_map<std::string, std::vector<RunEntry>> rankings_;
};

/// Reads a TREC run (`qid Q0 pid rank score tag`). Lines of a query are
/// ordered by their rank field. The tag of the first line becomes the run tag.
Run read_run(const std::filesystem::path& path);

/// Writes a TREC run, renumbering ranks 1..n from list order. Scores are
/// printed with 6 significant digits.
void write_run(const Run& run, const std::filesystem::path& path);

}  // namespace entsparse
