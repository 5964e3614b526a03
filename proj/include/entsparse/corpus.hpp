#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

namespace entsparse {

struct Passage {
    std::string id;
    std::string text;

    bool operator==(const Passage&) const = default;
};

struct Query {
    std::string id;
    std::string text;

    bool operator==(const Query&) const = default;
};

/// Relevance judgments. Grades > 0 count as relevant; repeated (qid, pid)
/// pairs keep the maximum grade.
class Qrels {
public:
    void add(const std::string& qid, const std::string& pid, int grade);

    /// Grade of (qid, pid), or 0 when unjudged.
    int grade(const std::string& qid, const std::string& pid) const;
    bool is_relevant(const std::string& qid, const std::string& pid) const { return grade(qid, pid) > 0; }

    /// Relevant passage ids of a query, sorted.
    std::vector<std::string> relevant(const std::string& qid) const;

    /// Queries with at least one relevant passage, sorted.
    std::vector<std::string> judged_queries() const;

    const std::map<std::string, std::map<std::string, int>>& judgments() const noexcept { return judgments_; }
    std::size_t size() const noexcept { return judgments_.size(); }
    bool empty() const noexcept { return judgments_.empty(); }

private:
    std::map<std::string, std::map<std::string, int>> judgments_;
};

/// Streams `id<TAB>text` records in file order.
class TsvReader {
public:
    explicit TsvReader(const std::filesystem::path& path);

    /// Next record, or nullopt at end of file. Throws ParseError on a
    /// malformed line or a repeated id.
    std::optional<Passage> next();

private:
    std::filesystem::path path_;
    std::ifstream in_;
    std::size_t line_no_ = 0;
    std::unordered_set<std::string> seen_;
};

std::vector<Passage> load_collection(const std::filesystem::path& path);
std::vector<Query> load_queries(const std::filesystem::path& path);
Qrels load_qrels(const std::filesystem::path& path);

void write_collection(const std::vector<Passage>& passages, const std::filesystem::path& path);
void write_queries(const std::vector<Query>& queries, const std::filesystem::path& path);

}  // namespace entsparse
