#pragma once

#include "entsparse/analyzer.hpp"
#include "entsparse/corpus.hpp"
#include "entsparse/run.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace entsparse {

struct BM25Params {
    double k1 = 0.82;
    double b = 0.68;

    void validate() const;
};

struct Posting {
    std::uint32_t doc = 0;
    std::uint32_t tf = 0;

    bool operator==(const Posting&) const = default;
};

struct ScoredHit {
    std::string passage_id;
    double score = 0.0;
    std::size_t rank = 0;
};

/// Document-ordered inverted index with per-document lengths. Immutable once
/// built; concurrent searches are safe.
class InvertedIndex {
public:
    static constexpr std::uint32_t format_version = 1;

    InvertedIndex() = default;

    static InvertedIndex build(const std::vector<Passage>& passages, const AnalyzerConfig& analyzer = {});

    std::size_t num_docs() const noexcept { return doc_ids_.size(); }
    double avgdl() const noexcept { return avgdl_; }
    std::uint32_t doc_length(std::uint32_t doc) const { return doc_lengths_.at(doc); }
    const std::string& doc_id(std::uint32_t doc) const { return doc_ids_.at(doc); }
    std::size_t num_terms() const noexcept { return terms_.size(); }

    /// Postings of `term`, sorted by document ordinal. Empty if unknown.
    const std::vector<Posting>& postings(std::string_view term) const;
    std::size_t df(std::string_view term) const { return postings(term).size(); }
    std::uint32_t tf(std::string_view term, std::uint32_t doc) const;

    const Analyzer& analyzer() const noexcept { return analyzer_; }

    /// Writes `index.bin` under `dir`, creating the directory if needed.
    void save(const std::filesystem::path& dir) const;
    static InvertedIndex load(const std::filesystem::path& dir);

private:
    void finalize();

    Analyzer analyzer_;
    std::vector<std::string> doc_ids_;
    std::vector<std::uint32_t> doc_lengths_;
    std::unordered_map<std::string, std::uint32_t> term_ids_;
    std::vector<std::string> terms_;
    std::vector<std::vector<Posting>> postings_;
    double avgdl_ = 0.0;
};

/// BM25 with the ln(1 + (N - df + 0.5) / (df + 0.5)) IDF. Each query term
/// occurrence contributes one summand.
double bm25_score(const InvertedIndex& index, const BM25Params& params, const std::vector<std::string>& query_terms,
                  std::uint32_t doc);

/// Top-k documents with positive score, ordered by score then ascending
/// passage id.
std::vector<ScoredHit> search(const InvertedIndex& index, const BM25Params& params, std::string_view query,
                              std::size_t k = 1000);

/// Searches every query. `threads` = 0 picks the hardware concurrency; the
/// result does not depend on it.
Run batch_search(const InvertedIndex& index, const BM25Params& params, const std::vector<Query>& queries,
                 std::size_t k, const std::string& tag, unsigned threads = 0);

}  // namespace entsparse
