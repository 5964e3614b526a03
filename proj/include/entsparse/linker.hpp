#pragma once

#include "entsparse/analyzer.hpp"

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace entsparse {

/// A linked mention. Offsets are UTF-8 byte offsets into the source text.
struct EntityAnnotation {
    std::string mention;
    std::size_t char_start = 0;
    std::size_t char_end = 0;
    std::string entity_name;
    double score = 0.0;

    bool operator==(const EntityAnnotation&) const = default;
};

struct WindowConfig {
    std::size_t window_tokens = 128;
    std::size_t overlap_tokens = 42;

    /// Tokens between consecutive window starts.
    std::size_t advance() const noexcept { return window_tokens - overlap_tokens; }
    void validate() const;
};

struct LinkerConfig {
    double threshold = 4.5;
    int num_cand_mentions = 10;
    int num_cand_entities = 10;

    void validate() const;
};

/// Half-open token index range [begin, end).
struct TokenRange {
    std::size_t begin = 0;
    std::size_t end = 0;

    bool operator==(const TokenRange&) const = default;
};

/// Half-open byte span [start, end).
struct CharSpan {
    std::size_t start = 0;
    std::size_t end = 0;

    bool operator==(const CharSpan&) const = default;
};

/// Token ranges of the sliding windows over `token_count` tokens. Windows
/// start at multiples of cfg.advance(); the last one is clipped to the end.
/// An empty text yields the single range [0, 0).
std::vector<TokenRange> window_ranges(std::size_t token_count, const WindowConfig& cfg);

/// Byte spans of the sliding windows over `text`, aligned to token
/// boundaries as produced by `analyzer`.
std::vector<CharSpan> windows(std::string_view text, const WindowConfig& cfg, const Analyzer& analyzer = Analyzer{});

/// Links entities in a single window of text. Offsets in the result are
/// relative to `window_text`.
class EntityLinker {
public:
    virtual ~EntityLinker() = default;
    virtual std::vector<EntityAnnotation> link(std::string_view window_text, const LinkerConfig& cfg) const = 0;
};

/// Alias dictionary keyed by analyzed token sequences.
class Gazetteer {
public:
    struct Entry {
        std::string entity_name;
        double score = 0.0;
    };

    explicit Gazetteer(Analyzer analyzer = Analyzer{});

    /// Registers an alias. When an analyzed alias is already present the
    /// higher-scored entry is kept; on equal scores the first one stays.
    void add(std::string_view alias, const std::string& entity_name, double score);

    const Entry* find(const std::vector<std::string>& tokens) const;

    const Analyzer& analyzer() const noexcept { return analyzer_; }
    std::size_t max_alias_tokens() const noexcept { return max_alias_tokens_; }
    std::size_t size() const noexcept { return entries_.size(); }

    /// Every distinct entity name, sorted.
    std::vector<std::string> entity_names() const;

    /// Reads `alias<TAB>entity_name<TAB>score` lines.
    static Gazetteer load(const std::filesystem::path& path, Analyzer analyzer = Analyzer{});

private:
    static std::string key(const std::vector<std::string>& tokens);

    Analyzer analyzer_;
    std::unordered_map<std::string, Entry> entries_;
    std::size_t max_alias_tokens_ = 0;
};

/// Greedy left-to-right longest match over analyzed tokens. Aliases whose
/// prior is below cfg.threshold are not eligible to match.
std::vector<EntityAnnotation> gazetteer_link(std::string_view window_text, const Gazetteer& gaz,
                                             const LinkerConfig& cfg);

class GazetteerLinker : public EntityLinker {
public:
    explicit GazetteerLinker(Gazetteer gaz) : gaz_(std::move(gaz)) {}

    const Gazetteer& gazetteer() const noexcept { return gaz_; }

    std::vector<EntityAnnotation> link(std::string_view window_text, const LinkerConfig& cfg) const override {
        return gazetteer_link(window_text, gaz_, cfg);
    }

private:
    Gazetteer gaz_;
};

/// Resolves a set of mentions to a non-overlapping set ordered by position.
/// Identical spans collapse; among overlapping spans the earlier, then the
/// longer, then the higher-scored mention wins.
std::vector<EntityAnnotation> merge_mentions(std::vector<EntityAnnotation> mentions);

/// Runs `linker` over every window of `text` and merges the rebased
/// mentions with merge_mentions(). Errors from the linker are rethrown with
/// the window span attached.
std::vector<EntityAnnotation> link_windows(std::string_view text, const EntityLinker& linker,
                                           const WindowConfig& wcfg, const LinkerConfig& lcfg,
                                           const Analyzer& analyzer = Analyzer{});

/// Deduplicated entity set: one annotation per entity name (its first
/// mention), ordered by first occurrence.
std::vector<EntityAnnotation> link_text(std::string_view text, const EntityLinker& linker,
                                        const WindowConfig& wcfg, const LinkerConfig& lcfg,
                                        const Analyzer& analyzer = Analyzer{});

/// Entity name -> number of distinct mention spans.
std::map<std::string, int> link_mentions(std::string_view text, const EntityLinker& linker,
                                         const WindowConfig& wcfg, const LinkerConfig& lcfg,
                                         const Analyzer& analyzer = Analyzer{});

/// Entities in first-occurrence order with their distinct-span counts.
using EntityCounts = std::vector<std::pair<std::string, int>>;
EntityCounts entity_counts(const std::vector<EntityAnnotation>& mentions);

using AnnotationMap = std::map<std::string, std::vector<EntityAnnotation>>;

/// Reads annotation JSONL, one object per line:
/// {"id": str, "entities": [{"mention", "start", "end", "entity", "score"}]}.
/// Repeated ids append to the same list; no deduplication happens here.
AnnotationMap load_annotations(const std::filesystem::path& path);

/// Writes one JSONL line per (id, annotations) pair in the given order.
void write_annotations(const std::vector<std::pair<std::string, std::vector<EntityAnnotation>>>& records,
                       const std::filesystem::path& path);

}  // namespace entsparse
