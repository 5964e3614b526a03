#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace entsparse {

struct AnalyzerConfig {
    bool stem = false;          // Porter stemming
    bool fold_accents = false;  // strip combining marks after NFD
    std::set<std::string> stopwords;

    bool operator==(const AnalyzerConfig&) const = default;
};

/// A token together with the byte span of its surface form in the source.
struct TokenSpan {
    std::string term;
    std::size_t start = 0;  // byte offset, inclusive
    std::size_t end = 0;    // byte offset, exclusive
};

/// Unicode word segmentation with lowercase folding.
///
/// A word is a maximal run of letters, digits and combining marks. Han,
/// Hiragana and Katakana characters are emitted one per token. ASCII
/// alphanumerics pass through unchanged apart from case, so hex digests
/// survive as single tokens. Stopword removal and stemming apply after
/// folding; stemmed forms are never produced for tokens containing digits.
class Analyzer {
public:
    explicit Analyzer(AnalyzerConfig config = {});

    std::vector<std::string> analyze(std::string_view text) const;
    std::vector<TokenSpan> analyze_with_offsets(std::string_view text) const;

    const AnalyzerConfig& config() const noexcept { return config_; }

private:
    std::string normalize(std::string_view word) const;

    AnalyzerConfig config_;
};

/// Convenience wrapper using the default configuration.
std::vector<std::string> analyze(std::string_view text);

}  // namespace entsparse
