#include "entsparse/linker.hpp"

#include "entsparse/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>

namespace entsparse {

void WindowConfig::validate() const {
    if (window_tokens == 0) {
        throw Error("window size must be positive");
    }
    if (overlap_tokens >= window_tokens) {
        throw Error("window overlap (" + std::to_string(overlap_tokens) + ") must be smaller than the window (" +
                    std::to_string(window_tokens) + ")");
    }
}

void LinkerConfig::validate() const {
    if (num_cand_mentions < 1 || num_cand_entities < 1) {
        throw Error("candidate counts must be at least 1");
    }
}

std::vector<TokenRange> window_ranges(std::size_t token_count, const WindowConfig& cfg) {
    cfg.validate();
    if (token_count <= cfg.window_tokens) {
        return {{0, token_count}};
    }
    std::vector<TokenRange> ranges;
    for (std::size_t start = 0;; start += cfg.advance()) {
        std::size_t end = std::min(start + cfg.window_tokens, token_count);
        ranges.push_back({start, end});
        if (end == token_count) {
            break;
        }
    }
    return ranges;
}

std::vector<CharSpan> windows(std::string_view text, const WindowConfig& cfg, const Analyzer& analyzer) {
    auto tokens = analyzer.analyze_with_offsets(text);
    auto ranges = window_ranges(tokens.size(), cfg);
    if (ranges.size() == 1) {
        return {{0, text.size()}};
    }
    std::vector<CharSpan> spans;
    spans.reserve(ranges.size());
    for (const auto& r : ranges) {
        spans.push_back({tokens[r.begin].start, tokens[r.end - 1].end});
    }
    return spans;
}

Gazetteer::Gazetteer(Analyzer analyzer) : analyzer_(std::move(analyzer)) {}

std::string Gazetteer::key(const std::vector<std::string>& tokens) {
    std::string k;
    for (const auto& t : tokens) {
        if (!k.empty()) {
            k.push_back('\x1f');
        }
        k += t;
    }
    return k;
}

void Gazetteer::add(std::string_view alias, const std::string& entity_name, double score) {
    if (entity_name.empty()) {
        throw Error("gazetteer entity name is empty");
    }
    auto tokens = analyzer_.analyze(alias);
    if (tokens.empty()) {
        throw Error("gazetteer alias '" + std::string(alias) + "' has no tokens");
    }
    auto [it, inserted] = entries_.try_emplace(key(tokens), Entry{entity_name, score});
    if (!inserted && score > it->second.score) {
        it->second = Entry{entity_name, score};
    }
    max_alias_tokens_ = std::max(max_alias_tokens_, tokens.size());
}

const Gazetteer::Entry* Gazetteer::find(const std::vector<std::string>& tokens) const {
    auto it = entries_.find(key(tokens));
    return it == entries_.end() ? nullptr : &it->second;
}

std::vector<std::string> Gazetteer::entity_names() const {
    std::set<std::string> names;
    for (const auto& [k, entry] : entries_) {
        names.insert(entry.entity_name);
    }
    return {names.begin(), names.end()};
}

Gazetteer Gazetteer::load(const std::filesystem::path& path, Analyzer analyzer) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open gazetteer " + path.string());
    }
    Gazetteer gaz(std::move(analyzer));
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        auto t1 = line.find('\t');
        auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
        if (t2 == std::string::npos || line.find('\t', t2 + 1) != std::string::npos) {
            throw ParseError(path.string(), line_no, "expected alias<TAB>entity<TAB>score");
        }
        std::string score_text = line.substr(t2 + 1);
        double score = 0.0;
        auto [ptr, ec] = std::from_chars(score_text.data(), score_text.data() + score_text.size(), score);
        if (ec != std::errc() || ptr != score_text.data() + score_text.size()) {
            throw ParseError(path.string(), line_no, "score '" + score_text + "' is not a number");
        }
        try {
            gaz.add(std::string_view(line).substr(0, t1), line.substr(t1 + 1, t2 - t1 - 1), score);
        } catch (const Error& e) {
            throw ParseError(path.string(), line_no, e.what());
        }
    }
    return gaz;
}

std::vector<EntityAnnotation> gazetteer_link(std::string_view window_text, const Gazetteer& gaz,
                                             const LinkerConfig& cfg) {
    auto tokens = gaz.analyzer().analyze_with_offsets(window_text);
    std::vector<EntityAnnotation> out;
    std::vector<std::string> probe;
    std::size_t i = 0;
    while (i < tokens.size()) {
        std::size_t longest = std::min(gaz.max_alias_tokens(), tokens.size() - i);
        std::size_t matched = 0;
        for (std::size_t len = longest; len >= 1 && matched == 0; --len) {
            probe.clear();
            for (std::size_t j = i; j < i + len; ++j) {
                probe.push_back(tokens[j].term);
            }
            const auto* entry = gaz.find(probe);
            if (entry == nullptr || entry->score < cfg.threshold) {
                continue;
            }
            std::size_t start = tokens[i].start;
            std::size_t end = tokens[i + len - 1].end;
            out.push_back({std::string(window_text.substr(start, end - start)), start, end, entry->entity_name,
                           entry->score});
            matched = len;
        }
        i += matched == 0 ? 1 : matched;
    }
    return out;
}

std::vector<EntityAnnotation> merge_mentions(std::vector<EntityAnnotation> mentions) {
    std::sort(mentions.begin(), mentions.end(), [](const EntityAnnotation& a, const EntityAnnotation& b) {
        if (a.char_start != b.char_start) return a.char_start < b.char_start;
        if (a.char_end != b.char_end) return a.char_end > b.char_end;
        if (a.score != b.score) return a.score > b.score;
        return a.entity_name < b.entity_name;
    });
    std::vector<EntityAnnotation> merged;
    std::size_t covered_to = 0;
    for (auto& m : mentions) {
        if (!merged.empty() && m.char_start < covered_to) {
            continue;
        }
        covered_to = m.char_end;
        merged.push_back(std::move(m));
    }
    return merged;
}

std::vector<EntityAnnotation> link_windows(std::string_view text, const EntityLinker& linker,
                                           const WindowConfig& wcfg, const LinkerConfig& lcfg,
                                           const Analyzer& analyzer) {
    std::vector<EntityAnnotation> all;
    for (const auto& span : windows(text, wcfg, analyzer)) {
        auto window_text = text.substr(span.start, span.end - span.start);
        std::vector<EntityAnnotation> found;
        try {
            found = linker.link(window_text, lcfg);
        } catch (const std::exception& e) {
            throw Error("linker failed on window [" + std::to_string(span.start) + ", " + std::to_string(span.end) +
                        "): " + e.what());
        }
        for (auto& a : found) {
            if (a.char_start >= a.char_end || a.char_end > window_text.size()) {
                throw Error("linker returned an invalid span in window [" + std::to_string(span.start) + ", " +
                            std::to_string(span.end) + ")");
            }
            a.char_start += span.start;
            a.char_end += span.start;
            all.push_back(std::move(a));
        }
    }
    return merge_mentions(std::move(all));
}

std::vector<EntityAnnotation> link_text(std::string_view text, const EntityLinker& linker,
                                        const WindowConfig& wcfg, const LinkerConfig& lcfg,
                                        const Analyzer& analyzer) {
    std::vector<EntityAnnotation> unique;
    std::set<std::string> seen;
    for (auto& a : link_windows(text, linker, wcfg, lcfg, analyzer)) {
        if (seen.insert(a.entity_name).second) {
            unique.push_back(std::move(a));
        }
    }
    return unique;
}

std::map<std::string, int> link_mentions(std::string_view text, const EntityLinker& linker,
                                         const WindowConfig& wcfg, const LinkerConfig& lcfg,
                                         const Analyzer& analyzer) {
    std::map<std::string, int> counts;
    for (const auto& [name, count] : entity_counts(link_windows(text, linker, wcfg, lcfg, analyzer))) {
        counts[name] = count;
    }
    return counts;
}

EntityCounts entity_counts(const std::vector<EntityAnnotation>& mentions) {
    std::vector<const EntityAnnotation*> ordered;
    for (const auto& m : mentions) {
        ordered.push_back(&m);
    }
    std::stable_sort(ordered.begin(), ordered.end(), [](const auto* a, const auto* b) {
        return a->char_start < b->char_start;
    });
    EntityCounts counts;
    std::map<std::string, std::size_t> slot;
    std::set<std::tuple<std::string, std::size_t, std::size_t>> spans;
    for (const auto* m : ordered) {
        if (!spans.emplace(m->entity_name, m->char_start, m->char_end).second) {
            continue;
        }
        auto [it, inserted] = slot.try_emplace(m->entity_name, counts.size());
        if (inserted) {
            counts.emplace_back(m->entity_name, 0);
        }
        ++counts[it->second].second;
    }
    return counts;
}

namespace {

template <typename T>
T required(const nlohmann::json& obj, const char* field, const std::string& path, std::size_t line_no) {
    auto it = obj.find(field);
    if (it == obj.end()) {
        throw ParseError(path, line_no, std::string("missing field '") + field + "'");
    }
    try {
        return it->get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ParseError(path, line_no, std::string("field '") + field + "' has the wrong type");
    }
}

}  // namespace

AnnotationMap load_annotations(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open annotations " + path.string());
    }
    const std::string p = path.string();
    AnnotationMap out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        nlohmann::json record;
        try {
            record = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(p, line_no, std::string("malformed JSON: ") + e.what());
        }
        if (!record.is_object()) {
            throw ParseError(p, line_no, "expected a JSON object");
        }
        auto id = required<std::string>(record, "id", p, line_no);
        if (id.empty()) {
            throw ParseError(p, line_no, "empty id");
        }
        auto entities = record.find("entities");
        if (entities == record.end() || !entities->is_array()) {
            throw ParseError(p, line_no, "field 'entities' must be an array");
        }
        auto& list = out[id];
        for (const auto& e : *entities) {
            if (!e.is_object()) {
                throw ParseError(p, line_no, "entity entries must be objects");
            }
            auto start = required<std::int64_t>(e, "start", p, line_no);
            auto end = required<std::int64_t>(e, "end", p, line_no);
            if (start < 0 || end <= start) {
                throw ParseError(p, line_no,
                                 "invalid span [" + std::to_string(start) + ", " + std::to_string(end) + ")");
            }
            EntityAnnotation a;
            a.mention = required<std::string>(e, "mention", p, line_no);
            a.char_start = static_cast<std::size_t>(start);
            a.char_end = static_cast<std::size_t>(end);
            a.entity_name = required<std::string>(e, "entity", p, line_no);
            a.score = required<double>(e, "score", p, line_no);
            if (a.entity_name.empty()) {
                throw ParseError(p, line_no, "empty entity name");
            }
            list.push_back(std::move(a));
        }
    }
    return out;
}

void write_annotations(const std::vector<std::pair<std::string, std::vector<EntityAnnotation>>>& records,
                       const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    for (const auto& [id, annotations] : records) {
        nlohmann::ordered_json line;
        line["id"] = id;
        line["entities"] = nlohmann::ordered_json::array();
        for (const auto& a : annotations) {
            nlohmann::ordered_json e;
            e["mention"] = a.mention;
            e["start"] = a.char_start;
            e["end"] = a.char_end;
            e["entity"] = a.entity_name;
            e["score"] = a.score;
            line["entities"].push_back(std::move(e));
        }
        out << line.dump(-1, ' ', false, nlohmann::ordered_json::error_handler_t::replace) << '\n';
    }
    if (!out) {
        throw Error("write failed: " + path.string());
    }
}

}  // namespace entsparse
