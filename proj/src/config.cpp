#include "entsparse/config.hpp"

#include "entsparse/error.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace entsparse {
namespace {

using nlohmann::ordered_json;

void reject_unknown(const ordered_json& obj, std::initializer_list<const char*> known, const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* k : known) {
            ok = ok || key == k;
        }
        if (!ok) {
            throw Error("unknown config key '" + where + key + "'");
        }
    }
}

template <typename T>
void read_opt(const ordered_json& obj, const char* key, T& out) {
    if (auto it = obj.find(key); it != obj.end()) {
        out = it->get<T>();
    }
}

}  // namespace

void PipelineConfig::validate() const {
    window.validate();
    linker.validate();
    bm25.validate();
    fusion.validate();
    hard.validate();
    if (k == 0) {
        throw Error("k must be at least 1");
    }
    if (cutoffs.empty()) {
        throw Error("at least one cutoff is required");
    }
    for (std::size_t i = 0; i < cutoffs.size(); ++i) {
        if (cutoffs[i] == 0 || (i > 0 && cutoffs[i] <= cutoffs[i - 1])) {
            throw Error("cutoffs must be positive and strictly increasing");
        }
    }
}

std::string PipelineConfig::to_json() const {
    ordered_json j;
    j["analyzer"] = {{"stem", analyzer.stem},
                     {"fold_accents", analyzer.fold_accents},
                     {"stopwords", std::vector<std::string>(analyzer.stopwords.begin(), analyzer.stopwords.end())}};
    j["window"] = {{"window_tokens", window.window_tokens}, {"overlap_tokens", window.overlap_tokens}};
    j["linker"] = {{"threshold", linker.threshold},
                   {"num_cand_mentions", linker.num_cand_mentions},
                   {"num_cand_entities", linker.num_cand_entities}};
    j["strategy"] = strategy.to_string();
    j["bm25"] = {{"k1", bm25.k1}, {"b", bm25.b}};
    j["k"] = k;
    j["fusion"] = {{"rrf_k", fusion.rrf_k}, {"depth", fusion.depth}};
    j["cutoffs"] = cutoffs;
    j["hard"] = {{"worst_fraction", hard.worst_fraction}, {"min_rankers", hard.min_rankers}};
    return j.dump(2) + "\n";
}

PipelineConfig PipelineConfig::from_json(const std::string& text) {
    PipelineConfig cfg;
    try {
        auto j = ordered_json::parse(text);
        if (!j.is_object()) {
            throw Error("config must be a JSON object");
        }
        reject_unknown(j, {"analyzer", "window", "linker", "strategy", "bm25", "k", "fusion", "cutoffs", "hard"}, "");
        if (auto it = j.find("analyzer"); it != j.end()) {
            reject_unknown(*it, {"stem", "fold_accents", "stopwords"}, "analyzer.");
            read_opt(*it, "stem", cfg.analyzer.stem);
            read_opt(*it, "fold_accents", cfg.analyzer.fold_accents);
            if (auto s = it->find("stopwords"); s != it->end()) {
                auto words = s->get<std::vector<std::string>>();
                cfg.analyzer.stopwords = {words.begin(), words.end()};
            }
        }
        if (auto it = j.find("window"); it != j.end()) {
            reject_unknown(*it, {"window_tokens", "overlap_tokens"}, "window.");
            read_opt(*it, "window_tokens", cfg.window.window_tokens);
            read_opt(*it, "overlap_tokens", cfg.window.overlap_tokens);
        }
        if (auto it = j.find("linker"); it != j.end()) {
            reject_unknown(*it, {"threshold", "num_cand_mentions", "num_cand_entities"}, "linker.");
            read_opt(*it, "threshold", cfg.linker.threshold);
            read_opt(*it, "num_cand_mentions", cfg.linker.num_cand_mentions);
            read_opt(*it, "num_cand_entities", cfg.linker.num_cand_entities);
        }
        if (auto it = j.find("strategy"); it != j.end()) {
            cfg.strategy = ExpansionStrategy::parse(it->get<std::string>());
        }
        if (auto it = j.find("bm25"); it != j.end()) {
            reject_unknown(*it, {"k1", "b"}, "bm25.");
            read_opt(*it, "k1", cfg.bm25.k1);
            read_opt(*it, "b", cfg.bm25.b);
        }
        read_opt(j, "k", cfg.k);
        if (auto it = j.find("fusion"); it != j.end()) {
            reject_unknown(*it, {"rrf_k", "depth"}, "fusion.");
            read_opt(*it, "rrf_k", cfg.fusion.rrf_k);
            read_opt(*it, "depth", cfg.fusion.depth);
        }
        read_opt(j, "cutoffs", cfg.cutoffs);
        if (auto it = j.find("hard"); it != j.end()) {
            reject_unknown(*it, {"worst_fraction", "min_rankers"}, "hard.");
            read_opt(*it, "worst_fraction", cfg.hard.worst_fraction);
            read_opt(*it, "min_rankers", cfg.hard.min_rankers);
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("invalid config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

PipelineConfig PipelineConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open config " + path.string());
    }
    std::ostringstream text;
    text << in.rdbuf();
    try {
        return from_json(text.str());
    } catch (const Error& e) {
        throw Error(path.string() + ": " + e.what());
    }
}

void PipelineConfig::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    out << to_json();
}

}  // namespace entsparse
