#include "entsparse/run.hpp"

#include "entsparse/error.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_set>

namespace entsparse {

void Run::set(const std::string& qid, std::vector<RunEntry> ranking) {
    std::unordered_set<std::string_view> seen;
    for (std::size_t i = 0; i < ranking.size(); ++i) {
        if (!seen.insert(ranking[i].passage_id).second) {
            throw Error("duplicate passage '" + ranking[i].passage_id + "' for query '" + qid + "'");
        }
        if (i > 0 && ranking[i].score > ranking[i - 1].score) {
            throw Error("scores increase at rank " + std::to_string(i + 1) + " for query '" + qid + "'");
        }
    }
    auto [it, inserted] = rankings_.insert_or_assign(qid, std::move(ranking));
    if (inserted) {
        order_.push_back(qid);
    }
}

const std::vector<RunEntry>& Run::ranking(const std::string& qid) const {
    static const std::vector<RunEntry> empty;
    auto it = rankings_.find(qid);
    return it == rankings_.end() ? empty : it->second;
}

bool Run::operator==(const Run& other) const {
    return tag_ == other.tag_ && order_ == other.order_ && rankings_ == other.rankings_;
}

Run read_run(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open run " + path.string());
    }
    struct Line {
        long rank;
        std::size_t line_no;
        RunEntry entry;
    };
    std::vector<std::string> order;
    std::map<std::string, std::vector<Line>> lines;
    std::map<std::string, std::unordered_set<std::string>> seen;
    std::string tag;

    std::string text;
    std::size_t line_no = 0;
    while (std::getline(in, text)) {
        ++line_no;
        std::istringstream fields(text);
        std::vector<std::string> parts;
        for (std::string f; fields >> f;) {
            parts.push_back(std::move(f));
        }
        if (parts.empty()) {
            continue;
        }
        if (parts.size() != 6) {
            throw ParseError(path.string(), line_no,
                             "expected 6 whitespace-separated fields, found " + std::to_string(parts.size()));
        }
        long rank = 0;
        {
            const auto& r = parts[3];
            auto [ptr, ec] = std::from_chars(r.data(), r.data() + r.size(), rank);
            if (ec != std::errc() || ptr != r.data() + r.size()) {
                throw ParseError(path.string(), line_no, "rank '" + r + "' is not an integer");
            }
        }
        double score = 0.0;
        {
            const auto& s = parts[4];
            auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), score);
            if (ec != std::errc() || ptr != s.data() + s.size()) {
                throw ParseError(path.string(), line_no, "score '" + s + "' is not a number");
            }
        }
        const auto& qid = parts[0];
        if (!seen[qid].insert(parts[2]).second) {
            throw ParseError(path.string(), line_no, "duplicate passage '" + parts[2] + "' for query '" + qid + "'");
        }
        if (tag.empty()) {
            tag = parts[5];
        }
        auto [it, inserted] = lines.try_emplace(qid);
        if (inserted) {
            order.push_back(qid);
        }
        it->second.push_back({rank, line_no, {parts[2], score}});
    }

    Run run(tag);
    for (const auto& qid : order) {
        auto& list = lines[qid];
        std::stable_sort(list.begin(), list.end(), [](const Line& a, const Line& b) { return a.rank < b.rank; });
        std::vector<RunEntry> ranking;
        ranking.reserve(list.size());
        for (std::size_t i = 0; i < list.size(); ++i) {
            if (i > 0 && list[i].entry.score > list[i - 1].entry.score) {
                throw ParseError(path.string(), list[i].line_no, "score increases with rank for query '" + qid + "'");
            }
            ranking.push_back(std::move(list[i].entry));
        }
        run.set(qid, std::move(ranking));
    }
    return run;
}

void write_run(const Run& run, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    const std::string tag = run.tag().empty() ? "run" : run.tag();
    char score[64];
    for (const auto& qid : run.query_ids()) {
        std::size_t rank = 0;
        for (const auto& e : run.ranking(qid)) {
            std::snprintf(score, sizeof score, "%.6g", e.score);
            out << qid << " Q0 " << e.passage_id << ' ' << ++rank << ' ' << score << ' ' << tag << '\n';
        }
    }
    if (!out) {
        throw Error("write failed: " + path.string());
    }
}

}  // namespace entsparse
