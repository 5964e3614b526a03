#include "entsparse/corpus.hpp"

#include "entsparse/error.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace entsparse {

void Qrels::add(const std::string& qid, const std::string& pid, int grade) {
    if (grade < 0) {
        throw Error("negative relevance grade for (" + qid + ", " + pid + ")");
    }
    auto& slot = judgments_[qid][pid];
    slot = std::max(slot, grade);
}

int Qrels::grade(const std::string& qid, const std::string& pid) const {
    auto q = judgments_.find(qid);
    if (q == judgments_.end()) {
        return 0;
    }
    auto p = q->second.find(pid);
    return p == q->second.end() ? 0 : p->second;
}

std::vector<std::string> Qrels::relevant(const std::string& qid) const {
    std::vector<std::string> out;
    auto q = judgments_.find(qid);
    if (q != judgments_.end()) {
        for (const auto& [pid, grade] : q->second) {
            if (grade > 0) {
                out.push_back(pid);
            }
        }
    }
    return out;
}

std::vector<std::string> Qrels::judged_queries() const {
    std::vector<std::string> out;
    for (const auto& [qid, pids] : judgments_) {
        if (std::any_of(pids.begin(), pids.end(), [](const auto& kv) { return kv.second > 0; })) {
            out.push_back(qid);
        }
    }
    return out;
}

TsvReader::TsvReader(const std::filesystem::path& path) : path_(path), in_(path) {
    if (!in_) {
        throw Error("cannot open " + path.string());
    }
}

std::optional<Passage> TsvReader::next() {
    std::string line;
    if (!std::getline(in_, line)) {
        return std::nullopt;
    }
    ++line_no_;
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
        throw ParseError(path_.string(), line_no_, "expected 2 tab-separated fields, found 1");
    }
    if (line.find('\t', tab + 1) != std::string::npos) {
        auto fields = 1 + std::count(line.begin(), line.end(), '\t');
        throw ParseError(path_.string(), line_no_,
                         "expected 2 tab-separated fields, found " + std::to_string(fields));
    }
    Passage p{line.substr(0, tab), line.substr(tab + 1)};
    if (p.id.empty()) {
        throw ParseError(path_.string(), line_no_, "empty id");
    }
    if (!seen_.insert(p.id).second) {
        throw ParseError(path_.string(), line_no_, "duplicate id '" + p.id + "'");
    }
    return p;
}

std::vector<Passage> load_collection(const std::filesystem::path& path) {
    TsvReader reader(path);
    std::vector<Passage> out;
    while (auto p = reader.next()) {
        out.push_back(std::move(*p));
    }
    return out;
}

std::vector<Query> load_queries(const std::filesystem::path& path) {
    TsvReader reader(path);
    std::vector<Query> out;
    while (auto p = reader.next()) {
        out.push_back({std::move(p->id), std::move(p->text)});
    }
    return out;
}

Qrels load_qrels(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open " + path.string());
    }
    Qrels qrels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream fields(line);
        std::vector<std::string> parts;
        for (std::string f; fields >> f;) {
            parts.push_back(std::move(f));
        }
        if (parts.empty()) {
            continue;
        }
        if (parts.size() != 4) {
            throw ParseError(path.string(), line_no,
                             "expected 4 whitespace-separated fields, found " + std::to_string(parts.size()));
        }
        const std::string& g = parts[3];
        int grade = 0;
        auto [ptr, ec] = std::from_chars(g.data(), g.data() + g.size(), grade);
        if (ec != std::errc() || ptr != g.data() + g.size()) {
            throw ParseError(path.string(), line_no, "grade '" + g + "' is not an integer");
        }
        if (grade < 0) {
            throw ParseError(path.string(), line_no, "negative grade");
        }
        qrels.add(parts[0], parts[2], grade);
    }
    return qrels;
}

namespace {

template <typename Record>
void write_tsv(const std::vector<Record>& records, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    for (const auto& r : records) {
        out << r.id << '\t' << r.text << '\n';
    }
    if (!out) {
        throw Error("write failed: " + path.string());
    }
}

}  // namespace

void write_collection(const std::vector<Passage>& passages, const std::filesystem::path& path) {
    write_tsv(passages, path);
}

void write_queries(const std::vector<Query>& queries, const std::filesystem::path& path) {
    write_tsv(queries, path);
}

}  // namespace entsparse
