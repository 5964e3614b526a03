#include "entsparse/index.hpp"

#include "entsparse/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <thread>
#include <unordered_set>

namespace entsparse {
namespace {

constexpr char magic[8] = {'E', 'S', 'P', 'I', 'D', 'X', '\0', '\0'};
constexpr const char* index_file = "index.bin";

double idf(std::size_t num_docs, std::size_t df) {
    const auto n = static_cast<double>(num_docs);
    const auto d = static_cast<double>(df);
    return std::log(1.0 + (n - d + 0.5) / (d + 0.5));
}

double term_weight(double idf, std::uint32_t tf, std::uint32_t dl, double avgdl, const BM25Params& p) {
    const auto f = static_cast<double>(tf);
    const double norm = p.k1 * (1.0 - p.b + p.b * static_cast<double>(dl) / avgdl);
    return idf * (f * (p.k1 + 1.0)) / (f + norm);
}

bool hit_before(const ScoredHit& a, const ScoredHit& b) {
    if (a.score != b.score) {
        return a.score > b.score;
    }
    return a.passage_id < b.passage_id;
}

class BinaryWriter {
public:
    explicit BinaryWriter(std::ofstream& out) : out_(out) {}

    void u8(std::uint8_t v) { out_.put(static_cast<char>(v)); }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) out_.put(static_cast<char>((v >> (8 * i)) & 0xff));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) out_.put(static_cast<char>((v >> (8 * i)) & 0xff));
    }
    void str(const std::string& s) {
        u64(s.size());
        out_.write(s.data(), static_cast<std::streamsize>(s.size()));
    }

private:
    std::ofstream& out_;
};

class BinaryReader {
public:
    BinaryReader(std::ifstream& in, std::string path) : in_(in), path_(std::move(path)) {}

    std::uint8_t u8() {
        char c = 0;
        read(&c, 1);
        return static_cast<std::uint8_t>(c);
    }
    std::uint32_t u32() {
        unsigned char b[4];
        read(b, 4);
        std::uint32_t v = 0;
        for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
        return v;
    }
    std::uint64_t u64() {
        unsigned char b[8];
        read(b, 8);
        std::uint64_t v = 0;
        for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
        return v;
    }
    std::string str() {
        auto n = u64();
        if (n > (std::uint64_t{1} << 32)) {
            throw Error(path_ + ": corrupt index (string length " + std::to_string(n) + ")");
        }
        std::string s(n, '\0');
        read(s.data(), n);
        return s;
    }

private:
    void read(void* dst, std::size_t n) {
        in_.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(in_.gcount()) != n) {
            throw Error(path_ + ": truncated index file");
        }
    }

    std::ifstream& in_;
    std::string path_;
};

}  // namespace

void BM25Params::validate() const {
    if (!(k1 >= 0.0)) {
        throw Error("k1 must be >= 0");
    }
    if (!(b >= 0.0 && b <= 1.0)) {
        throw Error("b must lie in [0, 1]");
    }
}

InvertedIndex InvertedIndex::build(const std::vector<Passage>& passages, const AnalyzerConfig& analyzer) {
    InvertedIndex index;
    index.analyzer_ = Analyzer(analyzer);
    std::unordered_set<std::string_view> ids;
    std::unordered_map<std::string, std::uint32_t> counts;
    for (const auto& p : passages) {
        if (!ids.insert(p.id).second) {
            throw Error("duplicate passage id '" + p.id + "'");
        }
        if (index.doc_ids_.size() >= UINT32_MAX) {
            throw Error("collection exceeds 2^32 - 1 passages");
        }
        const auto doc = static_cast<std::uint32_t>(index.doc_ids_.size());
        index.doc_ids_.push_back(p.id);

        counts.clear();
        auto terms = index.analyzer_.analyze(p.text);
        for (auto& t : terms) {
            ++counts[std::move(t)];
        }
        index.doc_lengths_.push_back(static_cast<std::uint32_t>(terms.size()));
        for (auto& [term, tf] : counts) {
            auto [it, inserted] = index.term_ids_.try_emplace(term, static_cast<std::uint32_t>(index.terms_.size()));
            if (inserted) {
                index.terms_.push_back(term);
                index.postings_.emplace_back();
            }
            index.postings_[it->second].push_back({doc, tf});
        }
    }
    index.finalize();
    return index;
}

void InvertedIndex::finalize() {
    std::uint64_t total = std::accumulate(doc_lengths_.begin(), doc_lengths_.end(), std::uint64_t{0});
    avgdl_ = doc_lengths_.empty() ? 0.0 : static_cast<double>(total) / static_cast<double>(doc_lengths_.size());
}

const std::vector<Posting>& InvertedIndex::postings(std::string_view term) const {
    static const std::vector<Posting> empty;
    auto it = term_ids_.find(std::string(term));
    return it == term_ids_.end() ? empty : postings_[it->second];
}

std::uint32_t InvertedIndex::tf(std::string_view term, std::uint32_t doc) const {
    const auto& list = postings(term);
    auto it = std::lower_bound(list.begin(), list.end(), doc,
                               [](const Posting& p, std::uint32_t d) { return p.doc < d; });
    return (it != list.end() && it->doc == doc) ? it->tf : 0;
}

void InvertedIndex::save(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    const auto path = dir / index_file;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    out.write(magic, sizeof magic);
    BinaryWriter w(out);
    w.u32(format_version);

    const auto& cfg = analyzer_.config();
    w.u8(cfg.stem ? 1 : 0);
    w.u8(cfg.fold_accents ? 1 : 0);
    w.u64(cfg.stopwords.size());
    for (const auto& s : cfg.stopwords) {
        w.str(s);
    }

    w.u64(doc_ids_.size());
    for (std::size_t d = 0; d < doc_ids_.size(); ++d) {
        w.str(doc_ids_[d]);
        w.u32(doc_lengths_[d]);
    }

    std::vector<std::uint32_t> order(terms_.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return terms_[a] < terms_[b]; });
    w.u64(terms_.size());
    for (auto t : order) {
        w.str(terms_[t]);
        w.u64(postings_[t].size());
        for (const auto& p : postings_[t]) {
            w.u32(p.doc);
            w.u32(p.tf);
        }
    }
    if (!out) {
        throw Error("write failed: " + path.string());
    }
}

InvertedIndex InvertedIndex::load(const std::filesystem::path& dir) {
    const auto path = dir / index_file;
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open index " + path.string());
    }
    char header[sizeof magic];
    in.read(header, sizeof header);
    if (in.gcount() != sizeof header || std::memcmp(header, magic, sizeof magic) != 0) {
        throw Error(path.string() + ": not an index file");
    }
    BinaryReader r(in, path.string());
    if (auto version = r.u32(); version != format_version) {
        throw Error(path.string() + ": unsupported index version " + std::to_string(version));
    }

    AnalyzerConfig cfg;
    cfg.stem = r.u8() != 0;
    cfg.fold_accents = r.u8() != 0;
    for (auto n = r.u64(); n > 0; --n) {
        cfg.stopwords.insert(r.str());
    }

    InvertedIndex index;
    index.analyzer_ = Analyzer(cfg);
    const auto num_docs = r.u64();
    for (std::uint64_t d = 0; d < num_docs; ++d) {
        index.doc_ids_.push_back(r.str());
        index.doc_lengths_.push_back(r.u32());
    }
    const auto num_terms = r.u64();
    for (std::uint64_t t = 0; t < num_terms; ++t) {
        auto term = r.str();
        std::vector<Posting> list(r.u64());
        for (auto& p : list) {
            p.doc = r.u32();
            p.tf = r.u32();
            if (p.doc >= num_docs) {
                throw Error(path.string() + ": posting references unknown document");
            }
        }
        index.term_ids_.emplace(term, static_cast<std::uint32_t>(index.terms_.size()));
        index.terms_.push_back(std::move(term));
        index.postings_.push_back(std::move(list));
    }
    index.finalize();
    return index;
}

double bm25_score(const InvertedIndex& index, const BM25Params& params, const std::vector<std::string>& query_terms,
                  std::uint32_t doc) {
    if (doc >= index.num_docs()) {
        throw Error("document ordinal " + std::to_string(doc) + " out of range");
    }
    double score = 0.0;
    for (const auto& term : query_terms) {
        auto tf = index.tf(term, doc);
        if (tf == 0) {
            continue;
        }
        score += term_weight(idf(index.num_docs(), index.df(term)), tf, index.doc_length(doc), index.avgdl(), params);
    }
    return score;
}

std::vector<ScoredHit> search(const InvertedIndex& index, const BM25Params& params, std::string_view query,
                              std::size_t k) {
    if (k == 0) {
        throw Error("k must be at least 1");
    }
    params.validate();
    const auto terms = index.analyzer().analyze(query);
    std::vector<double> acc;
    std::vector<std::uint32_t> touched;
    for (const auto& term : terms) {
        const auto& list = index.postings(term);
        if (list.empty()) {
            continue;
        }
        if (acc.empty()) {
            acc.assign(index.num_docs(), 0.0);
        }
        const double w = idf(index.num_docs(), list.size());
        for (const auto& p : list) {
            if (acc[p.doc] == 0.0) {
                touched.push_back(p.doc);
            }
            acc[p.doc] += term_weight(w, p.tf, index.doc_length(p.doc), index.avgdl(), params);
        }
    }

    std::vector<ScoredHit> hits;
    hits.reserve(touched.size());
    for (auto doc : touched) {
        if (acc[doc] > 0.0) {
            hits.push_back({index.doc_id(doc), acc[doc], 0});
        }
    }
    if (hits.size() > k) {
        std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(k), hits.end(), hit_before);
        hits.resize(k);
    } else {
        std::sort(hits.begin(), hits.end(), hit_before);
    }
    for (std::size_t i = 0; i < hits.size(); ++i) {
        hits[i].rank = i + 1;
    }
    return hits;
}

Run batch_search(const InvertedIndex& index, const BM25Params& params, const std::vector<Query>& queries,
                 std::size_t k, const std::string& tag, unsigned threads) {
    params.validate();
    if (k == 0) {
        throw Error("k must be at least 1");
    }
    std::vector<std::vector<ScoredHit>> results(queries.size());
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(queries.size(), 1)));

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < queries.size(); i = next++) {
            results[i] = search(index, params, queries[i].text, k);
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
    }

    Run run(tag);
    for (std::size_t i = 0; i < queries.size(); ++i) {
        std::vector<RunEntry> ranking;
        ranking.reserve(results[i].size());
        for (auto& h : results[i]) {
            ranking.push_back({std::move(h.passage_id), h.score});
        }
        run.set(queries[i].id, std::move(ranking));
    }
    return run;
}

}  // namespace entsparse
