// Command-line front end for the entity-expansion retrieval pipeline.

#include "entsparse/config.hpp"
#include "entsparse/corpus.hpp"
#include "entsparse/error.hpp"
#include "entsparse/eval.hpp"
#include "entsparse/expansion.hpp"
#include "entsparse/fusion.hpp"
#include "entsparse/index.hpp"
#include "entsparse/linker.hpp"
#include "entsparse/run.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace entsparse;

namespace {

struct Overrides {
    std::optional<std::size_t> window;
    std::optional<std::size_t> overlap;
    std::optional<double> threshold;
    std::optional<std::string> strategy;
    std::optional<double> k1;
    std::optional<double> b;
    std::optional<std::size_t> k;
    std::optional<int> rrf_k;
    std::optional<std::size_t> depth;
    std::vector<std::size_t> cutoffs;
    std::optional<int> min_rankers;
    std::optional<double> worst_fraction;
    std::optional<bool> stem;
};

PipelineConfig resolve_config(const std::string& config_path, const Overrides& o) {
    PipelineConfig cfg;
    if (!config_path.empty()) {
        cfg = PipelineConfig::load(config_path);
    } else if (const char* env = std::getenv(config_env_var); env != nullptr && *env != '\0') {
        cfg = PipelineConfig::load(env);
    }
    if (o.window) cfg.window.window_tokens = *o.window;
    if (o.overlap) cfg.window.overlap_tokens = *o.overlap;
    if (o.threshold) cfg.linker.threshold = *o.threshold;
    if (o.strategy) cfg.strategy = ExpansionStrategy::parse(*o.strategy);
    if (o.k1) cfg.bm25.k1 = *o.k1;
    if (o.b) cfg.bm25.b = *o.b;
    if (o.k) cfg.k = *o.k;
    if (o.rrf_k) cfg.fusion.rrf_k = *o.rrf_k;
    if (o.depth) cfg.fusion.depth = *o.depth;
    if (!o.cutoffs.empty()) cfg.cutoffs = o.cutoffs;
    if (o.min_rankers) cfg.hard.min_rankers = *o.min_rankers;
    if (o.worst_fraction) cfg.hard.worst_fraction = *o.worst_fraction;
    if (o.stem) cfg.analyzer.stem = *o.stem;
    cfg.validate();
    return cfg;
}

void record_config(const PipelineConfig& cfg, const fs::path& out) {
    cfg.save(out.string() + ".config.json");
}

void require_file(const std::string& path, const char* what) {
    if (!fs::is_regular_file(path)) {
        throw Error(std::string(what) + " not found: " + path);
    }
}

// Ingested annotations are kept as given apart from span validation and
// removal of exact duplicates.
std::vector<EntityAnnotation> normalize_ingested(const std::string& id, const std::string& text,
                                                 std::vector<EntityAnnotation> list) {
    for (const auto& a : list) {
        if (a.char_end > text.size()) {
            throw Error("annotation for '" + id + "' ends at " + std::to_string(a.char_end) +
                        " beyond the text length " + std::to_string(text.size()));
        }
    }
    std::stable_sort(list.begin(), list.end(), [](const auto& a, const auto& b) {
        return std::tie(a.char_start, a.char_end) < std::tie(b.char_start, b.char_end);
    });
    std::vector<EntityAnnotation> out;
    for (auto& a : list) {
        bool duplicate = std::any_of(out.begin(), out.end(), [&](const EntityAnnotation& b) {
            return b.char_start == a.char_start && b.char_end == a.char_end && b.entity_name == a.entity_name;
        });
        if (!duplicate) {
            out.push_back(std::move(a));
        }
    }
    return out;
}

void cmd_link(const PipelineConfig& cfg, const std::string& input, const std::string& gazetteer,
              const std::string& annotations, const std::string& out) {
    require_file(input, "input");
    auto texts = load_collection(input);
    std::vector<std::pair<std::string, std::vector<EntityAnnotation>>> records;
    const Analyzer analyzer(cfg.analyzer);
    if (!gazetteer.empty()) {
        require_file(gazetteer, "gazetteer");
        GazetteerLinker linker(Gazetteer::load(gazetteer, analyzer));
        for (const auto& t : texts) {
            try {
                auto mentions = link_windows(t.text, linker, cfg.window, cfg.linker, analyzer);
                if (!mentions.empty()) {
                    records.emplace_back(t.id, std::move(mentions));
                }
            } catch (const Error& e) {
                throw Error(input + ": text '" + t.id + "': " + e.what());
            }
        }
    } else {
        require_file(annotations, "annotations");
        auto ingested = load_annotations(annotations);
        std::set<std::string> used;
        for (const auto& t : texts) {
            auto it = ingested.find(t.id);
            if (it == ingested.end()) {
                continue;
            }
            used.insert(t.id);
            auto list = normalize_ingested(t.id, t.text, it->second);
            if (!list.empty()) {
                records.emplace_back(t.id, std::move(list));
            }
        }
        for (const auto& [id, list] : ingested) {
            if (!used.contains(id)) {
                std::cerr << "entsparse: warning: annotations for unknown id '" << id << "' skipped\n";
            }
        }
    }
    write_annotations(records, out);
    record_config(cfg, out);
    std::cerr << "entsparse: linked " << records.size() << " of " << texts.size() << " texts\n";
}

void cmd_expand(const PipelineConfig& cfg, const std::string& input, const std::string& annotations,
                const std::string& out) {
    require_file(input, "input");
    auto passages = load_collection(input);
    if (cfg.strategy.kind == ExpansionStrategy::Kind::none) {
        fs::copy_file(input, out, fs::copy_options::overwrite_existing);
        record_config(cfg, out);
        return;
    }
    require_file(annotations, "annotations");
    auto ann = load_annotations(annotations);
    if (cfg.strategy.kind == ExpansionStrategy::Kind::hashed_single) {
        std::set<std::string> names;
        for (const auto& [id, list] : ann) {
            for (const auto& a : list) names.insert(a.entity_name);
        }
        check_hash_collisions({names.begin(), names.end()});
    }
    auto expanded = expand_collection(passages, ann, cfg.strategy);
    for (const auto& id : expanded.unknown_ids) {
        std::cerr << "entsparse: warning: annotations for unknown id '" << id << "' skipped\n";
    }
    write_collection(expanded.passages, out);
    record_config(cfg, out);
}

void cmd_index(const PipelineConfig& cfg, const std::string& input, const std::string& dir) {
    require_file(input, "input");
    auto index = InvertedIndex::build(load_collection(input), cfg.analyzer);
    index.save(dir);
    cfg.save(fs::path(dir) / "config.json");
    std::cerr << "entsparse: indexed " << index.num_docs() << " passages, " << index.num_terms() << " terms\n";
}

void cmd_search(const PipelineConfig& cfg, const std::string& dir, const std::string& queries_path,
                const std::string& tag, const std::string& out, unsigned threads) {
    require_file(queries_path, "queries");
    auto index = InvertedIndex::load(dir);
    auto run = batch_search(index, cfg.bm25, load_queries(queries_path), cfg.k, tag, threads);
    write_run(run, out);
    record_config(cfg, out);
}

std::vector<Run> read_runs(const std::vector<std::string>& paths) {
    std::vector<Run> runs;
    for (const auto& p : paths) {
        require_file(p, "run");
        runs.push_back(read_run(p));
    }
    return runs;
}

std::vector<RecallReport> read_reports(const std::vector<std::string>& paths) {
    std::vector<RecallReport> reports;
    for (const auto& p : paths) {
        require_file(p, "report");
        reports.push_back(read_report_csv(p));
    }
    return reports;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Entity-expanded sparse retrieval toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    unsigned threads = 0;
    Overrides o;
    app.add_option("--config", config_path, std::string("pipeline config JSON (default: $") + config_env_var + ")");
    app.add_option("--threads", threads, "worker threads for batch search (0 = all cores)");

    auto add_window = [&](CLI::App* cmd) {
        cmd->add_option("--window", o.window, "window size in tokens");
        cmd->add_option("--overlap", o.overlap, "tokens shared by consecutive windows");
        cmd->add_option("--threshold", o.threshold, "minimum linker score");
    };
    auto add_bm25 = [&](CLI::App* cmd) {
        cmd->add_option("--k1", o.k1, "BM25 k1");
        cmd->add_option("--b", o.b, "BM25 b");
    };

    std::string input, gazetteer, annotations, out, index_dir, queries, qrels, run_path;
    std::string search_tag, fuse_tag, oracle_tag;
    std::vector<std::string> inputs;

    auto* link = app.add_subcommand("link", "annotate texts with linked entities");
    link->add_option("--input", input, "collection or queries TSV")->required();
    auto* gaz_opt = link->add_option("--gazetteer", gazetteer, "alias<TAB>entity<TAB>score dictionary");
    auto* ann_opt = link->add_option("--annotations", annotations, "precomputed annotation JSONL");
    gaz_opt->excludes(ann_opt);
    link->add_option("--out", out, "annotation JSONL")->required();
    add_window(link);

    auto* expand = app.add_subcommand("expand", "append entity terms to texts");
    expand->add_option("--input", input, "collection or queries TSV")->required();
    expand->add_option("--annotations", annotations, "annotation JSONL");
    expand->add_option("--strategy", o.strategy, "none, explicit, hashed, constant:<c> or weighted");
    expand->add_option("--out", out, "expanded TSV")->required();

    auto* index = app.add_subcommand("index", "build a BM25 index");
    index->add_option("--input", input, "collection TSV")->required();
    index->add_option("--index", index_dir, "index directory")->required();
    index->add_flag("--stem", o.stem, "enable Porter stemming");

    auto* search = app.add_subcommand("search", "retrieve top-k passages for each query");
    search->add_option("--index", index_dir, "index directory")->required();
    search->add_option("--queries", queries, "queries TSV")->required();
    search->add_option("--k", o.k, "result depth");
    search->add_option("--tag", search_tag, "run tag")->default_val("bm25");
    search->add_option("--out", out, "TREC run")->required();
    add_bm25(search);

    auto* fuse = app.add_subcommand("fuse", "reciprocal rank fusion of runs");
    fuse->add_option("runs", inputs, "TREC runs")->required();
    fuse->add_option("--rrf-k", o.rrf_k, "RRF constant");
    fuse->add_option("--depth", o.depth, "input and output depth");
    fuse->add_option("--tag", fuse_tag, "run tag")->default_val("rrf");
    fuse->add_option("--out", out, "TREC run")->required();

    auto* orc = app.add_subcommand("oracle", "per-query best-run selection");
    orc->add_option("runs", inputs, "TREC runs")->required();
    orc->add_option("--qrels", qrels, "TREC qrels")->required();
    orc->add_option("--tag", oracle_tag, "run tag")->default_val("oracle");
    orc->add_option("--out", out, "TREC run")->required();

    std::string summary;
    auto* eval = app.add_subcommand("eval", "recall at cutoffs");
    eval->add_option("--run", run_path, "TREC run")->required();
    eval->add_option("--qrels", qrels, "TREC qrels")->required();
    eval->add_option("--cutoffs", o.cutoffs, "comma-separated cutoffs")->delimiter(',');
    eval->add_option("--out", out, "report CSV")->required();
    eval->add_option("--summary", summary, "summary CSV (tag x cutoff)");

    std::string base_report, new_report;
    std::size_t cutoff = 1000;
    auto* compare = app.add_subcommand("compare", "paired t-test between two reports");
    compare->add_option("--base", base_report, "baseline report CSV")->required();
    compare->add_option("--new", new_report, "candidate report CSV")->required();
    compare->add_option("--cutoff", cutoff, "cutoff to compare")->default_val(1000);

    auto* mine = app.add_subcommand("mine-hard", "queries in the worst fraction of several runs");
    mine->add_option("reports", inputs, "report CSVs, one per run")->required();
    mine->add_option("--min-rankers", o.min_rankers, "runs a query must be hard for");
    mine->add_option("--worst-fraction", o.worst_fraction, "fraction of worst queries per run");
    mine->add_option("--cutoff", cutoff, "cutoff whose values rank the queries")->default_val(1000);
    mine->add_option("--out", out, "one query id per line")->required();

    auto* plot = app.add_subcommand("plot", "recall curves from report CSVs");
    plot->add_option("reports", inputs, "report CSVs")->required();
    plot->add_option("--out", out, "output .svg or .csv")->required();

    auto* show = app.add_subcommand("config", "print the effective configuration");

    CLI11_PARSE(app, argc, argv);

    try {
        const PipelineConfig cfg = resolve_config(config_path, o);
        if (link->parsed()) {
            if (gazetteer.empty() && annotations.empty()) {
                throw Error("link needs --gazetteer or --annotations");
            }
            cmd_link(cfg, input, gazetteer, annotations, out);
        } else if (expand->parsed()) {
            cmd_expand(cfg, input, annotations, out);
        } else if (index->parsed()) {
            cmd_index(cfg, input, index_dir);
        } else if (search->parsed()) {
            cmd_search(cfg, index_dir, queries, search_tag, out, threads);
        } else if (fuse->parsed()) {
            write_run(rrf(read_runs(inputs), cfg.fusion, fuse_tag), out);
            record_config(cfg, out);
        } else if (orc->parsed()) {
            require_file(qrels, "qrels");
            write_run(oracle(read_runs(inputs), load_qrels(qrels), oracle_tag), out);
            record_config(cfg, out);
        } else if (eval->parsed()) {
            require_file(run_path, "run");
            require_file(qrels, "qrels");
            auto report = recall_curve(read_run(run_path), load_qrels(qrels), cfg.cutoffs);
            write_report_csv(report, out);
            if (!summary.empty()) {
                write_summary_csv({report}, summary);
            }
            record_config(cfg, out);
            for (std::size_t i = 0; i < report.cutoffs.size(); ++i) {
                std::printf("recall@%zu\t%.4f\n", report.cutoffs[i], report.mean[i]);
            }
        } else if (compare->parsed()) {
            auto reports = read_reports({base_report, new_report});
            auto t = paired_ttest(reports[1].at(cutoff), reports[0].at(cutoff));
            const double base = reports[0].mean_at(cutoff);
            const double cand = reports[1].mean_at(cutoff);
            std::printf("base\t%.4f\nnew\t%.4f\n", base, cand);
            if (base > 0.0) {
                std::printf("improvement\t%.2f%%\n", percent_improvement(cand, base));
            }
            std::printf("t\t%.6f\ndf\t%d\np\t%.6g\n", t.t_statistic, t.degrees_freedom, t.p_value);
        } else if (mine->parsed()) {
            std::vector<std::pair<std::string, PerQueryMetric>> per_run;
            for (auto& r : read_reports(inputs)) {
                per_run.emplace_back(r.tag, r.at(cutoff));
            }
            auto hard = mine_hard_queries(per_run, cfg.hard);
            std::ofstream f(out, std::ios::binary);
            if (!f) {
                throw Error("cannot write " + out);
            }
            for (const auto& qid : hard) {
                f << qid << '\n';
            }
            std::cerr << "entsparse: " << hard.size() << " hard queries\n";
        } else if (plot->parsed()) {
            auto reports = read_reports(inputs);
            if (fs::path(out).extension() == ".csv") {
                write_summary_csv(reports, out);
            } else {
                write_curve_svg(reports, out);
            }
        } else if (show->parsed()) {
            std::cout << cfg.to_json();
        }
    } catch (const std::exception& e) {
        std::cerr << "entsparse: error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
