#pragma once

#include "entsparse/corpus.hpp"
#include "entsparse/run.hpp"

#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace entsparse {

/// Per-query and macro-averaged recall at a list of cutoffs. Only queries
/// with at least one relevant judgment are evaluated.
struct RecallReport {
    std::string tag;
    std::vector<std::size_t> cutoffs;
    std::map<std::string, std::vector<double>> per_query;  // one value per cutoff
    std::vector<double> mean;                              // one value per cutoff

    /// qid -> recall at `cutoff`. Throws if the cutoff is not in the report.
    std::map<std::string, double> at(std::size_t cutoff) const;
    double mean_at(std::size_t cutoff) const;
};

RecallReport recall_curve(const Run& run, const Qrels& qrels, const std::vector<std::size_t>& cutoffs);

inline RecallReport recall_at(const Run& run, const Qrels& qrels, std::size_t cutoff) {
    return recall_curve(run, qrels, {cutoff});
}

struct TTestResult {
    double t_statistic = 0.0;
    int degrees_freedom = 0;
    double p_value = 1.0;
    double mean_difference = 0.0;
};

/// Two-sided paired Student's t-test on d = a - b. With zero variance of d
/// the result is p = 0 when mean(d) != 0 and p = 1 otherwise (t is then
/// +/-infinity or 0).
TTestResult paired_ttest(const std::vector<double>& a, const std::vector<double>& b);

/// Paired test over per-query maps, which must share their key set.
TTestResult paired_ttest(const std::map<std::string, double>& a, const std::map<std::string, double>& b);

/// Regularized incomplete beta function I_x(a, b).
double incomplete_beta(double a, double b, double x);

/// P(|T| >= |t|) for Student's t with `df` degrees of freedom.
double student_t_two_sided(double t, double df);

/// 100 * (value - base) / base. Throws if base <= 0.
double percent_improvement(double value, double base);

struct HardSetSpec {
    double worst_fraction = 0.5;
    int min_rankers = 4;

    void validate() const;
};

using PerQueryMetric = std::map<std::string, double>;

/// Queries that fall within the worst floor(worst_fraction * n) of at least
/// `min_rankers` runs. Within a run, queries are ordered by ascending metric
/// value, then ascending qid.
std::set<std::string> mine_hard_queries(const std::vector<std::pair<std::string, PerQueryMetric>>& per_run,
                                        const HardSetSpec& spec);

/// `metric,cutoff,qid,value` rows: every query at every cutoff, followed
/// by the macro mean under qid `all`.
void write_report_csv(const RecallReport& report, const std::filesystem::path& path,
                      const std::string& metric = "recall");
RecallReport read_report_csv(const std::filesystem::path& path);

/// Wide summary table: `tag,<c1>,<c2>,...` then one row of means per report.
/// All reports must share their cutoffs.
void write_summary_csv(const std::vector<RecallReport>& reports, const std::filesystem::path& path);

/// Recall curves (x = cutoff on a log axis, y = mean recall), one polyline
/// per report.
void write_curve_svg(const std::vector<RecallReport>& reports, const std::filesystem::path& path);

}  // namespace entsparse
