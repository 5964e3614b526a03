#include "entsparse/eval.hpp"

#include "entsparse/error.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <unordered_set>

namespace entsparse {
namespace {

constexpr const char* csv_header = "metric,cutoff,qid,value";
constexpr const char* mean_qid = "all";

std::string format_double(double v) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma - start));
        if (comma == std::string::npos) {
            return out;
        }
        start = comma + 1;
    }
}

// Continued fraction for the incomplete beta function (modified Lentz).
double beta_continued_fraction(double a, double b, double x) {
    constexpr int max_iterations = 10000;
    constexpr double eps = 1e-16;
    constexpr double tiny = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iterations; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) {
            return h;
        }
    }
    throw Error("incomplete beta continued fraction did not converge");
}

}  // namespace

std::map<std::string, double> RecallReport::at(std::size_t cutoff) const {
    auto it = std::find(cutoffs.begin(), cutoffs.end(), cutoff);
    if (it == cutoffs.end()) {
        throw Error("cutoff " + std::to_string(cutoff) + " not in report");
    }
    const auto col = static_cast<std::size_t>(it - cutoffs.begin());
    std::map<std::string, double> out;
    for (const auto& [qid, values] : per_query) {
        out.emplace(qid, values[col]);
    }
    return out;
}

double RecallReport::mean_at(std::size_t cutoff) const {
    auto it = std::find(cutoffs.begin(), cutoffs.end(), cutoff);
    if (it == cutoffs.end()) {
        throw Error("cutoff " + std::to_string(cutoff) + " not in report");
    }
    return mean[static_cast<std::size_t>(it - cutoffs.begin())];
}

RecallReport recall_curve(const Run& run, const Qrels& qrels, const std::vector<std::size_t>& cutoffs) {
    if (cutoffs.empty()) {
        throw Error("at least one cutoff is required");
    }
    for (std::size_t i = 0; i < cutoffs.size(); ++i) {
        if (cutoffs[i] == 0 || (i > 0 && cutoffs[i] <= cutoffs[i - 1])) {
            throw Error("cutoffs must be positive and strictly increasing");
        }
    }
    RecallReport report;
    report.tag = run.tag();
    report.cutoffs = cutoffs;
    report.mean.assign(cutoffs.size(), 0.0);

    for (const auto& qid : qrels.judged_queries()) {
        const auto relevant = qrels.relevant(qid);
        const std::unordered_set<std::string> wanted(relevant.begin(), relevant.end());
        std::vector<std::size_t> positions;  // 1-based ranks of relevant hits
        const auto& ranking = run.ranking(qid);
        for (std::size_t i = 0; i < ranking.size(); ++i) {
            if (wanted.contains(ranking[i].passage_id)) {
                positions.push_back(i + 1);
            }
        }
        std::vector<double> values;
        values.reserve(cutoffs.size());
        for (auto c : cutoffs) {
            auto found = std::upper_bound(positions.begin(), positions.end(), c) - positions.begin();
            values.push_back(static_cast<double>(found) / static_cast<double>(relevant.size()));
        }
        report.per_query.emplace(qid, std::move(values));
    }

    if (!report.per_query.empty()) {
        for (std::size_t c = 0; c < cutoffs.size(); ++c) {
            double sum = 0.0;
            for (const auto& [qid, values] : report.per_query) {
                sum += values[c];
            }
            report.mean[c] = sum / static_cast<double>(report.per_query.size());
        }
    }
    return report;
}

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0 && b > 0.0)) {
        throw Error("incomplete beta requires a, b > 0");
    }
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double front =
        std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x));
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_continued_fraction(a, b, x) / a;
    }
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_sided(double t, double df) {
    if (std::isinf(t)) {
        return 0.0;
    }
    return incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
}

TTestResult paired_ttest(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) {
        throw Error("paired t-test needs equally sized samples");
    }
    const std::size_t n = a.size();
    if (n < 2) {
        throw Error("paired t-test needs at least 2 pairs");
    }
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) {
        d[i] = a[i] - b[i];
    }
    const double mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(n);
    double ss = 0.0;
    for (double v : d) {
        ss += (v - mean) * (v - mean);
    }
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));

    TTestResult r;
    r.degrees_freedom = static_cast<int>(n - 1);
    r.mean_difference = mean;
    if (sd == 0.0) {
        if (mean == 0.0) {
            r.t_statistic = 0.0;
            r.p_value = 1.0;
        } else {
            r.t_statistic = std::copysign(std::numeric_limits<double>::infinity(), mean);
            r.p_value = 0.0;
        }
        return r;
    }
    r.t_statistic = mean / (sd / std::sqrt(static_cast<double>(n)));
    r.p_value = student_t_two_sided(r.t_statistic, r.degrees_freedom);
    return r;
}

TTestResult paired_ttest(const std::map<std::string, double>& a, const std::map<std::string, double>& b) {
    if (a.size() != b.size()) {
        throw Error("paired t-test: query sets differ in size");
    }
    std::vector<double> va;
    std::vector<double> vb;
    for (auto ia = a.begin(), ib = b.begin(); ia != a.end(); ++ia, ++ib) {
        if (ia->first != ib->first) {
            throw Error("paired t-test: query '" + ia->first + "' has no partner");
        }
        va.push_back(ia->second);
        vb.push_back(ib->second);
    }
    return paired_ttest(va, vb);
}

double percent_improvement(double value, double base) {
    if (!(base > 0.0)) {
        throw Error("percent improvement needs a positive base");
    }
    return 100.0 * (value - base) / base;
}

void HardSetSpec::validate() const {
    if (!(worst_fraction > 0.0 && worst_fraction <= 1.0)) {
        throw Error("worst_fraction must lie in (0, 1]");
    }
    if (min_rankers < 1) {
        throw Error("min_rankers must be >= 1");
    }
}

std::set<std::string> mine_hard_queries(const std::vector<std::pair<std::string, PerQueryMetric>>& per_run,
                                        const HardSetSpec& spec) {
    spec.validate();
    if (per_run.size() < static_cast<std::size_t>(spec.min_rankers)) {
        throw Error("min_rankers (" + std::to_string(spec.min_rankers) + ") exceeds the number of runs (" +
                    std::to_string(per_run.size()) + ")");
    }
    std::map<std::string, int> votes;
    for (const auto& [tag, metric] : per_run) {
        std::vector<std::pair<double, std::string>> ordered;
        ordered.reserve(metric.size());
        for (const auto& [qid, value] : metric) {
            ordered.emplace_back(value, qid);
        }
        std::sort(ordered.begin(), ordered.end());
        const auto worst =
            static_cast<std::size_t>(std::floor(spec.worst_fraction * static_cast<double>(ordered.size())));
        for (std::size_t i = 0; i < worst; ++i) {
            ++votes[ordered[i].second];
        }
    }
    std::set<std::string> hard;
    for (const auto& [qid, count] : votes) {
        if (count >= spec.min_rankers) {
            hard.insert(qid);
        }
    }
    return hard;
}

void write_report_csv(const RecallReport& report, const std::filesystem::path& path, const std::string& metric) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    out << csv_header << '\n';
    for (std::size_t c = 0; c < report.cutoffs.size(); ++c) {
        for (const auto& [qid, values] : report.per_query) {
            if (qid.find(',') != std::string::npos) {
                throw Error("query id '" + qid + "' contains a comma");
            }
            out << metric << ',' << report.cutoffs[c] << ',' << qid << ',' << format_double(values[c]) << '\n';
        }
        out << metric << ',' << report.cutoffs[c] << ',' << mean_qid << ',' << format_double(report.mean[c]) << '\n';
    }
    if (!out) {
        throw Error("write failed: " + path.string());
    }
}

RecallReport read_report_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open report " + path.string());
    }
    std::string line;
    if (!std::getline(in, line) || line != csv_header) {
        throw ParseError(path.string(), 1, std::string("expected header '") + csv_header + "'");
    }
    std::map<std::size_t, std::map<std::string, double>> columns;
    std::map<std::size_t, double> means;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        auto f = split_commas(line);
        if (f.size() != 4) {
            throw ParseError(path.string(), line_no, "expected 4 comma-separated fields");
        }
        std::size_t cutoff = 0;
        double value = 0.0;
        auto [p1, e1] = std::from_chars(f[1].data(), f[1].data() + f[1].size(), cutoff);
        auto [p2, e2] = std::from_chars(f[3].data(), f[3].data() + f[3].size(), value);
        if (e1 != std::errc() || p1 != f[1].data() + f[1].size() || cutoff == 0) {
            throw ParseError(path.string(), line_no, "bad cutoff '" + f[1] + "'");
        }
        if (e2 != std::errc() || p2 != f[3].data() + f[3].size()) {
            throw ParseError(path.string(), line_no, "bad value '" + f[3] + "'");
        }
        if (f[2] == mean_qid) {
            means[cutoff] = value;
        } else {
            columns[cutoff][f[2]] = value;
        }
    }

    RecallReport report;
    report.tag = path.stem().string();
    for (const auto& [cutoff, values] : columns) {
        report.cutoffs.push_back(cutoff);
    }
    for (const auto& [cutoff, value] : means) {
        if (!columns.contains(cutoff)) {
            report.cutoffs.push_back(cutoff);
        }
    }
    std::sort(report.cutoffs.begin(), report.cutoffs.end());
    for (auto cutoff : report.cutoffs) {
        const auto& col = columns[cutoff];
        for (const auto& [qid, value] : col) {
            report.per_query[qid];
        }
    }
    for (auto& [qid, values] : report.per_query) {
        for (auto cutoff : report.cutoffs) {
            const auto& col = columns[cutoff];
            auto it = col.find(qid);
            if (it == col.end()) {
                throw Error(path.string() + ": query '" + qid + "' missing at cutoff " + std::to_string(cutoff));
            }
            values.push_back(it->second);
        }
    }
    for (auto cutoff : report.cutoffs) {
        if (auto it = means.find(cutoff); it != means.end()) {
            report.mean.push_back(it->second);
        } else {
            const auto& col = columns[cutoff];
            double sum = 0.0;
            for (const auto& [qid, value] : col) sum += value;
            report.mean.push_back(col.empty() ? 0.0 : sum / static_cast<double>(col.size()));
        }
    }
    return report;
}

void write_summary_csv(const std::vector<RecallReport>& reports, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    if (reports.empty()) {
        out << "tag\n";
        return;
    }
    const auto& cutoffs = reports.front().cutoffs;
    out << "tag";
    for (auto c : cutoffs) {
        out << ',' << c;
    }
    out << '\n';
    for (const auto& r : reports) {
        if (r.cutoffs != cutoffs) {
            throw Error("report '" + r.tag + "' uses different cutoffs");
        }
        out << r.tag;
        for (double m : r.mean) {
            out << ',' << format_double(m);
        }
        out << '\n';
    }
}

void write_curve_svg(const std::vector<RecallReport>& reports, const std::filesystem::path& path) {
    constexpr double width = 640;
    constexpr double height = 420;
    constexpr double left = 60;
    constexpr double right = 170;
    constexpr double top = 20;
    constexpr double bottom = 50;
    constexpr std::array<const char*, 8> palette = {"#d62728", "#2ca02c", "#1f77b4", "#ff7f0e",
                                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

    std::size_t lo = std::numeric_limits<std::size_t>::max();
    std::size_t hi = 0;
    for (const auto& r : reports) {
        for (auto c : r.cutoffs) {
            lo = std::min(lo, c);
            hi = std::max(hi, c);
        }
    }
    if (hi == 0) {
        lo = hi = 1;
    }
    const double log_lo = std::log10(static_cast<double>(lo));
    const double log_hi = std::log10(static_cast<double>(hi));
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;
    auto x_of = [&](std::size_t c) {
        if (log_hi == log_lo) return left + plot_w / 2;
        return left + plot_w * (std::log10(static_cast<double>(c)) - log_lo) / (log_hi - log_lo);
    };
    auto y_of = [&](double v) { return top + plot_h * (1.0 - v); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w << "\" y2=\""
        << top + plot_h << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + plot_h
        << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 10; i += 2) {
        double v = i / 10.0;
        svg << "<text x=\"" << left - 8 << "\" y=\"" << y_of(v) + 4 << "\" text-anchor=\"end\">" << v << "</text>\n";
    }
    std::set<std::size_t> ticks;
    for (const auto& r : reports) ticks.insert(r.cutoffs.begin(), r.cutoffs.end());
    for (auto c : ticks) {
        svg << "<text x=\"" << x_of(c) << "\" y=\"" << top + plot_h + 16 << "\" text-anchor=\"middle\">" << c
            << "</text>\n";
    }
    svg << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 12 << "\" text-anchor=\"middle\">cutoff</text>\n";
    svg << "<text x=\"16\" y=\"" << top + plot_h / 2 << "\" transform=\"rotate(-90 16 " << top + plot_h / 2
        << ")\" text-anchor=\"middle\">recall</text>\n";

    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& r = reports[i];
        const char* color = palette[i % palette.size()];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (std::size_t c = 0; c < r.cutoffs.size(); ++c) {
            svg << (c ? " " : "") << x_of(r.cutoffs[c]) << ',' << y_of(r.mean[c]);
        }
        svg << "\"/>\n";
        const double ly = top + 14 + 16 * static_cast<double>(i);
        svg << "<line x1=\"" << width - right + 10 << "\" y1=\"" << ly - 4 << "\" x2=\"" << width - right + 30
            << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        std::string label;
        for (char ch : r.tag) {
            switch (ch) {
                case '<': label += "&lt;"; break;
                case '>': label += "&gt;"; break;
                case '&': label += "&amp;"; break;
                default: label += ch;
            }
        }
        svg << "<text x=\"" << width - right + 36 << "\" y=\"" << ly << "\">" << label << "</text>\n";
    }
    svg << "</svg>\n";

    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    out << svg.str();
}

}  // namespace entsparse
