#include "agentctl/eval/report.hpp"

#include <cstdio>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "agentctl/agents/plot.hpp"
#include "agentctl/error.hpp"

namespace agentctl::eval {

namespace {

using metrics::MetricKind;

std::string fmt(double v, const char* spec) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::optional<double> cell(const CategoryReport& r, MetricKind k) {
    if (k != MetricKind::T) return r.metrics.get(k);
    if (auto t = r.metrics.get(MetricKind::T)) return t;
    try {
        return metrics::total_score(r.metrics);
    } catch (const Error&) {
        return std::nullopt;
    }
}

std::vector<std::string> split(std::string_view line, char sep) {
    std::vector<std::string> out(1);
    for (char c : line) {
        if (c == sep) {
            out.emplace_back();
        } else if (c != '\r') {
            out.back() += c;
        }
    }
    return out;
}

}  // namespace

std::optional<ReportFormat> report_format_from_string(std::string_view s) noexcept {
    if (s == "text") return ReportFormat::Text;
    if (s == "csv") return ReportFormat::Csv;
    if (s == "chartdata") return ReportFormat::ChartData;
    return std::nullopt;
}

std::vector<std::string> report_columns() {
    std::vector<std::string> cols;
    for (MetricKind k : metrics::kAllKinds) cols.push_back("M_" + std::string(metrics::to_string(k)));
    cols.emplace_back("Time");
    cols.emplace_back("Money");
    return cols;
}

std::string render_report(const std::vector<CategoryReport>& reports, ReportFormat format) {
    if (reports.empty()) throw Error(ErrorCode::ValidationError, "nothing to report");
    const auto cols = report_columns();
    std::ostringstream os;

    switch (format) {
        case ReportFormat::Text: {
            std::size_t name_w = 8;
            for (const auto& r : reports) name_w = std::max(name_w, r.name.size());
            os << std::left << std::setw(static_cast<int>(name_w)) << "Category";
            for (const auto& c : cols) os << "  " << std::right << std::setw(7) << c;
            os << '\n';
            for (const auto& r : reports) {
                os << std::left << std::setw(static_cast<int>(name_w)) << r.name;
                for (MetricKind k : metrics::kAllKinds) {
                    const auto v = cell(r, k);
                    os << "  " << std::right << std::setw(7) << (v ? fmt(*v, "%.2f") : "-");
                }
                os << "  " << std::setw(7) << fmt(r.metrics.wall_seconds, "%.2f");
                os << "  " << std::setw(7) << fmt(r.metrics.cost, "%.4f") << '\n';
            }
            break;
        }
        case ReportFormat::Csv: {
            os << "category,runs";
            for (const auto& c : cols) os << ',' << c;
            os << ",tokens\n";
            for (const auto& r : reports) {
                os << r.name << ',' << r.metrics.tau;
                for (MetricKind k : metrics::kAllKinds) {
                    os << ',';
                    if (auto v = cell(r, k)) os << fmt(*v, "%.17g");
                }
                os << ',' << fmt(r.metrics.wall_seconds, "%.17g") << ',' << fmt(r.metrics.cost, "%.17g") << ','
                   << fmt(r.metrics.tokens, "%.17g") << '\n';
            }
            break;
        }
        case ReportFormat::ChartData: {
            nlohmann::json ticks = nlohmann::json::array();
            for (const auto& r : reports) ticks.push_back(r.name);
            nlohmann::json series = nlohmann::json::array();
            for (MetricKind k : metrics::kAllKinds) {
                nlohmann::json xs = nlohmann::json::array(), ys = nlohmann::json::array();
                for (std::size_t i = 0; i < reports.size(); ++i) {
                    if (auto v = cell(reports[i], k)) {
                        xs.push_back(i);
                        ys.push_back(*v);
                    }
                }
                series.push_back({{"label", "M_" + std::string(metrics::to_string(k))}, {"x", xs}, {"y", ys},
                                  {"mode", "bar"}});
            }
            nlohmann::json payload = {
                {"kind", "bar"},
                {"title", "Evaluation scores"},
                {"series", series},
                {"axes", {{"x_label", "Category"}, {"y_label", "Score"}, {"x_scale", "linear"}, {"x_ticks", ticks}}},
            };
            agents::validate_plot_payload(payload);
            os << payload.dump(2) << '\n';
            break;
        }
    }
    return os.str();
}

std::vector<CategoryReport> parse_csv_report(std::string_view csv) {
    std::vector<CategoryReport> out;
    std::istringstream in{std::string(csv)};
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        if (header) {
            header = false;
            continue;
        }
        const auto f = split(line, ',');
        if (f.size() != 2 + metrics::kAllKinds.size() + 3) {
            throw Error(ErrorCode::ValidationError, "csv report: wrong field count in '" + line + "'");
        }
        CategoryReport r;
        r.name = f[0];
        r.metrics.tau = std::stoul(f[1]);
        for (std::size_t i = 0; i < metrics::kAllKinds.size(); ++i) {
            if (!f[2 + i].empty()) r.metrics.set(metrics::kAllKinds[i], std::stod(f[2 + i]));
        }
        const std::size_t u = 2 + metrics::kAllKinds.size();
        r.metrics.wall_seconds = std::stod(f[u]);
        r.metrics.cost = std::stod(f[u + 1]);
        r.metrics.tokens = std::stod(f[u + 2]);
        r.runs = r.metrics.tau;
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace agentctl::eval
