#include "predtest/error.hpp"
#include "predtest/experiments.hpp"

#include <json.hpp>

#include <cstdio>
#include <sstream>

namespace predtest {

namespace {

using nlohmann::json;

std::string six_significant(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", value);
    return buf;
}

std::string join_alpha(const std::vector<double>& alpha) {
    std::string out;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (i) out += ';';
        out += six_significant(alpha[i]);
    }
    return out;
}

std::string csv_field(const std::string& text) {
    if (text.find_first_of(",\"\n") == std::string::npos) {
        return text;
    }
    std::string quoted = "\"";
    for (char ch : text) {
        if (ch == '"') quoted += '"';
        quoted += ch;
    }
    return quoted + '"';
}

std::string to_csv(const ExperimentReport& report) {
    std::ostringstream out;
    out << "dgp,n,p0,alpha,beta,rejection_rate,mc_se,reps\n";
    for (const auto& cell : report.cells) {
        out << csv_field(cell.dgp_label) << ',' << cell.n << ',' << six_significant(cell.p0) << ','
            << join_alpha(cell.alpha_vec) << ',' << six_significant(cell.beta) << ','
            << six_significant(cell.rejection_rate) << ',' << six_significant(cell.mc_se) << ','
            << cell.replications << '\n';
    }
    return out.str();
}

std::string to_json(const ExperimentReport& report, const ExportOptions& options) {
    json cells = json::array();
    for (const auto& cell : report.cells) {
        cells.push_back({{"dgp", cell.dgp_label},
                         {"n", cell.n},
                         {"p0", cell.p0},
                         {"alpha", cell.alpha_vec},
                         {"beta", cell.beta},
                         {"rejection_rate", cell.rejection_rate},
                         {"mc_se", cell.mc_se},
                         {"reps", cell.replications},
                         {"degenerate", cell.degenerate},
                         {"flagged", cell.flagged}});
    }
    json metadata = {{"master_seed", report.metadata.master_seed},
                     {"software_version", report.metadata.software_version}};
    if (options.include_timing) {
        metadata["wall_time"] = report.metadata.wall_time_seconds;
    }
    const json doc = {{"cells", std::move(cells)}, {"metadata", std::move(metadata)}};
    return doc.dump(2) + "\n";
}

} // namespace

std::string export_report(const ExperimentReport& report, ReportFormat format,
                          const ExportOptions& options) {
    if (report.cells.empty()) {
        fail(ErrorCode::EmptyReport, "report has no cells to export");
    }
    return format == ReportFormat::CSV ? to_csv(report) : to_json(report, options);
}

ExperimentReport parse_report_json(const std::string& text) {
    ExperimentReport report;
    try {
        const json doc = json::parse(text);
        for (const auto& c : doc.at("cells")) {
            ReportCell cell;
            cell.dgp_label = c.at("dgp").get<std::string>();
            cell.n = c.at("n").get<std::size_t>();
            cell.p0 = c.at("p0").get<double>();
            cell.alpha_vec = c.at("alpha").get<std::vector<double>>();
            cell.beta = c.at("beta").get<double>();
            cell.rejection_rate = c.at("rejection_rate").get<double>();
            cell.mc_se = c.at("mc_se").get<double>();
            cell.replications = c.at("reps").get<std::size_t>();
            cell.degenerate = c.value("degenerate", std::size_t{0});
            cell.flagged = c.value("flagged", false);
            report.cells.push_back(std::move(cell));
        }
        const auto& meta = doc.at("metadata");
        report.metadata.master_seed = meta.at("master_seed").get<std::uint64_t>();
        report.metadata.software_version = meta.at("software_version").get<std::string>();
        report.metadata.wall_time_seconds = meta.value("wall_time", 0.0);
    } catch (const json::exception& e) {
        fail(ErrorCode::InvalidArgument, std::string("malformed report JSON: ") + e.what());
    }
    return report;
}

} // namespace predtest
