// Plan file format: one `key = value` per line, `#` starts a comment, lists
// are comma separated. See plans/README.md for the key reference.

#include "predtest/error.hpp"
#include "predtest/experiments.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace predtest {

namespace {

struct Entry {
    std::string value;
    std::size_t line = 0;
};

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] void plan_error(std::size_t line, const std::string& key, const std::string& what) {
    std::ostringstream msg;
    msg << "line " << line << ", field '" << key << "': " << what;
    fail(ErrorCode::PlanParseError, msg.str());
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep)) {
        parts.push_back(trim(item));
    }
    return parts;
}

double parse_double(const std::string& key, const Entry& e, const std::string& text) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || text.empty()) {
        plan_error(e.line, key, "expected a number, got '" + text + "'");
    }
    return value;
}

std::uint64_t parse_u64(const std::string& key, const Entry& e, const std::string& text) {
    std::uint64_t value = 0;
    std::string digits = text;
    int base = 10;
    if (digits.size() > 2 && digits[0] == '0' && (digits[1] == 'x' || digits[1] == 'X')) {
        digits = digits.substr(2);
        base = 16;
    }
    const char* first = digits.data();
    const char* last = first + digits.size();
    const auto [ptr, ec] = std::from_chars(first, last, value, base);
    if (ec != std::errc() || ptr != last || digits.empty()) {
        plan_error(e.line, key, "expected an unsigned integer, got '" + text + "'");
    }
    return value;
}

class Fields {
public:
    explicit Fields(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    const Entry& get(const std::string& key) {
        used_.insert(key);
        return entries_.at(key);
    }

    double number(const std::string& key, double fallback) {
        if (!has(key)) return fallback;
        const Entry& e = get(key);
        return parse_double(key, e, e.value);
    }

    std::uint64_t integer(const std::string& key, std::uint64_t fallback) {
        if (!has(key)) return fallback;
        const Entry& e = get(key);
        return parse_u64(key, e, e.value);
    }

    std::vector<double> numbers(const std::string& key, std::vector<double> fallback) {
        if (!has(key)) return fallback;
        const Entry& e = get(key);
        std::vector<double> out;
        for (const auto& part : split(e.value, ',')) {
            out.push_back(parse_double(key, e, part));
        }
        if (out.empty()) plan_error(e.line, key, "list is empty");
        return out;
    }

    std::vector<std::uint64_t> integers(const std::string& key, std::vector<std::uint64_t> fallback) {
        if (!has(key)) return fallback;
        const Entry& e = get(key);
        std::vector<std::uint64_t> out;
        for (const auto& part : split(e.value, ',')) {
            out.push_back(parse_u64(key, e, part));
        }
        if (out.empty()) plan_error(e.line, key, "list is empty");
        return out;
    }

    void reject_unused() const {
        for (const auto& [key, entry] : entries_) {
            if (!used_.count(key)) {
                plan_error(entry.line, key, "unknown key");
            }
        }
    }

private:
    std::map<std::string, Entry> entries_;
    std::set<std::string> used_;
};

DgpSpec parse_custom_dgp(Fields& f) {
    DgpSpec spec;
    spec.p = f.integer("dgp.p", 1);
    const auto fill = [&](const std::string& key, double fallback) {
        auto values = f.numbers(key, std::vector<double>(spec.p, fallback));
        if (values.size() == 1 && spec.p > 1) values.assign(spec.p, values.front());
        if (values.size() != spec.p) {
            plan_error(f.get(key).line, key, "expected " + std::to_string(spec.p) + " values");
        }
        return values;
    };
    spec.alpha = fill("dgp.alpha", 1.0);
    spec.c = fill("dgp.c", 1.0);
    spec.phi0 = fill("dgp.phi0", 0.0);
    spec.beta.assign(spec.p, 0.0);
    spec.mu = f.number("dgp.mu", 0.0);
    spec.rho = f.number("dgp.rho", 0.0);
    spec.theta0 = f.number("dgp.theta0", 1.0);
    spec.theta1 = f.number("dgp.theta1", 0.0);
    if (f.has("dgp.scaling")) {
        const Entry& e = f.get("dgp.scaling");
        if (e.value == "arch") {
            spec.scaling = ErrorScaling::Arch;
        } else if (e.value == "direct") {
            spec.scaling = ErrorScaling::Direct;
        } else {
            plan_error(e.line, "dgp.scaling", "expected 'arch' or 'direct'");
        }
    }
    const auto k = static_cast<Eigen::Index>(spec.p + 1);
    spec.omega = Eigen::MatrixXd::Identity(k, k);
    if (f.has("dgp.omega")) {
        const Entry& e = f.get("dgp.omega");
        const auto rows = split(e.value, ';');
        if (static_cast<Eigen::Index>(rows.size()) != k) {
            plan_error(e.line, "dgp.omega", "expected " + std::to_string(k) + " rows separated by ';'");
        }
        for (Eigen::Index i = 0; i < k; ++i) {
            const auto cols = split(rows[static_cast<std::size_t>(i)], ',');
            if (static_cast<Eigen::Index>(cols.size()) != k) {
                plan_error(e.line, "dgp.omega", "row " + std::to_string(i) + " has wrong length");
            }
            for (Eigen::Index j = 0; j < k; ++j) {
                spec.omega(i, j) = parse_double("dgp.omega", e, cols[static_cast<std::size_t>(j)]);
            }
        }
    }
    spec.label = "custom";
    return spec;
}

} // namespace

ExperimentPlan parse_plan(std::istream& in) {
    std::map<std::string, Entry> entries;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            plan_error(line_no, line, "expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) plan_error(line_no, key, "missing key");
        if (entries.count(key)) plan_error(line_no, key, "duplicate key");
        entries.emplace(key, Entry{value, line_no});
    }

    Fields f(std::move(entries));
    ExperimentPlan plan;

    if (!f.has("dgp")) plan_error(0, "dgp", "required key missing");
    const Entry& dgp_entry = f.get("dgp");
    const bool custom = dgp_entry.value == "custom";
    if (custom) {
        plan.dgp = parse_custom_dgp(f);
    } else {
        PresetRef ref;
        try {
            ref.name = parse_preset(dgp_entry.value);
        } catch (const Error& e) {
            plan_error(dgp_entry.line, "dgp", e.what());
        }
        ref.sigma_zv = f.number("sigma_zv", -0.90);
        ref.phi0 = f.number("phi0", 0.0);
        plan.dgp = ref;
    }
    plan.label = f.has("label") ? f.get("label").value : dgp_entry.value;
    plan.alpha_grid = f.numbers("alpha_grid", {});

    std::vector<std::size_t> n_grid;
    for (auto n : f.integers("n_grid", {500})) n_grid.push_back(static_cast<std::size_t>(n));
    plan.n_grid = n_grid;
    plan.p0_grid = f.numbers("p0_grid", {0.40});
    plan.beta_grid = f.numbers("beta_grid", {0.0});

    StatisticConfig cfg;
    cfg.alpha = f.number("level", 0.10);
    const std::string statistic = f.has("statistic") ? f.get("statistic").value : "growing";
    if (statistic == "growing") {
        cfg.mode = StatisticMode::GrowingM_Normal;
    } else if (statistic == "fixed") {
        cfg.mode = StatisticMode::FixedM_ChiSquare;
    } else {
        plan_error(f.get("statistic").line, "statistic", "expected 'growing' or 'fixed'");
    }
    if (f.has("m") && f.has("mn_delta")) {
        plan_error(f.get("m").line, "m", "'m' and 'mn_delta' are mutually exclusive");
    }
    if (f.has("m")) {
        cfg.M = static_cast<std::size_t>(f.integer("m", 5));
        cfg.mn_rule.reset();
    } else {
        cfg.mn_rule = FloorPowRule{f.number("mn_delta", 1.0 / 3.0)};
    }
    plan.cfg_template = cfg;

    plan.replications = static_cast<std::size_t>(f.integer("replications", 2000));
    plan.master_seed = f.integer("seed", 0);
    plan.workers = static_cast<std::size_t>(f.integer("workers", 1));
    plan.burn_in = static_cast<std::size_t>(f.integer("burn_in", 200));
    f.reject_unused();

    try {
        plan.validate();
    } catch (const Error& e) {
        fail(ErrorCode::PlanParseError, std::string("invalid plan: ") + e.what());
    }
    return plan;
}

ExperimentPlan load_plan(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        fail(ErrorCode::FileNotFound, "cannot open plan file '" + path + "'");
    }
    return parse_plan(in);
}

} // namespace predtest
