// predtest: split-sample predictability tests from the command line.

#include "predtest/csv_input.hpp"
#include "predtest/error.hpp"
#include "predtest/experiments.hpp"
#include "predtest/theory.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace predtest;

constexpr int kExitError = 2;
constexpr int kExitFlagged = 3;

std::uint64_t parse_seed(const std::string& text) {
    std::string digits = text;
    int base = 10;
    if (digits.size() > 2 && digits[0] == '0' && (digits[1] == 'x' || digits[1] == 'X')) {
        digits = digits.substr(2);
        base = 16;
    }
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value, base);
    if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size()) {
        fail(ErrorCode::InvalidArgument, "seed must be a 64-bit decimal or 0x-prefixed hex integer");
    }
    return value;
}

std::vector<std::string> split_names(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> out;
    for (const auto& item : split_names(text)) {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (ec != std::errc() || ptr != item.data() + item.size()) {
            fail(ErrorCode::InvalidArgument, "not a number: '" + item + "'");
        }
        out.push_back(v);
    }
    return out;
}

// "lo:hi:step" or a single value.
std::vector<double> parse_grid(const std::string& text) {
    const auto parts = [&] {
        std::vector<std::string> out;
        std::stringstream in(text);
        std::string item;
        while (std::getline(in, item, ':')) out.push_back(item);
        return out;
    }();
    std::vector<double> values;
    for (const auto& part : parts) {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
        if (part.empty() || ec != std::errc() || ptr != part.data() + part.size() || !std::isfinite(v)) {
            fail(ErrorCode::InvalidGrid, "grid must be 'lo:hi:step' or a single number");
        }
        values.push_back(v);
    }
    if (values.size() == 1) return values;
    if (values.size() != 3) {
        fail(ErrorCode::InvalidGrid, "grid must be 'lo:hi:step' or a single number");
    }
    const double lo = values[0], hi = values[1], step = values[2];
    if (!(step > 0.0) || hi < lo) {
        fail(ErrorCode::InvalidGrid, "grid needs lo <= hi and step > 0");
    }
    const double count = std::floor((hi - lo) / step + 1e-9) + 1.0;
    if (count > 1e6) {
        fail(ErrorCode::InvalidGrid, "grid has more than 10^6 points");
    }
    std::vector<double> grid;
    for (std::size_t i = 0; i < static_cast<std::size_t>(count); ++i) {
        grid.push_back(lo + static_cast<double>(i) * step);
    }
    return grid;
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) {
        fail(ErrorCode::FileNotFound, "cannot write '" + path + "'");
    }
}

ReportFormat parse_format(const std::string& text) {
    return text == "json" ? ReportFormat::JSON : ReportFormat::CSV;
}

struct StatisticFlags {
    double p0 = 0.40;
    std::size_t m = 0;
    double mn_delta = 0.0;
    double alpha = 0.10;
    CLI::Option* m_opt = nullptr;
    CLI::Option* delta_opt = nullptr;

    void attach(CLI::App* app) {
        app->add_option("--p0", p0, "Bernoulli success probability")->capture_default_str();
        m_opt = app->add_option("--m", m, "fixed number of Bernoulli draws (chi-square reference)");
        delta_opt = app->add_option("--mn-delta", mn_delta,
                                    "growing draws M_n = floor((n/p0)^delta) (normal reference)");
        m_opt->excludes(delta_opt);
        app->add_option("--alpha", alpha, "nominal level")->capture_default_str();
    }

    StatisticConfig config() const {
        StatisticConfig cfg;
        cfg.p0 = p0;
        cfg.alpha = alpha;
        if (delta_opt->count() > 0) {
            cfg.mode = StatisticMode::GrowingM_Normal;
            cfg.mn_rule = FloorPowRule{mn_delta};
        } else {
            cfg.mode = StatisticMode::FixedM_ChiSquare;
            cfg.M = m_opt->count() > 0 ? m : 5;
        }
        cfg.validate();
        return cfg;
    }
};

std::string outcome_json(const TestOutcome& out, const StatisticConfig& cfg) {
    nlohmann::json draws = nlohmann::json::array();
    for (const auto& d : out.per_draw) {
        draws.push_back({{"s_n", d.s_n}, {"d_bar", d.d_bar}, {"s_d2", d.s_d2}});
    }
    const nlohmann::json doc = {
        {"s_m", out.s_m},
        {"q", out.q},
        {"m", out.df_or_mn},
        {"p0", cfg.p0},
        {"alpha", cfg.alpha},
        {"reference", cfg.mode == StatisticMode::FixedM_ChiSquare ? "chi-square" : "normal"},
        {"p_value", out.p_value},
        {"reject", out.reject},
        {"seed", {{"master", out.seed.master_seed}, {"stream", out.seed.stream_id}}},
        {"draws", draws},
        {"software_version", software_version()}};
    return doc.dump(2) + "\n";
}

int cmd_test(const std::string& input, const std::string& y_col, const std::string& x_cols,
             const std::string& restrict_spec, const StatisticFlags& stat,
             const std::string& seed_text, const std::string& out_path) {
    const StatisticConfig cfg = stat.config();
    const std::uint64_t seed = parse_seed(seed_text);
    const auto names = split_names(x_cols);
    const CsvTable table = read_csv_file(input);
    const RegressionData data = lagged_regression(table, y_col, names);

    Restriction restriction = Restriction::all(names.size());
    if (restrict_spec != "all") {
        std::vector<std::size_t> idx;
        for (const auto& name : split_names(restrict_spec)) {
            const auto it = std::find(names.begin(), names.end(), name);
            if (it == names.end()) {
                fail(ErrorCode::ColumnMissing, "restricted predictor '" + name + "' is not among --x");
            }
            idx.push_back(static_cast<std::size_t>(it - names.begin()));
        }
        restriction = Restriction::select(names.size(), idx);
    }

    const TestOutcome out = run_test(data, restriction, cfg, SeedSpec{seed, 0});
    std::printf("n        %zu\n", data.n());
    std::printf("S_M      %.10g\n", out.s_m);
    std::printf("Q        %.10g\n", out.q);
    std::printf("M        %zu\n", out.df_or_mn);
    std::printf("p-value  %.10g\n", out.p_value);
    std::printf("decision %s at level %g\n", out.reject ? "reject" : "do not reject", cfg.alpha);
    std::printf("seed     %llu\n", static_cast<unsigned long long>(seed));
    if (!out_path.empty()) {
        write_output(out_path, outcome_json(out, cfg));
    }
    return 0;
}

int cmd_simulate(const std::string& plan_path, const std::string& out_path,
                 std::size_t workers, bool workers_set, const std::string& format) {
    ExperimentPlan plan = load_plan(plan_path);
    if (workers_set) plan.workers = workers;
    plan.validate();
    const ExperimentReport report = run_plan(plan, [](const CellProgress& p) {
        std::fprintf(stderr, "[%zu/%zu] %s n=%zu p0=%g beta=%g rate=%.4f\n", p.cell_index + 1,
                     p.cell_count, p.cell->dgp_label.c_str(), p.cell->n, p.cell->p0,
                     p.cell->beta, p.cell->rejection_rate);
    });
    std::fprintf(stderr, "wall time %.2f s\n", report.metadata.wall_time_seconds);
    write_output(out_path, export_report(report, parse_format(format)));
    if (report.any_flagged()) {
        std::fprintf(stderr, "warning[DegenerateVariance]: cells flagged for excess degenerate draws\n");
        return kExitFlagged;
    }
    return 0;
}

int cmd_power(const std::string& dgp_name, std::size_t n, double sigma_zv, double phi0,
              const std::string& betas, const StatisticFlags& stat, std::size_t reps,
              const std::string& seed_text, std::size_t workers, const std::string& out_path) {
    PresetArgs args;
    args.n = n;
    args.sigma_zv = sigma_zv;
    args.phi0 = phi0;
    const DgpSpec spec = preset(parse_preset(dgp_name), args);
    const auto curve = power_curve_empirical(spec, parse_number_list(betas), stat.config(), reps,
                                             SeedSpec{parse_seed(seed_text), 0}, workers);
    std::ostringstream csv;
    csv << "beta,rejection_rate\n";
    char buf[64];
    for (const auto& pt : curve) {
        std::snprintf(buf, sizeof buf, "%.6g,%.6g\n", pt.beta, pt.rejection_rate);
        csv << buf;
    }
    write_output(out_path, csv.str());
    return 0;
}

int cmd_theory(const std::string& curve, const std::string& grid_text, double lambda,
               double alpha, const std::string& out_path) {
    const auto grid = parse_grid(grid_text);
    std::ostringstream csv;
    char buf[96];
    if (curve == "power_vs_m") {
        csv << "m,power\n";
        for (double m_value : grid) {
            if (m_value < 1.0 || m_value != std::floor(m_value)) {
                fail(ErrorCode::InvalidGrid, "power_vs_m needs integer M >= 1");
            }
            const auto m = static_cast<std::size_t>(m_value);
            std::snprintf(buf, sizeof buf, "%zu,%.10g\n", m,
                          asymptotic_power(lambda * static_cast<double>(m), m, alpha));
            csv << buf;
        }
    } else {
        double (*fn)(double) = nullptr;
        if (curve == "f") fn = f_p0;
        else if (curve == "g") fn = g_p0;
        else if (curve == "elasticity") fn = elasticity;
        else fail(ErrorCode::InvalidArgument, "unknown curve '" + curve + "'");
        csv << "p0," << curve << "\n";
        for (double p0 : grid) {
            if (!(p0 > 0.0 && p0 < 1.0)) {
                fail(ErrorCode::InvalidGrid, "p0 grid must lie inside (0, 1)");
            }
            // The pole at one-half is written as inf rather than aborting the curve.
            double value = 0.0;
            if (std::abs(p0 - 0.5) < 1e-12 && curve != "g") {
                value = curve == "f" ? HUGE_VAL : -HUGE_VAL;
            } else {
                value = fn(p0);
            }
            std::snprintf(buf, sizeof buf, "%.10g,%.12g\n", p0, value);
            csv << buf;
        }
    }
    write_output(out_path, csv.str());
    return 0;
}

int cmd_presets() {
    for (Preset p : all_presets()) {
        const DgpSpec spec = preset(p, PresetArgs{});
        std::printf("%-9s p=%zu alpha=", std::string(preset_name(p)).c_str(), spec.p);
        for (std::size_t i = 0; i < spec.alpha.size(); ++i) {
            std::printf("%s%g", i ? ";" : "", spec.alpha[i]);
        }
        std::printf(" rho=%g theta0=%g theta1=%g scaling=%s\n", spec.rho, spec.theta0, spec.theta1,
                    spec.scaling == ErrorScaling::Arch ? "arch" : "direct");
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Randomized split-sample significance tests for predictive regressions"};
    app.require_subcommand(1);
    app.set_version_flag("--version", software_version());

    StatisticFlags test_stat;
    std::string input, y_col, x_cols, restrict_spec = "all", seed_text = "0", out_path;
    auto* test = app.add_subcommand("test", "test predictability on a CSV time series");
    test->add_option("input", input, "CSV file with a header row")->required();
    test->add_option("--y", y_col, "predictand column")->required();
    test->add_option("--x", x_cols, "comma separated predictor columns")->required();
    test->add_option("--restrict", restrict_spec, "'all' or comma separated predictors set to zero")
        ->capture_default_str();
    test_stat.attach(test);
    test->add_option("--seed", seed_text, "decimal or 0x hex seed")->capture_default_str();
    test->add_option("--out", out_path, "write the outcome as JSON");

    std::string plan_path, sim_out, format = "csv";
    std::size_t workers = 1;
    auto* simulate = app.add_subcommand("simulate", "run a Monte Carlo plan file");
    simulate->add_option("plan", plan_path, "plan file")->required();
    simulate->add_option("--out", sim_out, "report path (stdout when omitted)");
    simulate->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    auto* sim_workers = simulate->add_option("--workers", workers, "worker threads")
                            ->check(CLI::PositiveNumber);

    StatisticFlags power_stat;
    std::string power_dgp = "DGP1a", betas = "0,0.05,0.1,0.2", power_seed = "0", power_out;
    std::size_t power_n = 500, reps = 2000, power_workers = 1;
    double sigma_zv = -0.90, phi0 = 0.0;
    auto* power = app.add_subcommand("power", "empirical rejection rates over a beta grid");
    power->add_option("--dgp", power_dgp, "preset name")->capture_default_str();
    power->add_option("--n", power_n)->capture_default_str();
    power->add_option("--sigma-zv", sigma_zv)->capture_default_str();
    power->add_option("--phi0", phi0)->capture_default_str();
    power->add_option("--beta", betas, "comma separated slopes")->capture_default_str();
    power_stat.attach(power);
    power->add_option("--reps", reps)->capture_default_str();
    power->add_option("--seed", power_seed)->capture_default_str();
    power->add_option("--workers", power_workers)->check(CLI::PositiveNumber);
    power->add_option("--out", power_out);

    std::string curve, grid = "0.3:0.7:0.01", theory_out;
    double lambda = 2.0, theory_alpha = 0.10;
    auto* theory = app.add_subcommand("theory", "closed-form curves as CSV");
    theory->add_option("--curve", curve)
        ->required()
        ->check(CLI::IsMember({"f", "g", "elasticity", "power_vs_m"}));
    theory->add_option("--grid", grid, "lo:hi:step or a single value")->capture_default_str();
    theory->add_option("--lambda", lambda, "per-draw noncentrality for power_vs_m")->capture_default_str();
    theory->add_option("--alpha", theory_alpha)->capture_default_str();
    theory->add_option("--out", theory_out);

    auto* presets = app.add_subcommand("presets", "list built-in data-generating processes");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "error[InvalidArgument]: %s\n", e.what());
        return kExitError;
    }

    try {
        if (*test) return cmd_test(input, y_col, x_cols, restrict_spec, test_stat, seed_text, out_path);
        if (*simulate) return cmd_simulate(plan_path, sim_out, workers, sim_workers->count() > 0, format);
        if (*power) {
            return cmd_power(power_dgp, power_n, sigma_zv, phi0, betas, power_stat, reps, power_seed,
                             power_workers, power_out);
        }
        if (*theory) return cmd_theory(curve, grid, lambda, theory_alpha, theory_out);
        if (*presets) return cmd_presets();
    } catch (const Error& e) {
        std::fprintf(stderr, "error[%s]: %s\n", std::string(error_code_name(e.code())).c_str(), e.what());
        return kExitError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error[Internal]: %s\n", e.what());
        return kExitError;
    }
    return kExitError;
}
