#include "predtest/experiments.hpp"

#include "predtest/error.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace predtest {

namespace {

enum class Decision : std::int8_t { Accept = 0, Reject = 1, Degenerate = -1 };

// Replications per (data cell, p0) slot; filled in place by workers.
struct CellResults {
    std::vector<std::vector<Decision>> by_p0;
};

bool is_single_predictor_preset(const ExperimentPlan& plan) {
    const auto* ref = std::get_if<PresetRef>(&plan.dgp);
    return ref && (ref->name == Preset::DGP1a || ref->name == Preset::DGP1b ||
                   ref->name == Preset::DGP1c);
}

// Runs fn(r) for r in [0, count) over `workers` threads. The first failure
// by replication index is rethrown so errors are reproducible too.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn fn) {
    workers = std::max<std::size_t>(1, std::min(workers, count));
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::size_t error_index = count;
    std::exception_ptr error;

    auto body = [&] {
        for (std::size_t r = next.fetch_add(1); r < count; r = next.fetch_add(1)) {
            try {
                fn(r);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (r < error_index) {
                    error_index = r;
                    error = std::current_exception();
                }
            }
        }
    };

    if (workers == 1) {
        body();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t i = 0; i < workers; ++i) {
            pool.emplace_back(body);
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

} // namespace

void ExperimentPlan::validate() const {
    if (replications < 100) {
        fail(ErrorCode::InvalidArgument, "plans need at least 100 replications");
    }
    if (workers < 1) {
        fail(ErrorCode::InvalidArgument, "workers must be >= 1");
    }
    if (n_grid.empty() || p0_grid.empty() || beta_grid.empty()) {
        fail(ErrorCode::InvalidArgument, "n, p0 and beta grids must be nonempty");
    }
    if (!alpha_grid.empty() && !is_single_predictor_preset(*this)) {
        fail(ErrorCode::InvalidArgument,
             "alpha_grid applies only to single-predictor presets");
    }
    for (double p0 : p0_grid) {
        StatisticConfig cfg = cfg_template;
        cfg.p0 = p0;
        cfg.validate();
        for (std::size_t n : n_grid) {
            if (cfg.draws_for(n) < 1) {
                fail(ErrorCode::InvalidArgument, "M rule yields zero draws");
            }
        }
    }
    // Building each DGP validates its parameters.
    const std::vector<std::optional<double>> alphas =
        alpha_grid.empty() ? std::vector<std::optional<double>>{std::nullopt}
                           : std::vector<std::optional<double>>(alpha_grid.begin(), alpha_grid.end());
    for (const auto& a : alphas) {
        for (std::size_t n : n_grid) {
            (void)dgp_for(a, n, beta_grid.front());
        }
    }
}

DgpSpec ExperimentPlan::dgp_for(std::optional<double> alpha, std::size_t n, double beta) const {
    DgpSpec spec;
    if (const auto* ref = std::get_if<PresetRef>(&dgp)) {
        PresetArgs args;
        args.n = n;
        args.sigma_zv = ref->sigma_zv;
        args.phi0 = ref->phi0;
        args.alpha = alpha;
        args.beta = beta;
        spec = preset(ref->name, args);
    } else {
        spec = std::get<DgpSpec>(dgp);
        spec.n = n;
        spec.beta.assign(spec.p, beta);
    }
    spec.burn_in = burn_in;
    spec.validate();
    return spec;
}

bool ExperimentReport::any_flagged() const {
    for (const auto& cell : cells) {
        if (cell.flagged) return true;
    }
    return false;
}

ExperimentReport run_plan(const ExperimentPlan& plan, const ProgressCallback& progress) {
    plan.validate();
    const auto start = std::chrono::steady_clock::now();

    const std::vector<std::optional<double>> alphas =
        plan.alpha_grid.empty()
            ? std::vector<std::optional<double>>{std::nullopt}
            : std::vector<std::optional<double>>(plan.alpha_grid.begin(), plan.alpha_grid.end());

    ExperimentReport report;
    report.metadata.master_seed = plan.master_seed;
    report.metadata.software_version = software_version();

    const std::size_t total_cells =
        alphas.size() * plan.n_grid.size() * plan.beta_grid.size() * plan.p0_grid.size();
    const SeedSpec root{plan.master_seed, plan.stream_id};
    std::uint64_t data_cell = 0;

    for (const auto& alpha : alphas) {
        for (std::size_t n : plan.n_grid) {
            for (double beta : plan.beta_grid) {
                const DgpSpec spec = plan.dgp_for(alpha, n, beta);
                const SeedSpec cell_seed = root.child(data_cell);
                const Restriction restriction = Restriction::all(spec.p);

                std::vector<StatisticConfig> configs;
                for (double p0 : plan.p0_grid) {
                    StatisticConfig cfg = plan.cfg_template;
                    cfg.p0 = p0;
                    configs.push_back(cfg);
                }

                CellResults results;
                results.by_p0.assign(configs.size(),
                                     std::vector<Decision>(plan.replications, Decision::Accept));

                parallel_for(plan.replications, plan.workers, [&](std::size_t r) {
                    const SeedSpec rep_seed = cell_seed.child(r);
                    const SimulatedSample sample = simulate(spec, rep_seed.child(0));
                    const RegressionData data(sample.y, sample.X_lagged);
                    for (std::size_t k = 0; k < configs.size(); ++k) {
                        Decision decision = Decision::Accept;
                        try {
                            const TestOutcome out =
                                run_test(data, restriction, configs[k], rep_seed.child(1));
                            decision = out.reject ? Decision::Reject : Decision::Accept;
                        } catch (const Error& e) {
                            if (e.code() != ErrorCode::DegenerateVariance) throw;
                            decision = Decision::Degenerate;
                        }
                        results.by_p0[k][r] = decision;
                    }
                });

                for (std::size_t k = 0; k < configs.size(); ++k) {
                    std::size_t rejections = 0;
                    std::size_t degenerate = 0;
                    for (Decision d : results.by_p0[k]) {
                        rejections += d == Decision::Reject ? 1 : 0;
                        degenerate += d == Decision::Degenerate ? 1 : 0;
                    }
                    ReportCell cell;
                    cell.dgp_label = spec.label;
                    cell.n = n;
                    cell.p0 = configs[k].p0;
                    cell.alpha_vec = spec.alpha;
                    cell.beta = beta;
                    cell.degenerate = degenerate;
                    cell.replications = plan.replications - degenerate;
                    if (cell.replications > 0) {
                        const double reps = static_cast<double>(cell.replications);
                        cell.rejection_rate = static_cast<double>(rejections) / reps;
                        cell.mc_se =
                            std::sqrt(cell.rejection_rate * (1.0 - cell.rejection_rate) / reps);
                    }
                    // Flag when degenerate draws reach 0.1% of the replications.
                    cell.flagged = degenerate * 1000 >= plan.replications && degenerate > 0;
                    report.cells.push_back(std::move(cell));
                    if (progress) {
                        progress(CellProgress{report.cells.size() - 1, total_cells,
                                              &report.cells.back()});
                    }
                }
                ++data_cell;
            }
        }
    }

    report.metadata.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

std::vector<PowerPoint> power_curve_empirical(const DgpSpec& dgp,
                                              const std::vector<double>& beta_grid,
                                              const StatisticConfig& cfg, std::size_t reps,
                                              const SeedSpec& seed, std::size_t workers) {
    if (beta_grid.empty()) {
        fail(ErrorCode::InvalidArgument, "beta grid must be nonempty");
    }
    ExperimentPlan plan;
    plan.label = dgp.label;
    plan.dgp = dgp;
    plan.n_grid = {dgp.n};
    plan.p0_grid = {cfg.p0};
    plan.cfg_template = cfg;
    plan.beta_grid = beta_grid;
    plan.replications = reps;
    plan.master_seed = seed.master_seed;
    plan.stream_id = seed.stream_id;
    plan.workers = workers;
    plan.burn_in = dgp.burn_in;

    const ExperimentReport report = run_plan(plan);
    std::vector<PowerPoint> curve;
    curve.reserve(report.cells.size());
    for (const auto& cell : report.cells) {
        curve.push_back({cell.beta, cell.rejection_rate});
    }
    return curve;
}

std::string software_version() {
#ifdef PREDTEST_VERSION
    return PREDTEST_VERSION;
#else
    return "unknown";
#endif
}

} // namespace predtest
