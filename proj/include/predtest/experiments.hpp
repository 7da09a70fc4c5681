#pragma once

#include "predtest/dgp.hpp"
#include "predtest/teststats.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace predtest {

/// A preset plus its free arguments; n, beta and (for single-predictor
/// presets) alpha are filled in per grid cell.
struct PresetRef {
    Preset name = Preset::DGP1a;
    double sigma_zv = -0.90;
    double phi0 = 0.0;
};

struct ExperimentPlan {
    std::string label;
    std::variant<PresetRef, DgpSpec> dgp;
    /// Persistence grid for single-predictor presets; empty keeps the
    /// DGP's own exponents.
    std::vector<double> alpha_grid;
    std::vector<std::size_t> n_grid{500};
    std::vector<double> p0_grid{0.40};
    StatisticConfig cfg_template = default_growing_config();
    std::vector<double> beta_grid{0.0};
    std::size_t replications = 2000;
    std::uint64_t master_seed = 0;
    std::uint64_t stream_id = 0; ///< root stream under master_seed
    std::size_t workers = 1;
    std::size_t burn_in = 200;

    /// Throws InvalidArgument / InvalidP0 / InvalidDelta.
    void validate() const;
    /// Concrete DGP for one cell (beta applied to every predictor).
    DgpSpec dgp_for(std::optional<double> alpha, std::size_t n, double beta) const;
};

struct ReportCell {
    std::string dgp_label;
    std::size_t n = 0;
    double p0 = 0.0;
    std::vector<double> alpha_vec;
    double beta = 0.0;
    double rejection_rate = 0.0;
    double mc_se = 0.0;
    std::size_t replications = 0; ///< replications that produced a decision
    std::size_t degenerate = 0;   ///< excluded for zero contrast variance
    bool flagged = false;         ///< degenerate share >= 0.1%
};

struct ReportMetadata {
    std::uint64_t master_seed = 0;
    double wall_time_seconds = 0.0;
    std::string software_version;
};

struct ExperimentReport {
    std::vector<ReportCell> cells;
    ReportMetadata metadata;

    bool any_flagged() const;
};

struct CellProgress {
    std::size_t cell_index = 0;
    std::size_t cell_count = 0;
    const ReportCell* cell = nullptr;
};

using ProgressCallback = std::function<void(const CellProgress&)>;

/// Executes every (alpha, n, beta) data cell for all p0 values. Replication
/// r of a data cell uses seed (master, data_cell, r) for both the sample and
/// the Bernoulli draws, so p0 columns share common random numbers and the
/// report does not depend on the worker count.
ExperimentReport run_plan(const ExperimentPlan& plan, const ProgressCallback& progress = {});

struct PowerPoint {
    double beta = 0.0;
    double rejection_rate = 0.0;
};

/// Rejection frequency for each beta in the grid, ordered as given.
std::vector<PowerPoint> power_curve_empirical(const DgpSpec& dgp,
                                              const std::vector<double>& beta_grid,
                                              const StatisticConfig& cfg, std::size_t reps,
                                              const SeedSpec& seed, std::size_t workers = 1);

enum class ReportFormat { CSV, JSON };

struct ExportOptions {
    /// Wall time varies between runs; it is omitted unless requested so that
    /// reports are byte-reproducible.
    bool include_timing = false;
};

std::string export_report(const ExperimentReport& report, ReportFormat format,
                          const ExportOptions& options = {});

/// Parses the JSON layout written by export_report.
ExperimentReport parse_report_json(const std::string& text);

/// Software version string compiled into the library.
std::string software_version();

/// Parses the key = value plan format (see plans/README in the repository).
/// Throws PlanParseError naming the line and field.
ExperimentPlan parse_plan(std::istream& in);
ExperimentPlan load_plan(const std::string& path);

} // namespace predtest
