#include "predtest/error.hpp"
#include "predtest/experiments.hpp"

#include <doctest.h>

#include <sstream>
#include <string>

using namespace predtest;

namespace {

ErrorCode code_of(auto&& fn, std::string* message = nullptr) {
    try {
        fn();
    } catch (const Error& e) {
        if (message) *message = e.what();
        return e.code();
    }
    FAIL("no error raised");
    return ErrorCode::InvalidArgument;
}

ExperimentPlan parse(const std::string& text) {
    std::istringstream in(text);
    return parse_plan(in);
}

ExperimentPlan small_plan() {
    ExperimentPlan plan;
    plan.label = "small";
    plan.dgp = PresetRef{Preset::DGP1b, -0.5, 0.0};
    plan.alpha_grid = {1.0};
    plan.n_grid = {120};
    plan.p0_grid = {0.35, 0.45};
    plan.beta_grid = {0.0, 0.1};
    plan.replications = 150;
    plan.master_seed = 77;
    plan.cfg_template.mn_rule = FloorPowRule{1.0 / 3.0};
    return plan;
}

} // namespace

TEST_CASE("plan text is parsed") {
    const ExperimentPlan plan = parse(R"(# comment line
label = demo
dgp = DGP1a
sigma_zv = -0.5   # trailing comment
alpha_grid = 0, 1
n_grid = 250, 500
p0_grid = 0.3, 0.4
statistic = fixed
m = 4
replications = 300
seed = 0x2a
workers = 2
)");
    CHECK(plan.label == "demo");
    const auto& ref = std::get<PresetRef>(plan.dgp);
    CHECK(ref.name == Preset::DGP1a);
    CHECK(ref.sigma_zv == -0.5);
    CHECK(plan.alpha_grid == std::vector<double>{0.0, 1.0});
    CHECK(plan.n_grid == std::vector<std::size_t>{250, 500});
    CHECK(plan.cfg_template.mode == StatisticMode::FixedM_ChiSquare);
    CHECK(plan.cfg_template.M == 4);
    CHECK(!plan.cfg_template.mn_rule);
    CHECK(plan.master_seed == 42);
    CHECK(plan.workers == 2);
    CHECK(plan.cfg_template.alpha == 0.10);
}

TEST_CASE("plan errors name the line and field") {
    std::string msg;
    CHECK(code_of([] { (void)parse("dgp = DGP1a\nfoo = 1\n"); }, &msg) == ErrorCode::PlanParseError);
    CHECK(msg.find("line 2") != std::string::npos);
    CHECK(msg.find("'foo'") != std::string::npos);

    CHECK(code_of([] { (void)parse("dgp = DGP1a\nn_grid = 500, abc\n"); }, &msg) == ErrorCode::PlanParseError);
    CHECK(msg.find("line 2") != std::string::npos);

    CHECK(code_of([] { (void)parse("dgp = DGP1a\nm = 3\nmn_delta = 0.5\n"); }) == ErrorCode::PlanParseError);
    CHECK(code_of([] { (void)parse("dgp = DGP7\n"); }) == ErrorCode::PlanParseError);
    CHECK(code_of([] { (void)parse("n_grid = 500\n"); }) == ErrorCode::PlanParseError);
    CHECK(code_of([] { (void)parse("dgp = DGP1a\ndgp = DGP1b\n"); }) == ErrorCode::PlanParseError);
    CHECK(code_of([] { (void)parse("dgp = DGP1a\njust words\n"); }) == ErrorCode::PlanParseError);
}

TEST_CASE("inadmissible p0 in a plan is a parse error") {
    std::string msg;
    CHECK(code_of([] { (void)parse("dgp = DGP1a\np0_grid = 0.4, 0.5\n"); }, &msg) ==
          ErrorCode::PlanParseError);
    CHECK(msg.find("invalid plan") != std::string::npos);
}

TEST_CASE("custom DGP block") {
    const ExperimentPlan plan = parse(R"(dgp = custom
dgp.p = 2
dgp.alpha = 1, 0.5
dgp.c = 1
dgp.theta0 = 2
dgp.theta1 = 0.2
dgp.scaling = arch
dgp.omega = 1, -0.5, 0.2; -0.5, 1, 0; 0.2, 0, 1
replications = 100
)");
    const auto& spec = std::get<DgpSpec>(plan.dgp);
    CHECK(spec.p == 2);
    CHECK(spec.c == std::vector<double>{1.0, 1.0});
    CHECK(spec.alpha == std::vector<double>{1.0, 0.5});
    CHECK(spec.omega(0, 1) == -0.5);
    CHECK(spec.omega(2, 0) == 0.2);
    CHECK(spec.scaling == ErrorScaling::Arch);

    CHECK(code_of([] { (void)parse("dgp = custom\ndgp.p = 2\ndgp.alpha = 1, 1, 1\n"); }) ==
          ErrorCode::PlanParseError);
    CHECK(code_of([] { (void)parse("dgp = custom\ndgp.omega = 1, 0; 0\n"); }) == ErrorCode::PlanParseError);
}

TEST_CASE("bundled plans load") {
    for (const char* name : {"table1_desk", "table2_desk", "table3_desk", "table4_desk", "table4c_desk",
                             "custom_example"}) {
        CAPTURE(name);
        const std::string path = std::string(PREDTEST_PLAN_DIR) + "/" + name + ".plan";
        CHECK_NOTHROW((void)load_plan(path));
    }
    CHECK(code_of([] { (void)load_plan("/nonexistent.plan"); }) == ErrorCode::FileNotFound);
}

TEST_CASE("plan validation") {
    auto bad = [](auto mutate) {
        ExperimentPlan plan = small_plan();
        mutate(plan);
        return code_of([&] { plan.validate(); });
    };
    CHECK(bad([](ExperimentPlan& p) { p.replications = 99; }) == ErrorCode::InvalidArgument);
    CHECK(bad([](ExperimentPlan& p) { p.workers = 0; }) == ErrorCode::InvalidArgument);
    CHECK(bad([](ExperimentPlan& p) { p.p0_grid = {0.5}; }) == ErrorCode::InvalidP0);
    CHECK(bad([](ExperimentPlan& p) { p.n_grid.clear(); }) == ErrorCode::InvalidArgument);
    CHECK(bad([](ExperimentPlan& p) { p.cfg_template.mn_rule = FloorPowRule{0.0}; }) == ErrorCode::InvalidDelta);
    CHECK(bad([](ExperimentPlan& p) {
              p.dgp = PresetRef{Preset::DGP2a, 0.0, 0.0};
          }) == ErrorCode::InvalidArgument);
}

TEST_CASE("run_plan covers the grid in order") {
    const ExperimentReport report = run_plan(small_plan());
    REQUIRE(report.cells.size() == 4);
    CHECK(report.cells[0].p0 == 0.35);
    CHECK(report.cells[0].beta == 0.0);
    for (const auto& cell : report.cells) {
        CHECK(cell.n == 120);
        CHECK(cell.alpha_vec == std::vector<double>{1.0});
        CHECK(cell.rejection_rate >= 0.0);
        CHECK(cell.rejection_rate <= 1.0);
        CHECK(cell.replications + cell.degenerate == 150);
        const double r = cell.rejection_rate;
        CHECK(std::abs(cell.mc_se - std::sqrt(r * (1 - r) / cell.replications)) < 1e-12);
    }
    CHECK(report.metadata.master_seed == 77);
    CHECK(report.metadata.software_version == software_version());
}

TEST_CASE("reports do not depend on the worker count") {
    ExperimentPlan one = small_plan();
    ExperimentPlan many = small_plan();
    many.workers = 8;
    const ExperimentReport a = run_plan(one);
    const ExperimentReport b = run_plan(many);
    CHECK(export_report(a, ReportFormat::CSV) == export_report(b, ReportFormat::CSV));
    CHECK(export_report(a, ReportFormat::JSON) == export_report(b, ReportFormat::JSON));
}

TEST_CASE("export formats") {
    ExperimentReport report;
    ReportCell cell;
    cell.dgp_label = "DGP2b";
    cell.n = 1000;
    cell.p0 = 0.4;
    cell.alpha_vec = {0.75, 0.5, 0.25};
    cell.beta = 0.0;
    cell.rejection_rate = 0.0915;
    cell.mc_se = 0.0064451823;
    cell.replications = 2000;
    report.cells.push_back(cell);
    report.metadata.master_seed = 9;
    report.metadata.software_version = "test";
    report.metadata.wall_time_seconds = 1.5;

    const std::string csv = export_report(report, ReportFormat::CSV);
    CHECK(csv == "dgp,n,p0,alpha,beta,rejection_rate,mc_se,reps\n"
                 "DGP2b,1000,0.4,0.75;0.5;0.25,0,0.0915,0.00644518,2000\n");

    const std::string json = export_report(report, ReportFormat::JSON);
    CHECK(json.find("wall_time") == std::string::npos);
    CHECK(export_report(report, ReportFormat::JSON, ExportOptions{true}).find("wall_time") != std::string::npos);

    const ExperimentReport back = parse_report_json(json);
    REQUIRE(back.cells.size() == 1);
    CHECK(back.cells[0].dgp_label == "DGP2b");
    CHECK(back.cells[0].alpha_vec == cell.alpha_vec);
    CHECK(back.cells[0].mc_se == cell.mc_se);
    CHECK(back.cells[0].replications == 2000);
    CHECK(back.metadata.master_seed == 9);
    CHECK(export_report(back, ReportFormat::JSON) == json);

    CHECK(code_of([] { (void)export_report(ExperimentReport{}, ReportFormat::CSV); }) == ErrorCode::EmptyReport);
    CHECK(code_of([] { (void)parse_report_json("{\"cells\": 3}"); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("labels with commas are quoted") {
    ExperimentReport report;
    ReportCell cell;
    cell.dgp_label = "a,b";
    cell.alpha_vec = {1.0};
    report.cells.push_back(cell);
    const std::string csv = export_report(report, ReportFormat::CSV);
    CHECK(csv.find("\n\"a,b\",") != std::string::npos);
}

TEST_CASE("empirical power curve") {
    PresetArgs args;
    args.n = 200;
    args.alpha = 0.0;
    args.sigma_zv = 0.0;
    const DgpSpec spec = preset(Preset::DGP1a, args);
    StatisticConfig cfg = default_growing_config();
    const auto curve = power_curve_empirical(spec, {0.0, 0.5}, cfg, 200, SeedSpec{5, 0});
    REQUIRE(curve.size() == 2);
    CHECK(curve[0].beta == 0.0);
    CHECK(curve[1].rejection_rate > curve[0].rejection_rate);
    CHECK(code_of([&] { (void)power_curve_empirical(spec, {}, cfg, 200, SeedSpec{5, 0}); }) ==
          ErrorCode::InvalidArgument);
}
