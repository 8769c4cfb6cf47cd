#include <catch2/catch.hpp>

#include <random>

#include "frm/pipeline.hpp"

using frm::build_problem;
using frm::Date;
using frm::FrmSeries;
using frm::GridSettings;
using frm::lambda_series;
using frm::ReturnPanel;
using frm::run_grid;
using frm::WindowTask;

namespace {

ReturnPanel make_panel(std::uint64_t seed, Eigen::Index t_count, Eigen::Index firms,
                       Eigen::Index macros, double sigma = 0.01) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    ReturnPanel panel;
    panel.dates.reserve(static_cast<std::size_t>(t_count));
    for (Eigen::Index t = 0; t < t_count; ++t) {
        panel.dates.push_back(Date(2015, 1, 1) + static_cast<int>(t));
    }
    panel.firm_returns.resize(t_count, firms);
    for (Eigen::Index t = 0; t < t_count; ++t) {
        for (Eigen::Index j = 0; j < firms; ++j) panel.firm_returns(t, j) = sigma * normal(rng);
    }
    panel.macro.resize(t_count, macros);
    for (Eigen::Index t = 0; t < t_count; ++t) {
        for (Eigen::Index c = 0; c < macros; ++c) panel.macro(t, c) = normal(rng);
    }
    for (Eigen::Index j = 0; j < firms; ++j) panel.firm_ids.push_back("F" + std::to_string(j));
    for (Eigen::Index c = 0; c < macros; ++c) panel.macro_ids.push_back("M" + std::to_string(c));
    return panel;
}

} // namespace

TEST_CASE("build_problem with two firms and no macros is a single column") {
    const ReturnPanel panel = make_panel(1, 20, 2, 0);
    const frm::QuantileProblem problem = build_problem(panel, {0, 0, 5}, 0.05);
    REQUIRE(problem.design.rows() == 5);
    REQUIRE(problem.design.cols() == 1);
    CHECK((problem.design.col(0) - panel.firm_returns.col(1).segment(0, 5)).cwiseAbs().maxCoeff() ==
          0.0);
    CHECK((problem.responses - panel.firm_returns.col(0).segment(0, 5)).cwiseAbs().maxCoeff() ==
          0.0);
}

TEST_CASE("build_problem stacks lagged macros before other-firm returns") {
    const ReturnPanel panel = make_panel(2, 80, 3, 2);
    const WindowTask task{1, 5, 63};
    const frm::QuantileProblem problem = build_problem(panel, task, 0.05);
    REQUIRE(problem.design.rows() == 63);
    REQUIRE(problem.design.cols() == 4);
    // columns: macro0_{t-1}, macro1_{t-1}, firm0_t, firm2_t
    CHECK((problem.design.col(0) - panel.macro.col(0).segment(4, 63)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((problem.design.col(1) - panel.macro.col(1).segment(4, 63)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((problem.design.col(2) - panel.firm_returns.col(0).segment(5, 63)).cwiseAbs().maxCoeff() ==
          0.0);
    CHECK((problem.design.col(3) - panel.firm_returns.col(2).segment(5, 63)).cwiseAbs().maxCoeff() ==
          0.0);
}

TEST_CASE("build_problem first row matches a hand-assembled vector") {
    ReturnPanel panel = make_panel(3, 10, 3, 1);
    const WindowTask task{0, 1, 4};
    const frm::QuantileProblem problem = build_problem(panel, task, 0.05);
    Eigen::Vector3d expected(panel.macro(0, 0), panel.firm_returns(1, 1),
                             panel.firm_returns(1, 2));
    CHECK((problem.design.row(0).transpose() - expected).cwiseAbs().maxCoeff() == 0.0);
    CHECK(problem.responses[0] == panel.firm_returns(1, 0));
}

TEST_CASE("the macro lag makes the first panel date unusable as a window start") {
    const ReturnPanel panel = make_panel(4, 30, 2, 1);
    CHECK_THROWS_AS(build_problem(panel, {0, 0, 5}, 0.05), frm::RangeError);
    CHECK_THROWS_AS(build_problem(panel, {0, 26, 5}, 0.05), frm::RangeError);
    CHECK_NOTHROW(build_problem(panel, {0, 25, 5}, 0.05));
}

TEST_CASE("own return column never appears in the design") {
    // every firm's series is a distinct constant, so containment is checkable
    ReturnPanel panel = make_panel(5, 12, 4, 0);
    for (Eigen::Index j = 0; j < 4; ++j) {
        panel.firm_returns.col(j).setConstant(0.001 * static_cast<double>(j + 1));
    }
    for (Eigen::Index j = 0; j < 4; ++j) {
        const frm::QuantileProblem problem = build_problem(panel, {j, 0, 6}, 0.05);
        for (Eigen::Index c = 0; c < problem.design.cols(); ++c) {
            CHECK(problem.design(0, c) != panel.firm_returns(0, j));
        }
    }
}

TEST_CASE("window count loses one observation to the macro lag") {
    GridSettings settings;
    settings.window_size = 10;
    settings.grid_points = 4;
    const FrmSeries with_macro = run_grid(make_panel(6, 25, 2, 1), settings);
    CHECK(with_macro.windows() == 25 - 10);
    const FrmSeries no_macro = run_grid(make_panel(7, 25, 2, 0), settings);
    CHECK(no_macro.windows() == 25 - 10 + 1);
    CHECK(with_macro.dates.front() == Date(2015, 1, 1) + 10);
    CHECK(no_macro.dates.front() == Date(2015, 1, 1) + 9);
}

TEST_CASE("constant identical firms select the largest grid point everywhere") {
    ReturnPanel panel = make_panel(8, 30, 2, 0);
    panel.firm_returns.col(0).setConstant(0.002);
    panel.firm_returns.col(1).setConstant(0.002);
    GridSettings settings;
    settings.window_size = 8;
    settings.grid_points = 6;
    const FrmSeries series = run_grid(panel, settings);
    const double lmax_cell = series.lambda_matrix(0, 0);
    CHECK(lmax_cell > 0.0);
    CHECK((series.lambda_matrix.array() == lmax_cell).all());
    CHECK((series.frm.array() == lmax_cell).all());
}

TEST_CASE("run_grid output is identical for any worker count") {
    const ReturnPanel panel = make_panel(9, 40, 3, 1);
    GridSettings settings;
    settings.window_size = 12;
    settings.grid_points = 8;
    settings.workers = 1;
    const FrmSeries base = run_grid(panel, settings);
    for (int workers : {2, 4, 8}) {
        settings.workers = workers;
        const FrmSeries other = run_grid(panel, settings);
        REQUIRE(other.windows() == base.windows());
        CHECK((other.lambda_matrix - base.lambda_matrix).cwiseAbs().maxCoeff() == 0.0);
        CHECK((other.frm - base.frm).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("frm equals the row mean of the lambda matrix exactly") {
    const ReturnPanel panel = make_panel(10, 30, 3, 0);
    GridSettings settings;
    settings.window_size = 10;
    settings.grid_points = 5;
    settings.workers = 2;
    const FrmSeries series = run_grid(panel, settings);
    for (Eigen::Index w = 0; w < series.windows(); ++w) {
        double sum = 0.0;
        for (Eigen::Index j = 0; j < series.lambda_matrix.cols(); ++j) {
            sum += series.lambda_matrix(w, j);
        }
        CHECK(series.frm[w] - sum / static_cast<double>(series.lambda_matrix.cols()) == 0.0);
        CHECK(series.lambda_matrix.row(w).minCoeff() >= 0.0);
    }
}

TEST_CASE("lambda_series extracts one column with dates") {
    const ReturnPanel panel = make_panel(11, 28, 2, 0);
    GridSettings settings;
    settings.window_size = 9;
    settings.grid_points = 5;
    const FrmSeries series = run_grid(panel, settings);
    const auto path0 = lambda_series(series, "F0");
    const auto path1 = lambda_series(series, "F1");
    REQUIRE(path0.size() == static_cast<std::size_t>(series.windows()));
    for (Eigen::Index w = 0; w < series.windows(); ++w) {
        const auto wi = static_cast<std::size_t>(w);
        CHECK(path0[wi].second == series.lambda_matrix(w, 0));
        CHECK(path0[wi].first == series.dates[wi]);
        // cross-firm mean of the extracted paths reproduces the index
        CHECK(series.frm[w] == (path0[wi].second + path1[wi].second) / 2.0);
    }
    CHECK_THROWS_AS(lambda_series(series, "NOPE"), frm::LookupError);
}

TEST_CASE("lambda_series matches a fresh run restricted to the same problems") {
    const ReturnPanel panel = make_panel(12, 26, 2, 1);
    GridSettings settings;
    settings.window_size = 8;
    settings.grid_points = 6;
    const FrmSeries series = run_grid(panel, settings);
    const auto path = lambda_series(series, "F1");
    for (Eigen::Index w = 0; w < series.windows(); ++w) {
        const frm::QuantileProblem problem =
            build_problem(panel, {1, 1 + w, settings.window_size}, settings.tau);
        const auto grid = frm::make_lambda_grid(frm::compute_lambda_max(problem),
                                                settings.grid_points);
        const auto pick = frm::select_lambda(problem, grid);
        CHECK(path[static_cast<std::size_t>(w)].second == pick.lambda_star);
    }
}

TEST_CASE("failed cells abort by default and are excluded when skipped") {
    // firm F1's only covariate is the all-zero firm F0 series, so lambda_max
    // degenerates to zero and the cell cannot be solved
    ReturnPanel panel = make_panel(13, 20, 2, 0);
    panel.firm_returns.col(0).setZero();
    GridSettings settings;
    settings.window_size = 6;
    settings.grid_points = 4;
    CHECK_THROWS_AS(run_grid(panel, settings), frm::SolverError);

    settings.skip_failures = true;
    const FrmSeries series = run_grid(panel, settings);
    for (Eigen::Index w = 0; w < series.windows(); ++w) {
        CHECK(series.failures_per_window[static_cast<std::size_t>(w)] == 1);
        CHECK(std::isnan(series.lambda_matrix(w, 1)));
        CHECK(series.frm[w] == series.lambda_matrix(w, 0));
    }
}

TEST_CASE("event sink observes one event per cell") {
    const ReturnPanel panel = make_panel(14, 22, 2, 0);
    GridSettings settings;
    settings.window_size = 8;
    settings.grid_points = 4;
    settings.workers = 2;
    int events = 0;
    double total_ms = 0.0;
    settings.event_sink = [&](const frm::CellEvent& event) {
        ++events;
        total_ms += event.millis;
        CHECK(event.success);
    };
    const FrmSeries series = run_grid(panel, settings);
    CHECK(events == series.windows() * 2);
    CHECK(total_ms >= 0.0);
}

TEST_CASE("two-regime volatility panels raise the index in the loud regime") {
    // scaled-down version of the acceptance fixture: 3x volatility in the
    // second half should lift the average selected penalty
    int wins = 0;
    for (std::uint64_t seed : {101u, 202u, 303u}) {
        ReturnPanel panel = make_panel(seed, 120, 6, 0, 0.01);
        panel.firm_returns.bottomRows(60) *= 3.0;
        GridSettings settings;
        settings.window_size = 20;
        settings.grid_points = 8;
        settings.workers = 2;
        const FrmSeries series = run_grid(panel, settings);
        // windows fully inside each regime
        double lo = 0.0, hi = 0.0;
        int lo_n = 0, hi_n = 0;
        for (Eigen::Index w = 0; w < series.windows(); ++w) {
            const Eigen::Index start = w, stop = w + settings.window_size;  // m = 0
            if (stop <= 60) {
                lo += series.frm[w];
                ++lo_n;
            } else if (start >= 60) {
                hi += series.frm[w];
                ++hi_n;
            }
        }
        REQUIRE(lo_n > 0);
        REQUIRE(hi_n > 0);
        if (hi / hi_n > lo / lo_n) ++wins;
    }
    CHECK(wins >= 2);
}
