#include <catch2/catch.hpp>

#include "frm/analysis.hpp"
#include "support/sim.hpp"

using frm::AlignedPair;
using frm::align_series;
using frm::Date;
using frm::DatedSeries;

namespace {

DatedSeries make_series(const std::vector<double>& values, Date start, int step = 1) {
    DatedSeries out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        out.emplace_back(start + static_cast<int>(i) * step, values[i]);
    }
    return out;
}

} // namespace

TEST_CASE("alignment intersects matching calendars") {
    const auto a = make_series(frm_test::white_noise(1, 150), Date(2016, 1, 1));
    const auto b = make_series(frm_test::white_noise(2, 160), Date(2016, 1, 10));
    const AlignedPair pair = align_series(a, b, "b");
    CHECK_FALSE(pair.other_interpolated);
    CHECK(pair.dates.front() == Date(2016, 1, 10));
    CHECK(pair.dates.back() == Date(2016, 1, 1) + 149);
    CHECK(pair.dates.size() == 141);
    CHECK(pair.frm.size() == pair.other.size());
}

TEST_CASE("a coarser series is interpolated onto the index calendar") {
    const auto daily = make_series(frm_test::white_noise(3, 140), Date(2016, 1, 1));
    std::vector<double> weekly_values;
    for (int i = 0; i < 20; ++i) weekly_values.push_back(std::sin(0.3 * i));
    const auto weekly = make_series(weekly_values, Date(2016, 1, 1), 7);
    const AlignedPair pair = align_series(daily, weekly, "weekly");
    CHECK(pair.other_interpolated);
    REQUIRE(pair.dates.size() >= 100);
    // interpolation passes through the weekly knots
    for (std::size_t i = 0; i < pair.dates.size(); ++i) {
        const int offset = pair.dates[i] - Date(2016, 1, 1);
        if (offset % 7 == 0) {
            CHECK(pair.other[i] == weekly_values[static_cast<std::size_t>(offset / 7)]);
        }
    }
}

TEST_CASE("alignment enforces the overlap floor") {
    const auto a = make_series(frm_test::white_noise(4, 150), Date(2016, 1, 1));
    const auto b = make_series(frm_test::white_noise(5, 50), Date(2016, 1, 1));
    CHECK_THROWS_AS(align_series(a, b, "b"), frm::InputError);
    CHECK_NOTHROW(align_series(a, b, "b", 30));
}

TEST_CASE("order policy picks the smallest candidate passing the residual test") {
    Eigen::MatrixXd a(2, 2);
    a << 0.6, 0.1, -0.1, 0.5;
    const Eigen::MatrixXd data = frm_test::var1(17, 600, a);
    const auto selection = frm::econ::select_var_order(data, 8);
    const auto policy = frm::choose_var_order(data, selection);
    CHECK(policy.chosen >= 1);
    CHECK_FALSE(policy.criterion_fallback);
    // the chosen order is a candidate and clears the diagnostic it was picked by
    const auto model = frm::econ::fit_var(data, policy.chosen);
    CHECK_FALSE(frm::econ::breusch_godfrey_test(model, policy.bg_lags).reject_at_5pct);
}

TEST_CASE("granger flow differences a random-walk index and names it DFRM") {
    const auto walk = make_series(frm_test::random_walk(21, 300, 0.02), Date(2015, 1, 1));
    const auto other = make_series(frm_test::white_noise(22, 300), Date(2015, 1, 1));
    const auto trail = frm::granger_flow(align_series(walk, other, "vix"), 8);
    CHECK(trail.at("differenced") == true);
    CHECK(trail.at("series").at("lhs") == "DFRM");
    REQUIRE(trail.at("stationarity").size() == 3);  // FRM, other, DFRM
    CHECK(trail.at("stationarity")[2].at("name") == "adf_DFRM");
    CHECK(trail.at("granger").size() == 2);
    CHECK(trail.at("order_policy").contains("chosen"));
    for (const auto& report : trail.at("residual_tests")) {
        CHECK(report.at("p_value").get<double>() >= 0.0);
        CHECK(report.at("p_value").get<double>() <= 1.0);
    }
}

TEST_CASE("granger flow keeps a stationary index in levels") {
    const auto level = make_series(frm_test::ar1(31, 400, 0.3), Date(2015, 1, 1));
    const auto other = make_series(frm_test::ar1(32, 400, 0.4), Date(2015, 1, 1));
    const auto trail = frm::granger_flow(align_series(level, other, "srisk"), 6);
    CHECK(trail.at("differenced") == false);
    CHECK(trail.at("series").at("lhs") == "FRM");
}

TEST_CASE("granger flow finds planted causality through the full policy") {
    const Eigen::MatrixXd data = frm_test::planted_causality(41, 800, 0.5);
    DatedSeries frm_series, other;
    for (Eigen::Index t = 0; t < data.rows(); ++t) {
        frm_series.emplace_back(Date(2015, 1, 1) + static_cast<int>(t), data(t, 0));
        other.emplace_back(Date(2015, 1, 1) + static_cast<int>(t), data(t, 1));
    }
    const auto trail = frm::granger_flow(align_series(frm_series, other, "vix"), 6);
    bool forward_rejects = false;
    for (const auto& report : trail.at("granger")) {
        const std::string name = report.at("name");
        if (name.find("_to_vix") != std::string::npos) {
            forward_rejects = report.at("decision") == "reject";
        }
    }
    CHECK(forward_rejects);
}

TEST_CASE("cointegration flow reports both regression directions") {
    const auto x = frm_test::random_walk(51, 400);
    const auto noise = frm_test::white_noise(52, 400, 0.4);
    std::vector<double> y(x.size());
    for (std::size_t t = 0; t < x.size(); ++t) y[t] = 1.5 * x[t] + noise[t];
    const auto trail = frm::cointegration_flow(
        align_series(make_series(x, Date(2015, 1, 1)), make_series(y, Date(2015, 1, 1)), "srisk"));
    CHECK(trail.at("mode") == "cointegration");
    CHECK(trail.at("both_nonstationary") == true);
    REQUIRE(trail.at("engle_granger").size() == 2);
    for (const auto& report : trail.at("engle_granger")) {
        CHECK(report.at("decision") == "reject");  // planted cointegration
    }
    CHECK(trail.at("critical_value_5pct") == -1.95);
}

TEST_CASE("ccf flow reports the identity peak for identical series") {
    const auto x = make_series(frm_test::white_noise(61, 200), Date(2015, 1, 1));
    const auto trail = frm::ccf_flow(align_series(x, x, "copy"), 15);
    CHECK(trail.at("argmax").at("lag") == 0);
    CHECK(trail.at("argmax").at("ccf").get<double>() == Approx(1.0).epsilon(1e-12));
    CHECK(trail.at("values").size() == 31);
}
