#include <catch2/catch.hpp>

#include <cmath>

#include "frm/econ/adf.hpp"
#include "frm/econ/distributions.hpp"
#include "frm/econ/var.hpp"
#include "support/sim.hpp"

using namespace frm::econ;

TEST_CASE("distribution functions match reference values") {
    CHECK(normal_cdf(0.0) == Approx(0.5));
    CHECK(normal_cdf(1.959963984540054) == Approx(0.975).epsilon(1e-12));
    // closed form for even dof: P(chi2_4 <= 10) = 1 - 6 exp(-5)
    CHECK(chi_squared_cdf(10.0, 4.0) == Approx(1.0 - 6.0 * std::exp(-5.0)).epsilon(1e-12));
    CHECK(chi_squared_cdf(3.841458820694124, 1.0) == Approx(0.95).epsilon(1e-10));
    // F(d, d) is symmetric around 1
    CHECK(f_cdf(1.0, 7.0, 7.0) == Approx(0.5).epsilon(1e-12));
    CHECK(f_cdf(3.841459, 1.0, 1e6) == Approx(0.95).margin(1e-4));
    CHECK(gamma_p(2.5, 0.0) == 0.0);
    CHECK_THROWS_AS(beta_inc(0.0, 1.0, 0.5), frm::ArgumentError);
}

TEST_CASE("adf rejects white noise and retains random walks") {
    int reject_noise = 0, keep_walk = 0;
    const int reps = 50;
    for (int rep = 0; rep < reps; ++rep) {
        const auto noise = frm_test::white_noise(1000 + rep, 1000);
        if (adf_test(noise).reject_at_5pct) ++reject_noise;
        const auto walk = frm_test::random_walk(2000 + rep, 1000);
        if (!adf_test(walk).reject_at_5pct) ++keep_walk;
    }
    CHECK(reject_noise >= 47);  // power ~ 1 at this length
    CHECK(keep_walk >= 44);     // size ~ 5%
}

TEST_CASE("adf statistic is scale invariant") {
    const auto y = frm_test::ar1(7, 400, 0.6);
    const double base = adf_test(y).statistic;
    for (double c : {10.0, 0.001}) {
        std::vector<double> scaled;
        for (double v : y) scaled.push_back(c * v);
        CHECK(adf_test(scaled).statistic == Approx(base).margin(1e-8));
    }
}

TEST_CASE("adf p-values clamp at the table floor for clearly stationary data") {
    const auto y = frm_test::ar1(11, 800, 0.1);
    const auto report = adf_test(y);
    CHECK(report.p_value == 0.01);
    CHECK(report.p_value_clamped);
    CHECK(report.reject_at_5pct);
}

TEST_CASE("adf honors the deterministic-term flag and the auto lag rule") {
    const auto y = frm_test::random_walk(13, 300);
    const auto trend = adf_test_full(y, {.lag_order = -1, .spec = AdfSpec::Trend});
    const auto drift = adf_test_full(y, {.lag_order = -1, .spec = AdfSpec::Drift});
    CHECK(trend.lag_order == static_cast<int>(std::floor(std::cbrt(299.0))));
    CHECK(trend.report.statistic != drift.report.statistic);
    CHECK(trend.report.details.find("constant+trend") != std::string::npos);
    CHECK(drift.report.details.find("constant") != std::string::npos);
}

TEST_CASE("adf rejects series that are too short") {
    CHECK_THROWS_AS(adf_test(std::vector<double>{1.0, 2.0, 3.0, 4.0}), frm::InputError);
}

TEST_CASE("var(1) on one series reduces to univariate least squares") {
    const auto y = frm_test::ar1(3, 200, 0.5);
    Eigen::MatrixXd data(200, 1);
    for (int t = 0; t < 200; ++t) data(t, 0) = y[static_cast<std::size_t>(t)];
    const VarModel model = fit_var(data, 1);

    // direct AR(1) least squares
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = 199.0;
    for (int t = 1; t < 200; ++t) {
        sx += data(t - 1, 0);
        sy += data(t, 0);
        sxx += data(t - 1, 0) * data(t - 1, 0);
        sxy += data(t - 1, 0) * data(t, 0);
    }
    const double slope = (sxy - sx * sy / n) / (sxx - sx * sx / n);
    CHECK(model.coefficients[0](0, 0) == Approx(slope).epsilon(1e-10));
    CHECK(model.intercept[0] == Approx((sy - slope * sx) / n).epsilon(1e-8));
}

TEST_CASE("var estimation recovers a known coefficient matrix") {
    Eigen::MatrixXd a(2, 2);
    a << 0.5, 0.0, 0.0, 0.5;
    const Eigen::MatrixXd data = frm_test::var1(21, 5000, a);
    const VarModel model = fit_var(data, 1);
    CHECK((model.coefficients[0] - a).cwiseAbs().maxCoeff() < 0.05);
    CHECK(model.intercept.cwiseAbs().maxCoeff() < 0.1);
}

TEST_CASE("var fitted values plus residuals reproduce the sample") {
    const Eigen::MatrixXd data = frm_test::planted_causality(5, 300, 0.5);
    const VarModel model = fit_var(data, 2, {"a", "b"});
    for (Eigen::Index t = 2; t < 300; ++t) {
        Eigen::VectorXd fitted = model.intercept;
        for (int i = 0; i < model.order; ++i) {
            fitted += model.coefficients[static_cast<std::size_t>(i)] *
                      data.row(t - 1 - i).transpose();
        }
        const Eigen::VectorXd recomposed = fitted + model.residuals.row(t - 2).transpose();
        CHECK((recomposed - data.row(t).transpose()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("var residuals satisfy the normal equations and sigma is symmetric psd") {
    const Eigen::MatrixXd data = frm_test::var1(9, 400, Eigen::MatrixXd::Identity(3, 3) * 0.4);
    const VarModel model = fit_var(data, 2);
    const Eigen::MatrixXd gram = model.regressors.transpose() * model.residuals;
    CHECK(gram.cwiseAbs().maxCoeff() < 1e-8);
    CHECK((model.sigma - model.sigma.transpose()).cwiseAbs().maxCoeff() < 1e-14);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(model.sigma);
    CHECK(eig.eigenvalues().minCoeff() > -1e-12);
}

TEST_CASE("var on white noise shows no systematic structure") {
    const Eigen::MatrixXd data = frm_test::var1(31, 800, Eigen::MatrixXd::Zero(2, 2));
    const VarModel model = fit_var(data, 2);
    const Eigen::MatrixXd ztz_inv =
        (model.regressors.transpose() * model.regressors).inverse();
    const Eigen::MatrixXd sigma_corr =
        model.residuals.transpose() * model.residuals /
        static_cast<double>(model.effective_sample() - model.coef_stacked.rows());
    for (Eigen::Index eq = 0; eq < 2; ++eq) {
        for (Eigen::Index r = 1; r < model.coef_stacked.rows(); ++r) {
            const double t_ratio = model.coef_stacked(r, eq) /
                                   std::sqrt(sigma_corr(eq, eq) * ztz_inv(r, r));
            CHECK(std::abs(t_ratio) < 4.0);
        }
    }
}

TEST_CASE("var names collinear columns in rank errors") {
    Eigen::MatrixXd data = frm_test::var1(41, 100, Eigen::MatrixXd::Identity(2, 2) * 0.3);
    Eigen::MatrixXd bad(100, 3);
    bad.leftCols(2) = data;
    bad.col(2) = data.col(0);  // duplicate series
    CHECK_THROWS_AS(fit_var(bad, 1, {"a", "b", "a_copy"}), frm::RankError);
    CHECK_THROWS_WITH(fit_var(bad, 1, {"a", "b", "a_copy"}),
                      Catch::Matchers::Contains("collinear"));
}

TEST_CASE("var requires enough observations") {
    const Eigen::MatrixXd data = frm_test::var1(43, 8, Eigen::MatrixXd::Zero(2, 2));
    CHECK_THROWS_AS(fit_var(data, 3), frm::InputError);
}

TEST_CASE("schwarz criterion recovers the true var order") {
    Eigen::MatrixXd a(2, 2);
    a << 0.6, 0.1, -0.2, 0.4;
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Eigen::MatrixXd data = frm_test::var1(900 + seed, 600, a);
        const OrderSelection sel = select_var_order(data, 6);
        if (sel.sc == 1) ++hits;
        CHECK(sel.aic_values.size() == 7);  // orders 0..6
    }
    CHECK(hits >= 16);
}

TEST_CASE("schwarz criterion stays minimal on white noise") {
    int small = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Eigen::MatrixXd data = frm_test::var1(700 + seed, 500, Eigen::MatrixXd::Zero(2, 2));
        const OrderSelection sel = select_var_order(data, 6);
        if (sel.sc <= 1) ++small;
    }
    CHECK(small >= 18);
}

TEST_CASE("order selection rejects an infeasible max order") {
    const Eigen::MatrixXd data = frm_test::var1(1, 20, Eigen::MatrixXd::Zero(2, 2));
    CHECK_THROWS_AS(select_var_order(data, 8), frm::InputError);
}
