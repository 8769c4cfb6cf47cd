#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "frm/econ/adf.hpp"
#include "frm/econ/ols.hpp"
#include "frm/econ/report.hpp"
#include "frm/errors.hpp"

namespace frm::econ {

/// Critical-value convention for the residual unit-root stage.
enum class CointCriticalValues {
    DickeyFullerNoConstant,  // fixed -1.95 at 5%, the convention of the reference tables
    MacKinnon                // response-surface values for the 2-variable case
};

struct EngleGrangerOptions {
    int lag_order = -1;  // -1: automatic, as in adf_test
    CointCriticalValues critical = CointCriticalValues::DickeyFullerNoConstant;
};

struct EngleGrangerResult {
    TestReport report;
    double slope = 0.0;      // first-step hedge coefficient
    double intercept = 0.0;
    double critical_5pct = 0.0;
};

/// Engle-Granger two-step cointegration test: regress the response on the
/// explanatory series with an intercept, then run a no-deterministic-terms
/// unit-root t-test on the residuals. Null: residuals non-stationary, i.e.
/// no cointegration.
inline EngleGrangerResult engle_granger_test_full(const std::vector<double>& explanatory,
                                                  const std::vector<double>& response,
                                                  EngleGrangerOptions options = {}) {
    if (explanatory.size() != response.size()) {
        throw InputError("engle_granger_test: series lengths differ");
    }
    const auto j = static_cast<Eigen::Index>(explanatory.size());
    if (j < 30) throw InputError("engle_granger_test: need at least 30 observations");

    Eigen::MatrixXd x(j, 2);
    Eigen::VectorXd y(j);
    for (Eigen::Index t = 0; t < j; ++t) {
        x(t, 0) = 1.0;
        x(t, 1) = explanatory[static_cast<std::size_t>(t)];
        y[t] = response[static_cast<std::size_t>(t)];
    }
    const OlsFit step1 = ols(x, y, {"const", "explanatory"});

    std::vector<double> resid(static_cast<std::size_t>(j));
    for (Eigen::Index t = 0; t < j; ++t) resid[static_cast<std::size_t>(t)] = step1.residuals[t];
    AdfOptions adf_options;
    adf_options.lag_order = options.lag_order;
    adf_options.spec = AdfSpec::NoDeterministic;
    const AdfResult step2 = adf_test_full(resid, adf_options);

    double critical = -1.95;
    std::string convention = "5% critical value -1.95 (no-constant Dickey-Fuller)";
    if (options.critical == CointCriticalValues::MacKinnon) {
        // MacKinnon (2010) response surface, two variables, constant case
        const double t_inv = 1.0 / static_cast<double>(j);
        critical = -3.33613 - 6.1101 * t_inv - 6.823 * t_inv * t_inv;
        convention = "5% critical value " + std::to_string(critical) +
                     " (MacKinnon response surface, N=2, constant)";
    }

    EngleGrangerResult result;
    result.slope = step1.coef[1];
    result.intercept = step1.coef[0];
    result.critical_5pct = critical;
    result.report.name = "engle_granger";
    result.report.statistic = step2.report.statistic;
    result.report.p_value = step2.report.p_value;  // no-constant DF table interpolation
    result.report.p_value_clamped = step2.report.p_value_clamped;
    result.report.dof = step2.report.dof;
    result.report.reject_at_5pct = step2.report.statistic < critical;
    result.report.details = "H0: residuals non-stationary (no cointegration); " + convention +
                            "; first-step slope " + std::to_string(result.slope);
    return result;
}

inline TestReport engle_granger_test(const std::vector<double>& explanatory,
                                     const std::vector<double>& response,
                                     EngleGrangerOptions options = {}) {
    return engle_granger_test_full(explanatory, response, options).report;
}

} // namespace frm::econ
