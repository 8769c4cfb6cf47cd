#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "frm/econ/ols.hpp"
#include "frm/econ/report.hpp"
#include "frm/errors.hpp"

namespace frm::econ {

/// Deterministic terms of the Dickey-Fuller regression.
enum class AdfSpec {
    NoDeterministic,  // step 2 of the two-step cointegration test
    Drift,            // constant
    Trend             // constant + linear trend (default for level series)
};

namespace detail {

// Dickey-Fuller t-statistic percentiles (Fuller 1976; the tables behind the
// standard R/EViews ADF p-values), indexed by sample size row and the
// probabilities 0.01, 0.025, 0.05, 0.10, 0.90, 0.95, 0.975, 0.99.
inline constexpr std::array<double, 6> kAdfTableSizes = {25, 50, 100, 250, 500, 100000};
inline constexpr std::array<double, 8> kAdfTableProbs = {0.01, 0.025, 0.05,  0.10,
                                                         0.90, 0.95,  0.975, 0.99};

inline constexpr std::array<std::array<double, 8>, 6> kAdfTableTrend = {{
    {-4.38, -3.95, -3.60, -3.24, -1.14, -0.80, -0.50, -0.15},
    {-4.15, -3.80, -3.50, -3.18, -1.19, -0.87, -0.58, -0.24},
    {-4.04, -3.73, -3.45, -3.15, -1.22, -0.90, -0.62, -0.28},
    {-3.99, -3.69, -3.43, -3.13, -1.23, -0.92, -0.64, -0.31},
    {-3.98, -3.68, -3.42, -3.13, -1.24, -0.93, -0.65, -0.32},
    {-3.96, -3.66, -3.41, -3.12, -1.25, -0.94, -0.66, -0.33},
}};

inline constexpr std::array<std::array<double, 8>, 6> kAdfTableDrift = {{
    {-3.75, -3.33, -3.00, -2.63, -0.37, 0.00, 0.34, 0.72},
    {-3.58, -3.22, -2.93, -2.60, -0.40, -0.03, 0.29, 0.66},
    {-3.51, -3.17, -2.89, -2.58, -0.42, -0.05, 0.26, 0.63},
    {-3.46, -3.14, -2.88, -2.57, -0.42, -0.06, 0.24, 0.62},
    {-3.44, -3.13, -2.87, -2.57, -0.43, -0.07, 0.24, 0.61},
    {-3.43, -3.12, -2.86, -2.57, -0.44, -0.07, 0.23, 0.60},
}};

inline constexpr std::array<std::array<double, 8>, 6> kAdfTableNone = {{
    {-2.66, -2.26, -1.95, -1.60, 0.92, 1.33, 1.70, 2.16},
    {-2.62, -2.25, -1.95, -1.61, 0.91, 1.31, 1.66, 2.08},
    {-2.60, -2.24, -1.95, -1.61, 0.90, 1.29, 1.64, 2.03},
    {-2.58, -2.23, -1.95, -1.62, 0.89, 1.29, 1.63, 2.01},
    {-2.58, -2.23, -1.95, -1.62, 0.89, 1.28, 1.62, 2.00},
    {-2.58, -2.23, -1.95, -1.62, 0.89, 1.28, 1.62, 2.00},
}};

inline const std::array<std::array<double, 8>, 6>& adf_table(AdfSpec spec) {
    switch (spec) {
        case AdfSpec::NoDeterministic: return kAdfTableNone;
        case AdfSpec::Drift: return kAdfTableDrift;
        case AdfSpec::Trend: return kAdfTableTrend;
    }
    return kAdfTableTrend;
}

inline double linear_interp(double x, const double* xs, const double* ys, std::size_t count) {
    if (x <= xs[0]) return ys[0];
    if (x >= xs[count - 1]) return ys[count - 1];
    std::size_t i = 1;
    while (x > xs[i]) ++i;
    const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return ys[i - 1] + w * (ys[i] - ys[i - 1]);
}

/// Interpolated p-value for a Dickey-Fuller t-statistic; clamped to
/// [0.01, 0.99] with a flag when the statistic falls off the table.
inline std::pair<double, bool> adf_p_value(double statistic, double nobs, AdfSpec spec) {
    const auto& table = adf_table(spec);
    std::array<double, 8> row{};
    for (std::size_t p = 0; p < 8; ++p) {
        std::array<double, 6> column{};
        for (std::size_t s = 0; s < 6; ++s) column[s] = table[s][p];
        row[p] = linear_interp(nobs, kAdfTableSizes.data(), column.data(), 6);
    }
    if (statistic <= row.front()) return {0.01, true};
    if (statistic >= row.back()) return {0.99, true};
    return {linear_interp(statistic, row.data(), kAdfTableProbs.data(), 8), false};
}

} // namespace detail

struct AdfOptions {
    int lag_order = -1;  // -1: automatic floor((J - 1)^(1/3))
    AdfSpec spec = AdfSpec::Trend;
};

struct AdfResult {
    TestReport report;
    double coefficient = 0.0;  // on the lagged level
    int lag_order = 0;
};

/// Augmented Dickey-Fuller unit-root test: the t-ratio on y_{t-1} in the
/// regression of the first difference on deterministic terms, the lagged
/// level, and lagged differences. Null: unit root (non-stationary).
inline AdfResult adf_test_full(const std::vector<double>& series, AdfOptions options = {}) {
    const auto j = static_cast<Eigen::Index>(series.size());
    const int lags = options.lag_order >= 0
                         ? options.lag_order
                         : static_cast<int>(std::floor(std::cbrt(static_cast<double>(j - 1))));
    if (j < 3 * (static_cast<Eigen::Index>(lags) + 2)) {
        throw InputError("adf_test: series of length " + std::to_string(j) +
                         " too short for lag order " + std::to_string(lags));
    }

    const Eigen::Index rows = j - 1 - lags;  // usable Delta-y observations
    const int det = options.spec == AdfSpec::Trend ? 2
                    : options.spec == AdfSpec::Drift ? 1
                                                     : 0;
    Eigen::MatrixXd x(rows, det + 1 + lags);
    Eigen::VectorXd dy(rows);
    std::vector<std::string> labels;
    for (Eigen::Index r = 0; r < rows; ++r) {
        const Eigen::Index t = r + lags + 1;  // index into the level series
        Eigen::Index c = 0;
        if (det >= 1) x(r, c++) = 1.0;
        if (det == 2) x(r, c++) = static_cast<double>(t);
        x(r, c++) = series[static_cast<std::size_t>(t - 1)];
        for (int i = 1; i <= lags; ++i) {
            x(r, c++) = series[static_cast<std::size_t>(t - i)] -
                        series[static_cast<std::size_t>(t - i - 1)];
        }
        dy[r] = series[static_cast<std::size_t>(t)] - series[static_cast<std::size_t>(t - 1)];
    }
    if (det >= 1) labels.emplace_back("const");
    if (det == 2) labels.emplace_back("trend");
    labels.emplace_back("y.lag1");
    for (int i = 1; i <= lags; ++i) labels.push_back("dy.lag" + std::to_string(i));

    const OlsFit fit = ols(x, dy, labels);
    const Eigen::Index level_col = det;
    const double statistic = fit.t_ratio(level_col);
    const auto [p_value, clamped] =
        detail::adf_p_value(statistic, static_cast<double>(rows), options.spec);

    AdfResult result;
    result.coefficient = fit.coef[level_col];
    result.lag_order = lags;
    result.report.name = "adf";
    result.report.statistic = statistic;
    result.report.p_value = p_value;
    result.report.p_value_clamped = clamped;
    result.report.dof = "Dickey-Fuller t distribution, n = " + std::to_string(rows);
    result.report.reject_at_5pct = p_value < 0.05;
    result.report.details =
        std::string("H0: unit root; deterministic terms: ") +
        (options.spec == AdfSpec::Trend ? "constant+trend"
         : options.spec == AdfSpec::Drift ? "constant"
                                          : "none") +
        "; lag order " + std::to_string(lags);
    return result;
}

inline TestReport adf_test(const std::vector<double>& series, AdfOptions options = {}) {
    return adf_test_full(series, options).report;
}

} // namespace frm::econ
