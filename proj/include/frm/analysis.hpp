#pragma once

// Validation workflows wiring the econometrics suite: stationarity
// screening, differencing, order policy, residual diagnostics, and the final
// causality / cointegration / cross-correlation reports, emitted as one
// machine-readable decision trail.

#include <Eigen/Dense>

#include <json.hpp>

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "frm/dates.hpp"
#include "frm/econ/adf.hpp"
#include "frm/econ/cointegration.hpp"
#include "frm/econ/crosscorr.hpp"
#include "frm/econ/granger.hpp"
#include "frm/econ/residual_tests.hpp"
#include "frm/econ/spline.hpp"
#include "frm/econ/var.hpp"
#include "frm/errors.hpp"

namespace frm {

using DatedSeries = std::vector<std::pair<Date, double>>;

struct AlignedPair {
    std::vector<Date> dates;
    std::vector<double> frm;
    std::vector<double> other;
    std::string other_name = "other";
    bool other_interpolated = false;
};

/// Align a comparison series onto the index dates. When the other series is
/// coarser (e.g. weekly), it is cubic-interpolated onto the index calendar;
/// otherwise plain date intersection applies.
inline AlignedPair align_series(const DatedSeries& frm_series, const DatedSeries& other,
                                std::string other_name = "other",
                                std::size_t min_overlap = 100) {
    if (frm_series.empty() || other.empty()) throw InputError("align_series: empty input series");
    const Date lo = std::max(frm_series.front().first, other.front().first);
    const Date hi = std::min(frm_series.back().first, other.back().first);

    std::map<Date, double> other_map(other.begin(), other.end());
    AlignedPair pair;
    pair.other_name = std::move(other_name);
    std::vector<Date> missing;
    for (const auto& [date, value] : frm_series) {
        if (date < lo || hi < date) continue;
        pair.dates.push_back(date);
        pair.frm.push_back(value);
        const auto it = other_map.find(date);
        if (it != other_map.end()) {
            pair.other.push_back(it->second);
        } else {
            missing.push_back(date);
            pair.other.push_back(std::numeric_limits<double>::quiet_NaN());
        }
    }
    if (!missing.empty()) {
        // coarser comparison series: fill the index dates by interpolation
        const std::vector<double> filled = econ::cubic_interpolate(other, pair.dates);
        pair.other = filled;
        pair.other_interpolated = true;
    }
    if (pair.dates.size() < min_overlap) {
        throw InputError("align_series: only " + std::to_string(pair.dates.size()) +
                         " common dates; need at least " + std::to_string(min_overlap));
    }
    return pair;
}

struct OrderPolicy {
    int chosen = 1;
    bool criterion_fallback = false;  // no candidate passed the residual test
    int bg_lags = 5;
    std::vector<int> candidates;
};

/// Automatic stand-in for the manual order search of the reference
/// procedure: the smallest order between the criterion suggestions whose
/// Breusch-Godfrey test passes at 5%; if none passes, fall back to the
/// AIC suggestion and flag the choice.
inline OrderPolicy choose_var_order(const Eigen::MatrixXd& data,
                                    const econ::OrderSelection& selection, int bg_lags = 5) {
    OrderPolicy policy;
    policy.bg_lags = bg_lags;
    const int lo = std::max(1, std::min({selection.aic, selection.hq, selection.sc, selection.fpe}));
    const int hi = std::max({1, selection.aic, selection.hq, selection.sc, selection.fpe});
    for (int order = lo; order <= hi; ++order) {
        policy.candidates.push_back(order);
        try {
            const econ::VarModel model = econ::fit_var(data, order);
            if (!econ::breusch_godfrey_test(model, bg_lags).reject_at_5pct) {
                policy.chosen = order;
                return policy;
            }
        } catch (const Error&) {
            // candidate infeasible on this sample; keep scanning
        }
    }
    policy.chosen = std::max(1, selection.aic);
    policy.criterion_fallback = true;
    return policy;
}

namespace detail {

inline nlohmann::json order_selection_json(const econ::OrderSelection& sel) {
    return nlohmann::json{{"aic", sel.aic},        {"hq", sel.hq},
                          {"sc", sel.sc},          {"fpe", sel.fpe},
                          {"aic_values", sel.aic_values}, {"hq_values", sel.hq_values},
                          {"sc_values", sel.sc_values},   {"fpe_values", sel.fpe_values}};
}

inline int clamp_max_order(int requested, Eigen::Index j, Eigen::Index k) {
    int max_order = requested;
    while (max_order > 1) {
        const Eigen::Index t_eff = j - max_order;
        if (t_eff > k * max_order + k + 1) break;
        --max_order;
    }
    return max_order;
}

} // namespace detail

/// Granger-causality workflow: ADF screening (difference the index when its
/// level fails at 5%, named DFRM), order selection and policy, residual
/// diagnostics, then the test in both directions.
inline nlohmann::json granger_flow(const AlignedPair& pair, int max_order,
                                   econ::AdfSpec adf_spec = econ::AdfSpec::Trend) {
    nlohmann::json trail;
    trail["mode"] = "granger";
    trail["other_interpolated"] = pair.other_interpolated;

    const econ::AdfOptions adf_options{-1, adf_spec};
    auto adf_frm = econ::adf_test(pair.frm, adf_options);
    adf_frm.name = "adf_FRM";
    auto adf_other = econ::adf_test(pair.other, adf_options);
    adf_other.name = "adf_" + pair.other_name;
    trail["stationarity"] = nlohmann::json::array({to_json(adf_frm), to_json(adf_other)});

    const bool difference = !adf_frm.reject_at_5pct;
    trail["differenced"] = difference;
    std::vector<double> lhs = pair.frm;
    std::vector<double> rhs = pair.other;
    std::string lhs_name = "FRM";
    if (difference) {
        std::vector<double> dfrm;
        for (std::size_t t = 1; t < pair.frm.size(); ++t) {
            dfrm.push_back(pair.frm[t] - pair.frm[t - 1]);
        }
        lhs = std::move(dfrm);
        rhs.erase(rhs.begin());
        lhs_name = "DFRM";
        auto adf_dfrm = econ::adf_test(lhs, adf_options);
        adf_dfrm.name = "adf_DFRM";
        trail["stationarity"].push_back(to_json(adf_dfrm));
    }
    trail["series"] = {{"lhs", lhs_name}, {"rhs", pair.other_name}};

    Eigen::MatrixXd data(static_cast<Eigen::Index>(lhs.size()), 2);
    for (std::size_t t = 0; t < lhs.size(); ++t) {
        data(static_cast<Eigen::Index>(t), 0) = lhs[t];
        data(static_cast<Eigen::Index>(t), 1) = rhs[t];
    }

    const int usable_max = detail::clamp_max_order(max_order, data.rows(), 2);
    trail["max_order"] = usable_max;
    const econ::OrderSelection selection = econ::select_var_order(data, usable_max);
    trail["order_selection"] = detail::order_selection_json(selection);

    const OrderPolicy policy = choose_var_order(data, selection);
    trail["order_policy"] = {{"chosen", policy.chosen},
                             {"criterion_fallback", policy.criterion_fallback},
                             {"bg_lags", policy.bg_lags},
                             {"candidates", policy.candidates}};

    const std::vector<std::string> labels{lhs_name, pair.other_name};
    const econ::VarModel model = econ::fit_var(data, policy.chosen, labels);
    const int pt_lags = policy.chosen + 8;
    trail["residual_tests"] = nlohmann::json::array(
        {to_json(econ::portmanteau_test(model, pt_lags, false)),
         to_json(econ::portmanteau_test(model, pt_lags, true)),
         to_json(econ::breusch_godfrey_test(model, policy.bg_lags))});

    auto forward = econ::granger_test(data, policy.chosen, labels, {lhs_name}, {pair.other_name});
    forward.name = "granger_" + lhs_name + "_to_" + pair.other_name;
    auto backward = econ::granger_test(data, policy.chosen, labels, {pair.other_name}, {lhs_name});
    backward.name = "granger_" + pair.other_name + "_to_" + lhs_name;
    trail["granger"] = nlohmann::json::array({to_json(forward), to_json(backward)});
    return trail;
}

/// Two-step cointegration workflow, run in both regression directions.
inline nlohmann::json cointegration_flow(const AlignedPair& pair,
                                         econ::EngleGrangerOptions options = {},
                                         econ::AdfSpec adf_spec = econ::AdfSpec::Trend) {
    nlohmann::json trail;
    trail["mode"] = "cointegration";
    trail["other_interpolated"] = pair.other_interpolated;

    const econ::AdfOptions adf_options{-1, adf_spec};
    auto adf_frm = econ::adf_test(pair.frm, adf_options);
    adf_frm.name = "adf_FRM";
    auto adf_other = econ::adf_test(pair.other, adf_options);
    adf_other.name = "adf_" + pair.other_name;
    trail["stationarity"] = nlohmann::json::array({to_json(adf_frm), to_json(adf_other)});
    trail["both_nonstationary"] = !adf_frm.reject_at_5pct && !adf_other.reject_at_5pct;

    auto forward = econ::engle_granger_test_full(pair.frm, pair.other, options);
    forward.report.name = "engle_granger_FRM_explains_" + pair.other_name;
    auto backward = econ::engle_granger_test_full(pair.other, pair.frm, options);
    backward.report.name = "engle_granger_" + pair.other_name + "_explains_FRM";
    trail["engle_granger"] = nlohmann::json::array({to_json(forward.report), to_json(backward.report)});
    trail["critical_value_5pct"] = forward.critical_5pct;
    return trail;
}

/// Cross-correlation lag study.
inline nlohmann::json ccf_flow(const AlignedPair& pair, int max_lag) {
    const auto ccf = econ::cross_correlation(pair.frm, pair.other, max_lag);
    nlohmann::json values = nlohmann::json::array();
    int best_lag = 0;
    double best = -2.0;
    for (const auto& [lag, value] : ccf) {
        values.push_back({{"lag", lag}, {"ccf", value}});
        if (value > best) {
            best = value;
            best_lag = lag;
        }
    }
    return nlohmann::json{{"mode", "ccf"},
                          {"other_interpolated", pair.other_interpolated},
                          {"max_lag", max_lag},
                          {"convention", "lag l correlates FRM_t with " + pair.other_name + "_{t+l}"},
                          {"argmax", {{"lag", best_lag}, {"ccf", best}}},
                          {"values", values}};
}

} // namespace frm
