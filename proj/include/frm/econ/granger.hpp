#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <string>
#include <vector>

#include "frm/econ/distributions.hpp"
#include "frm/econ/report.hpp"
#include "frm/econ/var.hpp"
#include "frm/errors.hpp"

namespace frm::econ {

/// Granger non-causality Wald test on a VAR(P): H0 sets every coefficient
/// of the cause-block lags to zero in the effect-block equations. The
/// statistic is referred to an F distribution with P*K1*K2 numerator and
/// K*T - n* denominator degrees of freedom, n* being the full parameter
/// count of the VAR.
inline TestReport granger_test(const Eigen::MatrixXd& data, int order,
                               const std::vector<std::string>& labels,
                               const std::vector<std::string>& cause_block,
                               const std::vector<std::string>& effect_block) {
    if (cause_block.empty() || effect_block.empty()) {
        throw ArgumentError("granger_test: cause and effect blocks must be non-empty");
    }
    for (const auto& c : cause_block) {
        if (std::find(effect_block.begin(), effect_block.end(), c) != effect_block.end()) {
            throw ArgumentError("granger_test: blocks overlap on '" + c + "'");
        }
    }
    const auto index_of = [&](const std::string& label) {
        const auto it = std::find(labels.begin(), labels.end(), label);
        if (it == labels.end()) throw LookupError("granger_test: unknown series '" + label + "'");
        return static_cast<Eigen::Index>(it - labels.begin());
    };
    std::vector<Eigen::Index> cause, effect;
    for (const auto& l : cause_block) cause.push_back(index_of(l));
    for (const auto& l : effect_block) effect.push_back(index_of(l));

    const VarModel model = fit_var(data, order, labels);
    const Eigen::Index k = model.k();
    const Eigen::Index t = model.effective_sample();
    const Eigen::Index rows_per_eq = model.coef_stacked.rows();  // K*P + 1

    // covariance of vec(B): Sigma_u (x) (Z'Z)^-1, df-corrected Sigma_u
    const Eigen::MatrixXd ztz_inv =
        (model.regressors.transpose() * model.regressors).inverse();
    const Eigen::MatrixXd sigma_u = model.residuals.transpose() * model.residuals /
                                    static_cast<double>(t - rows_per_eq);

    // restricted coordinates: (equation e, regressor = cause c at lag i)
    struct Coord {
        Eigen::Index eq, reg;
    };
    std::vector<Coord> coords;
    for (Eigen::Index e : effect) {
        for (int i = 1; i <= order; ++i) {
            for (Eigen::Index c : cause) {
                coords.push_back({e, 1 + static_cast<Eigen::Index>(i - 1) * k + c});
            }
        }
    }
    const auto q = static_cast<Eigen::Index>(coords.size());

    Eigen::VectorXd rb(q);
    Eigen::MatrixXd rvr(q, q);
    for (Eigen::Index a = 0; a < q; ++a) {
        rb[a] = model.coef_stacked(coords[static_cast<std::size_t>(a)].reg,
                                   coords[static_cast<std::size_t>(a)].eq);
        for (Eigen::Index b = 0; b < q; ++b) {
            rvr(a, b) = sigma_u(coords[static_cast<std::size_t>(a)].eq,
                                coords[static_cast<std::size_t>(b)].eq) *
                        ztz_inv(coords[static_cast<std::size_t>(a)].reg,
                                coords[static_cast<std::size_t>(b)].reg);
        }
    }
    const double wald = rb.dot(rvr.ldlt().solve(rb));
    const double f_stat = wald / static_cast<double>(q);
    const double den_dof =
        static_cast<double>(k) * static_cast<double>(t) - static_cast<double>(k * rows_per_eq);

    TestReport report;
    report.name = "granger";
    report.statistic = f_stat;
    report.p_value = 1.0 - f_cdf(f_stat, static_cast<double>(q), den_dof);
    report.dof = "F(" + std::to_string(q) + ", " + std::to_string(static_cast<long>(den_dof)) + ")";
    report.reject_at_5pct = report.p_value < 0.05;
    std::string causes, effects;
    for (const auto& l : cause_block) causes += (causes.empty() ? "" : "+") + l;
    for (const auto& l : effect_block) effects += (effects.empty() ? "" : "+") + l;
    report.details = "H0: " + causes + " does not Granger-cause " + effects + " in a VAR(" +
                     std::to_string(order) + ")";
    return report;
}

} // namespace frm::econ
