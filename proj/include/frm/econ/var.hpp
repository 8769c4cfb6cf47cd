#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <vector>

#include "frm/econ/ols.hpp"
#include "frm/errors.hpp"

namespace frm::econ {

/// Fitted VAR(P): y_t = intercept + A_1 y_{t-1} + ... + A_P y_{t-P} + u_t,
/// estimated equation by equation with least squares.
struct VarModel {
    int order = 0;
    Eigen::VectorXd intercept;                   // K
    std::vector<Eigen::MatrixXd> coefficients;   // P matrices A_i, K x K
    Eigen::MatrixXd residuals;                   // (J - P) x K
    Eigen::MatrixXd sigma;                       // residual covariance, ML divisor J - P
    Eigen::Index sample_size = 0;                // J
    std::vector<std::string> series_labels;

    // estimation internals kept for the residual diagnostics and Wald tests
    Eigen::MatrixXd regressors;    // Z: (J - P) x (K*P + 1), [1, y_{t-1}, ..., y_{t-P}]
    Eigen::MatrixXd coef_stacked;  // B: (K*P + 1) x K, column k = equation k

    Eigen::Index k() const { return intercept.size(); }
    Eigen::Index effective_sample() const { return residuals.rows(); }
};

namespace detail {

/// Lag matrix Z and response block Y over rows first_row..J-1.
inline void build_var_design(const Eigen::MatrixXd& data, int order, Eigen::Index first_row,
                             Eigen::MatrixXd& z, Eigen::MatrixXd& y) {
    const Eigen::Index j = data.rows();
    const Eigen::Index k = data.cols();
    const Eigen::Index rows = j - first_row;
    z.resize(rows, k * order + 1);
    y.resize(rows, k);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const Eigen::Index t = first_row + r;
        z(r, 0) = 1.0;
        for (int lag = 1; lag <= order; ++lag) {
            z.block(r, 1 + static_cast<Eigen::Index>(lag - 1) * k, 1, k) = data.row(t - lag);
        }
        y.row(r) = data.row(t);
    }
}

} // namespace detail

inline VarModel fit_var(const Eigen::MatrixXd& data, int order,
                        std::vector<std::string> labels = {}) {
    const Eigen::Index j = data.rows();
    const Eigen::Index k = data.cols();
    if (order < 1) throw ArgumentError("fit_var: order must be at least 1");
    if (j <= k * order + k + 1) {
        throw InputError("fit_var: sample of " + std::to_string(j) +
                         " rows too short for VAR(" + std::to_string(order) + ") in " +
                         std::to_string(k) + " variables");
    }
    if (!data.allFinite()) throw ArgumentError("fit_var: non-finite data");
    if (labels.empty()) {
        for (Eigen::Index c = 0; c < k; ++c) labels.push_back("y" + std::to_string(c + 1));
    }

    Eigen::MatrixXd z, y;
    detail::build_var_design(data, order, order, z, y);

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(z);
    qr.setThreshold(1e-10);
    if (qr.rank() < z.cols()) {
        std::string bad;
        const auto perm = qr.colsPermutation().indices();
        for (Eigen::Index i = qr.rank(); i < z.cols(); ++i) {
            const Eigen::Index col = perm[i];
            if (!bad.empty()) bad += ", ";
            if (col == 0) {
                bad += "const";
            } else {
                const Eigen::Index lag = (col - 1) / k + 1;
                const Eigen::Index var = (col - 1) % k;
                bad += labels[static_cast<std::size_t>(var)] + ".l" + std::to_string(lag);
            }
        }
        throw RankError("fit_var: singular regressor cross-product (collinear: " + bad + ")");
    }

    VarModel model;
    model.order = order;
    model.sample_size = j;
    model.series_labels = std::move(labels);
    model.coef_stacked = qr.solve(y);
    model.regressors = std::move(z);
    model.residuals = y - model.regressors * model.coef_stacked;
    model.sigma = model.residuals.transpose() * model.residuals /
                  static_cast<double>(model.residuals.rows());
    model.intercept = model.coef_stacked.row(0).transpose();
    model.coefficients.reserve(static_cast<std::size_t>(order));
    for (int i = 0; i < order; ++i) {
        // A_i(row = equation, col = lagged variable)
        model.coefficients.push_back(
            model.coef_stacked.middleRows(1 + static_cast<Eigen::Index>(i) * k, k).transpose());
    }
    return model;
}

/// Per-criterion order suggestions, all orders fitted on the sample aligned
/// at max_order so the criteria are comparable.
struct OrderSelection {
    int aic = 0;
    int hq = 0;
    int sc = 0;
    int fpe = 0;
    std::vector<double> aic_values;  // index = order, starting at 0
    std::vector<double> hq_values;
    std::vector<double> sc_values;
    std::vector<double> fpe_values;
};

inline OrderSelection select_var_order(const Eigen::MatrixXd& data, int max_order) {
    const Eigen::Index j = data.rows();
    const Eigen::Index k = data.cols();
    if (max_order < 1) throw ArgumentError("select_var_order: max_order must be at least 1");
    const Eigen::Index t_eff = j - max_order;
    if (t_eff <= k * max_order + k + 1) {
        throw InputError("select_var_order: max_order " + std::to_string(max_order) +
                         " too large for " + std::to_string(j) + " observations");
    }

    OrderSelection sel;
    const double t = static_cast<double>(t_eff);
    for (int m = 0; m <= max_order; ++m) {
        Eigen::MatrixXd z, y;
        detail::build_var_design(data, m, max_order, z, y);
        const Eigen::MatrixXd b =
            z.colPivHouseholderQr().solve(y);
        const Eigen::MatrixXd resid = y - z * b;
        const Eigen::MatrixXd sigma = resid.transpose() * resid / t;
        const double log_det = std::log(sigma.determinant());
        const double params = static_cast<double>(m) * static_cast<double>(k * k);
        const double per_eq = static_cast<double>(k * m + 1);

        sel.aic_values.push_back(log_det + 2.0 * params / t);
        sel.hq_values.push_back(log_det + 2.0 * std::log(std::log(t)) * params / t);
        sel.sc_values.push_back(log_det + std::log(t) * params / t);
        sel.fpe_values.push_back(std::pow((t + per_eq) / (t - per_eq), static_cast<double>(k)) *
                                 sigma.determinant());
    }
    const auto argmin = [](const std::vector<double>& values) {
        int best = 0;
        for (int i = 1; i < static_cast<int>(values.size()); ++i) {
            if (values[static_cast<std::size_t>(i)] < values[static_cast<std::size_t>(best)]) {
                best = i;
            }
        }
        return best;
    };
    sel.aic = argmin(sel.aic_values);
    sel.hq = argmin(sel.hq_values);
    sel.sc = argmin(sel.sc_values);
    sel.fpe = argmin(sel.fpe_values);
    return sel;
}

} // namespace frm::econ
