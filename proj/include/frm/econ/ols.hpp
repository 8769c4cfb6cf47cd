#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "frm/errors.hpp"

namespace frm::econ {

struct OlsFit {
    Eigen::VectorXd coef;
    Eigen::VectorXd residuals;
    Eigen::MatrixXd xtx_inverse;  // (X'X)^-1, for standard errors
    double s2 = 0.0;              // RSS / (n - k)
    Eigen::Index nobs = 0;
    Eigen::Index nparams = 0;

    double se(Eigen::Index k) const { return std::sqrt(s2 * xtx_inverse(k, k)); }
    double t_ratio(Eigen::Index k) const { return coef[k] / se(k); }
};

/// Least squares with a rank check; rank-deficient designs raise RankError
/// naming the offending columns.
inline OlsFit ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                  const std::vector<std::string>& column_labels = {}) {
    if (x.rows() != y.size() || x.rows() <= x.cols()) {
        throw InputError("ols: need more observations than parameters");
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    qr.setThreshold(1e-10);
    if (qr.rank() < x.cols()) {
        std::string bad;
        const auto perm = qr.colsPermutation().indices();
        for (Eigen::Index i = qr.rank(); i < x.cols(); ++i) {
            const auto col = perm[i];
            if (!bad.empty()) bad += ", ";
            bad += column_labels.empty() || col >= static_cast<Eigen::Index>(column_labels.size())
                       ? "column " + std::to_string(col)
                       : column_labels[static_cast<std::size_t>(col)];
        }
        throw RankError("ols: rank-deficient design (collinear: " + bad + ")");
    }
    OlsFit fit;
    fit.coef = qr.solve(y);
    fit.residuals = y - x * fit.coef;
    fit.nobs = x.rows();
    fit.nparams = x.cols();
    fit.s2 = fit.residuals.squaredNorm() / static_cast<double>(fit.nobs - fit.nparams);
    fit.xtx_inverse = (x.transpose() * x).inverse();
    return fit;
}

} // namespace frm::econ
