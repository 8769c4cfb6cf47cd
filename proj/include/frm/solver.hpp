#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "frm/errors.hpp"

namespace frm {

/// Asymmetric absolute loss of quantile regression: tau*u for u > 0,
/// (1-tau)*|u| for u <= 0.
inline double check_loss(double u, double tau) {
    if (!(tau > 0.0 && tau < 1.0)) {
        throw ArgumentError("check_loss: tau must lie strictly inside (0,1)");
    }
    if (!std::isfinite(u)) {
        throw ArgumentError("check_loss: non-finite argument");
    }
    return u > 0.0 ? tau * u : (1.0 - tau) * (-u);
}

/// One penalized quantile regression instance over a moving window.
struct QuantileProblem {
    Eigen::VectorXd responses;  // n window observations of the target firm
    Eigen::MatrixXd design;     // n x p: lagged macro columns + other-firm returns
    double tau = 0.05;
    int window_id = 0;
    int firm_id = 0;

    Eigen::Index n() const { return responses.size(); }
    Eigen::Index p() const { return design.cols(); }

    void validate() const {
        if (n() < 2) throw ArgumentError("QuantileProblem: need at least 2 observations");
        if (p() < 1) throw ArgumentError("QuantileProblem: need at least 1 covariate");
        if (design.rows() != n()) {
            throw ArgumentError("QuantileProblem: design row count does not match responses");
        }
        if (!(tau > 0.0 && tau < 1.0)) {
            throw ArgumentError("QuantileProblem: tau must lie strictly inside (0,1)");
        }
        if (!responses.allFinite() || !design.allFinite()) {
            throw ArgumentError("QuantileProblem: non-finite entries in responses or design");
        }
    }
};

/// Solution of one penalized quantile regression.
struct LassoFit {
    double alpha = 0.0;         // intercept
    Eigen::VectorXd beta;       // p coefficients, exact zeros after cleanup
    Eigen::VectorXd residuals;  // responses - alpha - design*beta
    double lambda = 0.0;
    int df = 0;                 // elbow observations interpolated by the fit
    double objective = 0.0;     // n^-1 * sum check_loss + lambda * ||beta||_1
    double tau = 0.5;
};

/// Interior-point run record, exposed for logging and optimality certificates.
struct SolverDiagnostics {
    int iterations = 0;
    double duality_gap = 0.0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    Eigen::VectorXd psi;  // per-observation check-loss subgradient witness (n * dual)
};

/// Search grid for the penalization parameter.
struct LambdaGrid {
    std::vector<double> values;  // strictly increasing, last entry == lambda_max
    double lambda_max = 0.0;

    void validate() const {
        if (values.empty()) throw ArgumentError("LambdaGrid: empty grid");
        double prev = 0.0;
        for (double v : values) {
            if (!(v > prev)) throw ArgumentError("LambdaGrid: values must be strictly increasing and positive");
            prev = v;
        }
        if (values.back() != lambda_max) {
            throw ArgumentError("LambdaGrid: last entry must equal lambda_max");
        }
    }
};

namespace detail {

/// Left-continuous empirical tau-quantile (lower order statistic on ties).
inline double lower_quantile(Eigen::VectorXd values, double tau) {
    const Eigen::Index n = values.size();
    std::sort(values.data(), values.data() + n);
    // ceil(n*tau) as an order statistic, robust to representation noise
    auto idx = static_cast<Eigen::Index>(std::ceil(static_cast<double>(n) * tau - 1e-9));
    idx = std::clamp<Eigen::Index>(idx, 1, n);
    return values[idx - 1];
}

inline double elbow_tolerance(const Eigen::VectorXd& responses) {
    return 1e-8 * (1.0 + responses.cwiseAbs().maxCoeff());
}

/// Columns with any nonzero entry; zero columns are excluded from the LP and
/// their coefficients pinned to zero.
inline std::vector<Eigen::Index> active_columns(const Eigen::MatrixXd& design) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index k = 0; k < design.cols(); ++k) {
        if (design.col(k).cwiseAbs().maxCoeff() > 0.0) idx.push_back(k);
    }
    return idx;
}

/// Mehrotra predictor-corrector interior-point method on the LP
///   min c_v'v  s.t.  W v + G g = x,  v >= 0,  g free,
/// where the nonnegative block is [beta+; beta-; u+; u-] for lambda > 0 and
/// [u+; u-] for lambda == 0 (coefficients join the free block with the
/// intercept when unpenalized, which keeps the optimal face bounded).
class QrLassoIpm {
public:
    QrLassoIpm(const Eigen::VectorXd& x, const Eigen::MatrixXd& a_active, double tau, double lambda)
        : x_(x), A_(a_active), tau_(tau), lambda_(lambda),
          n_(x.size()), a_(a_active.cols()), penalized_(lambda > 0.0) {
        nv_ = penalized_ ? 2 * a_ + 2 * n_ : 2 * n_;
        q_ = penalized_ ? 1 : a_ + 1;
        cv_.resize(nv_);
        if (penalized_) {
            cv_.segment(0, a_).setConstant(lambda_);
            cv_.segment(a_, a_).setConstant(lambda_);
            cv_.segment(2 * a_, n_).setConstant(tau_ / static_cast<double>(n_));
            cv_.segment(2 * a_ + n_, n_).setConstant((1.0 - tau_) / static_cast<double>(n_));
        } else {
            cv_.segment(0, n_).setConstant(tau_ / static_cast<double>(n_));
            cv_.segment(n_, n_).setConstant((1.0 - tau_) / static_cast<double>(n_));
        }
    }

    /// Runs the method; returns (alpha, beta_active) and fills diagnostics.
    std::pair<double, Eigen::VectorXd> solve(SolverDiagnostics& diag) {
        initialize();
        const double tol = 1e-10;
        const double tol_accept = 5e-9;  // beyond this the normal equations run out of digits
        const int max_iter = 100;

        // best-so-far snapshot; the endgame can destabilize once the KKT
        // matrix condition number approaches 1/mu^2
        double best_merit = std::numeric_limits<double>::infinity();
        Eigen::VectorXd best_v, best_g, best_y, best_z;

        int iter = 0;
        for (; iter < max_iter; ++iter) {
            compute_residuals();
            const double mu = v_.dot(z_) / static_cast<double>(nv_);
            const double m = merit(mu);
            if (m < best_merit) {
                best_merit = m;
                best_v = v_;
                best_g = g_;
                best_y = y_;
                best_z = z_;
            }
            if (m < tol) break;
            if (m > 1e3 * best_merit && best_merit < tol_accept) break;  // derailed endgame

            factorize();

            // predictor
            Eigen::VectorXd rc = -(v_.array() * z_.array()).matrix();
            Direction aff = solve_direction(rc);
            const double ap_aff = std::min(1.0, max_step(v_, aff.dv));
            const double ad_aff = std::min(1.0, max_step(z_, aff.dz));
            const double mu_aff = (v_ + ap_aff * aff.dv).dot(z_ + ad_aff * aff.dz) /
                                  static_cast<double>(nv_);
            double sigma = std::pow(mu_aff / std::max(mu, 1e-300), 3.0);
            sigma = std::clamp(sigma, 0.0, 1.0);

            // corrector
            rc = (sigma * mu - (aff.dv.array() * aff.dz.array()) -
                  (v_.array() * z_.array()))
                     .matrix();
            Direction dir = solve_direction(rc);

            const double gamma = 0.995;
            const double ap = std::min(1.0, gamma * max_step(v_, dir.dv));
            const double ad = std::min(1.0, gamma * max_step(z_, dir.dz));
            v_ += ap * dir.dv;
            g_ += ap * dir.dg;
            y_ += ad * dir.dy;
            z_ += ad * dir.dz;
        }

        if (best_merit < merit(v_.dot(z_) / static_cast<double>(nv_))) {
            v_ = best_v;
            g_ = best_g;
            y_ = best_y;
            z_ = best_z;
            compute_residuals();
        }
        diag.iterations = iter;
        diag.duality_gap = std::abs(primal_objective() - dual_objective());
        diag.primal_residual = rp_.cwiseAbs().maxCoeff() / (1.0 + x_.cwiseAbs().maxCoeff());
        diag.dual_residual = rd_.cwiseAbs().maxCoeff() / (1.0 + cv_.cwiseAbs().maxCoeff());
        diag.psi = static_cast<double>(n_) * y_;
        if (best_merit >= tol_accept) {
            throw SolverError("quantile lasso interior point failed to converge after " +
                                  std::to_string(iter) + " iterations (gap " +
                                  std::to_string(diag.duality_gap) + ")",
                              iter, diag.duality_gap);
        }

        Eigen::VectorXd beta_active(a_);
        if (penalized_) {
            beta_active = v_.segment(0, a_) - v_.segment(a_, a_);
        } else {
            beta_active = g_.segment(1, a_);
        }
        return {g_[0], beta_active};
    }

private:
    struct Direction {
        Eigen::VectorXd dv, dg, dy, dz;
    };

    void initialize() {
        const double alpha0 = lower_quantile(x_, tau_);
        g_ = Eigen::VectorXd::Zero(q_);
        g_[0] = alpha0;
        const Eigen::VectorXd r0 = x_.array() - alpha0;
        const double s0 = 0.1 * (1.0 + r0.cwiseAbs().mean());
        v_.resize(nv_);
        if (penalized_) {
            v_.segment(0, 2 * a_).setConstant(s0);
            v_.segment(2 * a_, n_) = r0.cwiseMax(0.0).array() + s0;
            v_.segment(2 * a_ + n_, n_) = (-r0).cwiseMax(0.0).array() + s0;
        } else {
            v_.segment(0, n_) = r0.cwiseMax(0.0).array() + s0;
            v_.segment(n_, n_) = (-r0).cwiseMax(0.0).array() + s0;
        }
        y_ = Eigen::VectorXd::Zero(n_);
        const double dz0 = 0.1 * (1.0 + cv_.cwiseAbs().maxCoeff());
        z_ = cv_.array() + dz0;
    }

    // W h for the current variable layout
    Eigen::VectorXd apply_w(const Eigen::VectorXd& h) const {
        if (penalized_) {
            Eigen::VectorXd out = A_ * (h.segment(0, a_) - h.segment(a_, a_));
            out += h.segment(2 * a_, n_) - h.segment(2 * a_ + n_, n_);
            return out;
        }
        return h.segment(0, n_) - h.segment(n_, n_);
    }

    // W' y
    Eigen::VectorXd apply_wt(const Eigen::VectorXd& y) const {
        Eigen::VectorXd out(nv_);
        if (penalized_) {
            const Eigen::VectorXd aty = A_.transpose() * y;
            out.segment(0, a_) = aty;
            out.segment(a_, a_) = -aty;
            out.segment(2 * a_, n_) = y;
            out.segment(2 * a_ + n_, n_) = -y;
        } else {
            out.segment(0, n_) = y;
            out.segment(n_, n_) = -y;
        }
        return out;
    }

    // G g: G = [1] when penalized, [1, A] otherwise
    Eigen::VectorXd apply_g(const Eigen::VectorXd& g) const {
        if (penalized_) return Eigen::VectorXd::Constant(n_, g[0]);
        return Eigen::VectorXd::Constant(n_, g[0]) + A_ * g.segment(1, a_);
    }

    Eigen::VectorXd apply_gt(const Eigen::VectorXd& y) const {
        Eigen::VectorXd out(q_);
        out[0] = y.sum();
        if (!penalized_) out.segment(1, a_) = A_.transpose() * y;
        return out;
    }

    void compute_residuals() {
        rp_ = x_ - apply_w(v_) - apply_g(g_);
        rd_ = cv_ - apply_wt(y_) - z_;
        rg_ = -apply_gt(y_);  // free-block dual feasibility, c_g = 0
    }

    double primal_objective() const { return cv_.dot(v_); }
    double dual_objective() const { return x_.dot(y_); }

    /// Worst of the scaled feasibility, gap, and centrality measures.
    double merit(double mu) const {
        const double scale_obj = 1.0 + std::abs(primal_objective()) + std::abs(dual_objective());
        const double rp = rp_.cwiseAbs().maxCoeff() / (1.0 + x_.cwiseAbs().maxCoeff());
        const double rd = rd_.cwiseAbs().maxCoeff() / (1.0 + cv_.cwiseAbs().maxCoeff());
        const double rg = rg_.cwiseAbs().maxCoeff();
        const double gap = std::abs(primal_objective() - dual_objective()) / scale_obj;
        return std::max({rp, rd, rg, gap, mu});
    }

    void factorize() {
        d_ = (v_.array() / z_.array()).cwiseMin(1e14).cwiseMax(1e-14).matrix();
        Eigen::MatrixXd m(n_, n_);
        if (penalized_) {
            const Eigen::VectorXd db = d_.segment(0, a_) + d_.segment(a_, a_);
            const Eigen::VectorXd du = d_.segment(2 * a_, n_) + d_.segment(2 * a_ + n_, n_);
            if (a_ > 0) {
                m.noalias() = A_ * db.asDiagonal() * A_.transpose();
            } else {
                m.setZero();
            }
            m.diagonal() += du;
        } else {
            m = Eigen::MatrixXd::Zero(n_, n_);
            m.diagonal() = d_.segment(0, n_) + d_.segment(n_, n_);
        }
        double jitter = 0.0;
        for (int attempt = 0; attempt < 12; ++attempt) {
            llt_.compute(m);
            if (llt_.info() == Eigen::Success) break;
            jitter = jitter == 0.0 ? 1e-12 * (1.0 + m.diagonal().maxCoeff()) : jitter * 100.0;
            m.diagonal().array() += jitter;
        }
        // Schur complement for the free block
        Eigen::MatrixXd gmat(n_, q_);
        gmat.col(0).setOnes();
        if (!penalized_) gmat.rightCols(a_) = A_;
        minv_g_ = llt_.solve(gmat);
        schur_ = gmat.transpose() * minv_g_;
        schur_ldlt_.compute(schur_);
        gmat_ = std::move(gmat);
    }

    Direction solve_kkt(const Eigen::VectorXd& rp, const Eigen::VectorXd& rd,
                        const Eigen::VectorXd& rg, const Eigen::VectorXd& rc) const {
        // rhs of the normal equations after eliminating dv and dz
        const Eigen::VectorXd t = d_.asDiagonal() * rd - (rc.array() / z_.array()).matrix();
        const Eigen::VectorXd f = rp + apply_w(t);
        const Eigen::VectorXd minv_f = llt_.solve(f);
        Direction dir;
        dir.dg = schur_ldlt_.solve(gmat_.transpose() * minv_f - rg);
        dir.dy = minv_f - minv_g_ * dir.dg;
        dir.dz = rd - apply_wt(dir.dy);
        dir.dv = (rc.array() - v_.array() * dir.dz.array()).matrix().cwiseQuotient(z_);
        return dir;
    }

    Direction solve_direction(const Eigen::VectorXd& rc) const {
        Direction dir = solve_kkt(rp_, rd_, rg_, rc);
        // one round of iterative refinement through the same factorization
        const Eigen::VectorXd e1 = rp_ - apply_w(dir.dv) - apply_g(dir.dg);
        const Eigen::VectorXd e2 = rd_ - apply_wt(dir.dy) - dir.dz;
        const Eigen::VectorXd e3 = rg_ - apply_gt(dir.dy);
        const Eigen::VectorXd e4 =
            rc - (z_.array() * dir.dv.array() + v_.array() * dir.dz.array()).matrix();
        const Direction fix = solve_kkt(e1, e2, e3, e4);
        dir.dv += fix.dv;
        dir.dg += fix.dg;
        dir.dy += fix.dy;
        dir.dz += fix.dz;
        return dir;
    }

    static double max_step(const Eigen::VectorXd& w, const Eigen::VectorXd& dw) {
        double step = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < w.size(); ++i) {
            if (dw[i] < 0.0) step = std::min(step, -w[i] / dw[i]);
        }
        return std::min(step, 1e16);
    }

    Eigen::VectorXd x_;
    Eigen::MatrixXd A_;
    double tau_, lambda_;
    Eigen::Index n_, a_, nv_, q_;
    bool penalized_;
    Eigen::VectorXd cv_;

    Eigen::VectorXd v_, g_, y_, z_;
    Eigen::VectorXd rp_, rd_, rg_, d_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
    Eigen::LDLT<Eigen::MatrixXd> schur_ldlt_;
    Eigen::MatrixXd minv_g_, schur_, gmat_;
};

}  // namespace detail

/// Solve the L1-penalized quantile regression at a fixed lambda.
///
/// The problem is recast as a linear program with split residuals and split
/// coefficients and solved by a primal-dual interior-point method; a cleanup
/// pass snaps coefficients below 1e-9 to exact zero and moves the intercept
/// to the left endpoint of its optimal interval (the lower empirical
/// quantile of the partial residuals), which pins the tie-break rule.
inline LassoFit solve_qr_lasso(const QuantileProblem& problem, double lambda,
                               SolverDiagnostics& diag) {
    problem.validate();
    if (!std::isfinite(lambda) || lambda < 0.0) {
        throw ArgumentError("solve_qr_lasso: lambda must be finite and nonnegative");
    }
    const Eigen::Index n = problem.n();
    const Eigen::Index p = problem.p();

    const auto active = detail::active_columns(problem.design);
    Eigen::MatrixXd a_act(n, static_cast<Eigen::Index>(active.size()));
    for (Eigen::Index j = 0; j < a_act.cols(); ++j) a_act.col(j) = problem.design.col(active[j]);

    double alpha;
    Eigen::VectorXd beta_active;
    if (a_act.cols() == 0) {
        // intercept-only problem
        alpha = detail::lower_quantile(problem.responses, problem.tau);
        beta_active.resize(0);
        diag = SolverDiagnostics{};
        const double etol = detail::elbow_tolerance(problem.responses);
        Eigen::VectorXd r = problem.responses.array() - alpha;
        diag.psi.resize(n);
        double remaining = 0.0;  // elbow subgradients must cancel the fixed part
        for (Eigen::Index t = 0; t < n; ++t) {
            if (r[t] > etol) {
                diag.psi[t] = problem.tau;
            } else if (r[t] < -etol) {
                diag.psi[t] = problem.tau - 1.0;
            } else {
                diag.psi[t] = std::numeric_limits<double>::quiet_NaN();
            }
            if (std::isfinite(diag.psi[t])) remaining -= diag.psi[t];
        }
        for (Eigen::Index t = 0; t < n; ++t) {
            if (!std::isfinite(diag.psi[t])) {
                const double c = std::clamp(remaining, problem.tau - 1.0, problem.tau);
                diag.psi[t] = c;
                remaining -= c;
            }
        }
    } else {
        detail::QrLassoIpm ipm(problem.responses, a_act, problem.tau, lambda);
        std::tie(alpha, beta_active) = ipm.solve(diag);
    }

    LassoFit fit;
    fit.lambda = lambda;
    fit.tau = problem.tau;
    fit.beta = Eigen::VectorXd::Zero(p);
    for (std::size_t j = 0; j < active.size(); ++j) {
        const double b = beta_active[static_cast<Eigen::Index>(j)];
        fit.beta[active[j]] = std::abs(b) < 1e-9 ? 0.0 : b;
    }

    // Crossover toward a sparse vertex of the optimal face. The interior
    // point converges to the analytic center, which can carry nonzero
    // coefficients that are objective-neutral (ties, e.g. at lambda_max).
    // Greedily zero any coefficient whose removal, with the intercept
    // re-centered, leaves the objective unchanged; then pin the intercept to
    // the left end of its optimal quantile interval.
    const auto objective_at = [&](const Eigen::VectorXd& beta, double* alpha_out,
                                  Eigen::VectorXd* partial_out) {
        const Eigen::VectorXd partial = problem.responses - problem.design * beta;
        const double a0 = detail::lower_quantile(partial, problem.tau);
        double loss = 0.0;
        for (Eigen::Index t = 0; t < n; ++t) loss += check_loss(partial[t] - a0, problem.tau);
        if (alpha_out) *alpha_out = a0;
        if (partial_out) *partial_out = partial;
        return loss / static_cast<double>(n) + lambda * beta.cwiseAbs().sum();
    };

    double obj_cur = objective_at(fit.beta, nullptr, nullptr);
    std::vector<Eigen::Index> support;
    for (Eigen::Index k = 0; k < p; ++k) {
        if (fit.beta[k] != 0.0) support.push_back(k);
    }
    std::sort(support.begin(), support.end(), [&](Eigen::Index i, Eigen::Index j) {
        return std::abs(fit.beta[i]) < std::abs(fit.beta[j]);
    });
    for (Eigen::Index k : support) {
        Eigen::VectorXd trial = fit.beta;
        trial[k] = 0.0;
        const double obj_try = objective_at(trial, nullptr, nullptr);
        if (obj_try <= obj_cur + 1e-9 * (1.0 + std::abs(obj_cur))) {
            fit.beta = std::move(trial);
            obj_cur = obj_try;
        }
    }

    objective_at(fit.beta, &fit.alpha, nullptr);
    // canonical evaluation order so callers can recompute bit-for-bit
    fit.residuals = problem.responses.array() - fit.alpha - (problem.design * fit.beta).array();

    const double tol = detail::elbow_tolerance(problem.responses);
    fit.df = static_cast<int>((fit.residuals.cwiseAbs().array() <= tol).count());

    double loss = 0.0;
    for (Eigen::Index t = 0; t < n; ++t) loss += check_loss(fit.residuals[t], problem.tau);
    fit.objective = loss / static_cast<double>(n) + lambda * fit.beta.cwiseAbs().sum();
    return fit;
}

inline LassoFit solve_qr_lasso(const QuantileProblem& problem, double lambda) {
    SolverDiagnostics diag;
    return solve_qr_lasso(problem, lambda, diag);
}

/// Smallest penalty that provably forces beta = 0, from the zero-coefficient
/// subgradient bound at the intercept-only fit. Subgradients at elbow points
/// are chosen to maximize the bound, so the value is conservative.
inline double compute_lambda_max(const QuantileProblem& problem) {
    problem.validate();
    const Eigen::Index n = problem.n();
    const double tau = problem.tau;
    const double alpha0 = detail::lower_quantile(problem.responses, tau);
    const Eigen::VectorXd r = problem.responses.array() - alpha0;
    const double tol = detail::elbow_tolerance(problem.responses);

    double best = 0.0;
    for (Eigen::Index k = 0; k < problem.p(); ++k) {
        double fixed = 0.0, hi = 0.0, lo = 0.0;
        for (Eigen::Index t = 0; t < n; ++t) {
            const double a = problem.design(t, k);
            if (r[t] > tol) {
                fixed += a * tau;
            } else if (r[t] < -tol) {
                fixed += a * (tau - 1.0);
            } else {
                hi += std::max(a * tau, a * (tau - 1.0));
                lo += std::min(a * tau, a * (tau - 1.0));
            }
        }
        const double bound = std::max(std::abs(fixed + hi), std::abs(fixed + lo)) /
                             static_cast<double>(n);
        best = std::max(best, bound);
    }
    return best;
}

/// GACV criterion: raw check-loss sum over (n - df). Interpolating fits
/// (df >= n) are rejected; select_lambda skips them.
inline double gacv(const LassoFit& fit, int n) {
    if (n <= 0 || fit.residuals.size() != n) {
        throw ArgumentError("gacv: n must match the fitted window length");
    }
    if (fit.df >= n) {
        throw DegenerateFitError("gacv: interpolating fit (df = " + std::to_string(fit.df) +
                                 " >= n = " + std::to_string(n) + ")");
    }
    double loss = 0.0;
    for (Eigen::Index t = 0; t < fit.residuals.size(); ++t) {
        loss += check_loss(fit.residuals[t], fit.tau);
    }
    return loss / static_cast<double>(n - fit.df);
}

/// Logarithmic grid of `points` values from 1e-4*lambda_max to lambda_max.
inline LambdaGrid make_lambda_grid(double lambda_max, int points = 50) {
    if (!(lambda_max > 0.0) || !std::isfinite(lambda_max)) {
        throw ArgumentError("make_lambda_grid: lambda_max must be positive and finite");
    }
    if (points < 1) throw ArgumentError("make_lambda_grid: need at least one grid point");
    LambdaGrid grid;
    grid.lambda_max = lambda_max;
    grid.values.resize(static_cast<std::size_t>(points));
    if (points == 1) {
        grid.values[0] = lambda_max;
        return grid;
    }
    const double lo = std::log(1e-4 * lambda_max);
    const double hi = std::log(lambda_max);
    for (int i = 0; i < points; ++i) {
        grid.values[static_cast<std::size_t>(i)] =
            std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1));
    }
    grid.values.back() = lambda_max;
    return grid;
}

struct LambdaSelection {
    double lambda_star = 0.0;
    LassoFit fit;
    double gacv_value = std::numeric_limits<double>::quiet_NaN();  // NaN when every fit interpolates
};

/// Minimize GACV over the grid; ties break toward the larger lambda.
/// Interpolating fits are skipped; when every grid point interpolates (e.g.
/// constant responses) the largest, most regularized lambda is returned.
inline LambdaSelection select_lambda(const QuantileProblem& problem, const LambdaGrid& grid) {
    problem.validate();
    grid.validate();
    const int n = static_cast<int>(problem.n());

    LambdaSelection best;
    bool have_best = false;
    LassoFit last_fit;
    for (double lambda : grid.values) {
        LassoFit fit = solve_qr_lasso(problem, lambda);
        last_fit = fit;
        if (fit.df >= n) continue;  // degenerate for GACV
        const double value = gacv(fit, n);
        if (!have_best || value <= best.gacv_value) {  // <= : larger lambda wins ties
            best.lambda_star = lambda;
            best.fit = std::move(fit);
            best.gacv_value = value;
            have_best = true;
        }
    }
    if (!have_best) {
        best.lambda_star = grid.values.back();
        best.fit = std::move(last_fit);
        best.gacv_value = std::numeric_limits<double>::quiet_NaN();
    }
    return best;
}

} // namespace frm
