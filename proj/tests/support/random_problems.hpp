#pragma once

#include <Eigen/Dense>
#include <random>

#include "frm/solver.hpp"

namespace frm_test {

/// Random dense instance; responses carry a planted linear signal so that
/// moderate penalties produce nontrivial supports.
inline frm::QuantileProblem random_problem(std::uint64_t seed, Eigen::Index n, Eigen::Index p,
                                           double tau) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    frm::QuantileProblem problem;
    problem.tau = tau;
    problem.design.resize(n, p);
    for (Eigen::Index t = 0; t < n; ++t) {
        for (Eigen::Index k = 0; k < p; ++k) problem.design(t, k) = normal(rng);
    }
    Eigen::VectorXd coef(p);
    for (Eigen::Index k = 0; k < p; ++k) coef[k] = (k % 2 == 0 ? 1.0 : -0.5);
    problem.responses.resize(n);
    for (Eigen::Index t = 0; t < n; ++t) {
        problem.responses[t] = problem.design.row(t).dot(coef) + 0.5 * normal(rng);
    }
    return problem;
}

} // namespace frm_test
