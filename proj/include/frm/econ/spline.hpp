#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "frm/dates.hpp"
#include "frm/errors.hpp"

namespace frm::econ {

/// Cubic interpolating spline with not-a-knot end conditions: passes through
/// every knot, C2 between knots, and reproduces cubic polynomials exactly
/// (natural end conditions would not).
class CubicSpline {
public:
    CubicSpline(std::vector<double> xs, std::vector<double> ys)
        : x_(std::move(xs)), y_(std::move(ys)) {
        const auto n = static_cast<long>(x_.size());
        if (n < 4) throw InputError("CubicSpline: need at least 4 knots");
        if (y_.size() != x_.size()) throw InputError("CubicSpline: knot arrays differ in length");
        for (long i = 1; i < n; ++i) {
            if (!(x_[static_cast<std::size_t>(i - 1)] < x_[static_cast<std::size_t>(i)])) {
                throw InputError("CubicSpline: knots must be strictly increasing");
            }
        }
        build();
    }

    double operator()(double x) const {
        if (x < x_.front() || x > x_.back()) {
            throw RangeError("CubicSpline: " + std::to_string(x) +
                             " outside the knot range [" + std::to_string(x_.front()) + ", " +
                             std::to_string(x_.back()) + "]");
        }
        // interval index: largest i with x_[i] <= x (last interval for x = max)
        const auto it = std::upper_bound(x_.begin(), x_.end(), x);
        auto i = static_cast<std::size_t>(std::max<long>(0, (it - x_.begin()) - 1));
        i = std::min(i, x_.size() - 2);
        const double h = x_[i + 1] - x_[i];
        const double a = x_[i + 1] - x;
        const double b = x - x_[i];
        return m_[i] * a * a * a / (6.0 * h) + m_[i + 1] * b * b * b / (6.0 * h) +
               (y_[i] / h - m_[i] * h / 6.0) * a + (y_[i + 1] / h - m_[i + 1] * h / 6.0) * b;
    }

private:
    // Solve for the knot second derivatives; the not-a-knot conditions are
    // folded into the first and last interior equations, leaving a
    // tridiagonal system solved by the Thomas algorithm.
    void build() {
        const std::size_t n = x_.size();
        std::vector<double> h(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) h[i] = x_[i + 1] - x_[i];

        const std::size_t rows = n - 2;  // unknowns m_1..m_{n-2}
        std::vector<double> sub(rows, 0.0), diag(rows, 0.0), sup(rows, 0.0), rhs(rows, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const std::size_t r = i - 1;
            sub[r] = h[i - 1];
            diag[r] = 2.0 * (h[i - 1] + h[i]);
            sup[r] = h[i];
            rhs[r] = 6.0 * ((y_[i + 1] - y_[i]) / h[i] - (y_[i] - y_[i - 1]) / h[i - 1]);
        }
        // not-a-knot: m_0 = (1 + h0/h1) m_1 - (h0/h1) m_2, mirrored at the end
        const double r0 = h[0] / h[1];
        diag[0] += h[0] * (1.0 + r0);
        sup[0] -= h[0] * r0;
        const double r1 = h[n - 2] / h[n - 3];
        diag[rows - 1] += h[n - 2] * (1.0 + r1);
        sub[rows - 1] -= h[n - 2] * r1;

        // Thomas sweep
        for (std::size_t r = 1; r < rows; ++r) {
            const double w = sub[r] / diag[r - 1];
            diag[r] -= w * sup[r - 1];
            rhs[r] -= w * rhs[r - 1];
        }
        std::vector<double> m(n, 0.0);
        m[n - 2] = rhs[rows - 1] / diag[rows - 1];
        for (long r = static_cast<long>(rows) - 2; r >= 0; --r) {
            const auto ur = static_cast<std::size_t>(r);
            m[ur + 1] = (rhs[ur] - sup[ur] * m[ur + 2]) / diag[ur];
        }
        m[0] = (1.0 + r0) * m[1] - r0 * m[2];
        m[n - 1] = (1.0 + r1) * m[n - 2] - r1 * m[n - 3];
        m_ = std::move(m);
    }

    std::vector<double> x_, y_;
    std::vector<double> m_;  // second derivatives at the knots
};

/// Estimate daily values from a coarser (e.g. weekly) date-indexed series.
inline std::vector<double> cubic_interpolate(const std::vector<std::pair<Date, double>>& knots,
                                             const std::vector<Date>& target_dates) {
    if (knots.size() < 4) throw InputError("cubic_interpolate: need at least 4 knots");
    std::vector<double> xs, ys;
    xs.reserve(knots.size());
    ys.reserve(knots.size());
    for (std::size_t i = 0; i < knots.size(); ++i) {
        if (i > 0 && !(knots[i - 1].first < knots[i].first)) {
            throw InputError("cubic_interpolate: duplicate or unsorted knot date " +
                             knots[i].first.to_string());
        }
        xs.push_back(static_cast<double>(knots[i].first.serial()));
        ys.push_back(knots[i].second);
    }
    // center at the first knot; raw date serials are large enough to cost digits
    const double origin = xs.front();
    for (double& x : xs) x -= origin;
    const CubicSpline spline(std::move(xs), std::move(ys));
    std::vector<double> out;
    out.reserve(target_dates.size());
    for (const Date& date : target_dates) {
        if (date < knots.front().first || knots.back().first < date) {
            throw RangeError("cubic_interpolate: target date " + date.to_string() +
                             " outside the knot range");
        }
        const auto hit = std::lower_bound(
            knots.begin(), knots.end(), date,
            [](const std::pair<Date, double>& knot, const Date& d) { return knot.first < d; });
        if (hit != knots.end() && hit->first == date) {
            out.push_back(hit->second);  // knot dates reproduce the knot value exactly
        } else {
            out.push_back(spline(static_cast<double>(date.serial()) - origin));
        }
    }
    return out;
}

} // namespace frm::econ
