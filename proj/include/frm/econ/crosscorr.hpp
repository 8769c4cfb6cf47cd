#pragma once

#include <cmath>
#include <cstdlib>
#include <vector>

#include "frm/errors.hpp"

namespace frm::econ {

/// Degenerate-variance input to a correlation routine.
class DegenerateVarianceError : public Error {
public:
    using Error::Error;
};

/// Sample cross-correlation at lags -max_lag..max_lag. Sign convention:
/// lag l correlates x_t with y_{t+l}, so a positive argmax lag means x
/// leads y. Satisfies ccf_{x,y}(l) = ccf_{y,x}(-l) exactly.
inline std::vector<std::pair<int, double>> cross_correlation(const std::vector<double>& x,
                                                             const std::vector<double>& y,
                                                             int max_lag) {
    if (x.size() != y.size()) throw InputError("cross_correlation: series lengths differ");
    const auto n = static_cast<long>(x.size());
    if (max_lag < 0) throw ArgumentError("cross_correlation: max_lag must be nonnegative");
    if (n <= max_lag) throw InputError("cross_correlation: series shorter than max_lag");

    double mx = 0.0, my = 0.0;
    for (long t = 0; t < n; ++t) {
        mx += x[static_cast<std::size_t>(t)];
        my += y[static_cast<std::size_t>(t)];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sx = 0.0, sy = 0.0;
    for (long t = 0; t < n; ++t) {
        sx += (x[static_cast<std::size_t>(t)] - mx) * (x[static_cast<std::size_t>(t)] - mx);
        sy += (y[static_cast<std::size_t>(t)] - my) * (y[static_cast<std::size_t>(t)] - my);
    }
    if (sx == 0.0 || sy == 0.0) {
        throw DegenerateVarianceError("cross_correlation: constant input series");
    }
    const double denom = std::sqrt(sx) * std::sqrt(sy);

    std::vector<std::pair<int, double>> out;
    out.reserve(static_cast<std::size_t>(2 * max_lag + 1));
    for (int lag = -max_lag; lag <= max_lag; ++lag) {
        double sum = 0.0;
        const long lo = std::max(0L, static_cast<long>(-lag));
        const long hi = std::min(n - 1, n - 1 - static_cast<long>(lag));
        for (long t = lo; t <= hi; ++t) {
            sum += (x[static_cast<std::size_t>(t)] - mx) *
                   (y[static_cast<std::size_t>(t + lag)] - my);
        }
        out.emplace_back(lag, sum / denom);
    }
    return out;
}

} // namespace frm::econ
