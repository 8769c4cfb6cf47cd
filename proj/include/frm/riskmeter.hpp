#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "frm/dates.hpp"
#include "frm/errors.hpp"
#include "frm/pipeline.hpp"

namespace frm {

/// Five-level classification keyed to the homeland-security color scheme.
enum class RiskLevel { Green, Blue, Yellow, Orange, Red };

inline const char* to_string(RiskLevel level) {
    switch (level) {
        case RiskLevel::Green: return "Green";
        case RiskLevel::Blue: return "Blue";
        case RiskLevel::Yellow: return "Yellow";
        case RiskLevel::Orange: return "Orange";
        case RiskLevel::Red: return "Red";
    }
    return "?";
}

inline const char* level_description(RiskLevel level) {
    switch (level) {
        case RiskLevel::Green: return "Low risk of crisis in the financial market.";
        case RiskLevel::Blue: return "General risk of crisis in the financial market.";
        case RiskLevel::Yellow: return "Elevated risk of crisis in the financial market.";
        case RiskLevel::Orange: return "High risk of crisis in the financial market.";
        case RiskLevel::Red: return "Severe risk of a crisis in the financial market.";
    }
    return "?";
}

/// Map a ratio (percent of the running maximum) to its level. Intervals are
/// closed on the left so every ratio lands in exactly one level and 100%
/// is Red: [0,20) [20,40) [40,60) [60,80) [80,100].
inline RiskLevel classify(double ratio_percent) {
    if (!(ratio_percent >= 0.0 && ratio_percent <= 100.0)) {
        throw ArgumentError("classify: ratio must lie in [0, 100], got " +
                            std::to_string(ratio_percent));
    }
    if (ratio_percent < 20.0) return RiskLevel::Green;
    if (ratio_percent < 40.0) return RiskLevel::Blue;
    if (ratio_percent < 60.0) return RiskLevel::Yellow;
    if (ratio_percent < 80.0) return RiskLevel::Orange;
    return RiskLevel::Red;
}

/// One day's risk reading: the index value against its running maximum.
struct RiskAssessment {
    Date date;
    double frm_value = 0.0;
    double historical_max = 0.0;  // includes the current observation
    double ratio_percent = 0.0;
    RiskLevel level = RiskLevel::Green;
};

/// Assess the series at a date: ratio of the value to the maximum of all
/// observations up to and including that date.
inline RiskAssessment assess(const FrmSeries& series, Date date) {
    double running_max = 0.0;
    for (Eigen::Index w = 0; w < series.windows(); ++w) {
        running_max = std::max(running_max, series.frm[w]);
        if (series.dates[static_cast<std::size_t>(w)] == date) {
            RiskAssessment out;
            out.date = date;
            out.frm_value = series.frm[w];
            out.historical_max = running_max;
            out.ratio_percent = 100.0 * out.frm_value / out.historical_max;
            out.level = classify(out.ratio_percent);
            return out;
        }
    }
    throw LookupError("assess: date " + date.to_string() + " not present in the series");
}

/// Affine [0,1] rescaling used when plotting against other risk series.
inline std::vector<double> scale_unit(const std::vector<double>& series) {
    if (series.size() < 2) {
        throw DegenerateScaleError("scale_unit: need at least two values");
    }
    const auto [lo_it, hi_it] = std::minmax_element(series.begin(), series.end());
    const double lo = *lo_it, hi = *hi_it;
    if (!(hi > lo)) {
        throw DegenerateScaleError("scale_unit: constant series cannot be scaled");
    }
    std::vector<double> out;
    out.reserve(series.size());
    for (double x : series) out.push_back((x - lo) / (hi - lo));
    return out;
}

struct Descriptives {
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    Date argmin_date;
    Date argmax_date;
};

/// Extremes and mean of the index, ties broken to the earliest date.
inline Descriptives descriptives(const FrmSeries& series) {
    if (series.windows() == 0) throw InputError("descriptives: empty series");
    Descriptives out;
    out.min = out.max = series.frm[0];
    out.argmin_date = out.argmax_date = series.dates[0];
    double sum = 0.0;
    for (Eigen::Index w = 0; w < series.windows(); ++w) {
        const double value = series.frm[w];
        sum += value;
        if (value < out.min) {
            out.min = value;
            out.argmin_date = series.dates[static_cast<std::size_t>(w)];
        }
        if (value > out.max) {
            out.max = value;
            out.argmax_date = series.dates[static_cast<std::size_t>(w)];
        }
    }
    out.mean = sum / static_cast<double>(series.windows());
    return out;
}

} // namespace frm
