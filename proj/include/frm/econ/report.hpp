#pragma once

#include <string>

#include <json.hpp>

namespace frm::econ {

/// Statistic / p-value / decision record of one hypothesis test.
struct TestReport {
    std::string name;
    double statistic = 0.0;
    double p_value = 1.0;
    std::string dof;
    bool reject_at_5pct = false;
    std::string details;
    bool p_value_clamped = false;  // hit a tabulated-distribution edge
};

inline nlohmann::json to_json(const TestReport& report) {
    return nlohmann::json{
        {"name", report.name},
        {"statistic", report.statistic},
        {"p_value", report.p_value},
        {"dof", report.dof},
        {"decision", report.reject_at_5pct ? "reject" : "fail-to-reject"},
        {"details",
         report.p_value_clamped ? report.details + " [p-value clamped at table edge]"
                                : report.details},
    };
}

} // namespace frm::econ
