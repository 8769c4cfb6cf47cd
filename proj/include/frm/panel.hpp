#pragma once

#include <Eigen/Dense>

#include <fstream>
#include <string>
#include <vector>

#include "frm/csv.hpp"
#include "frm/dates.hpp"
#include "frm/errors.hpp"

namespace frm {

/// Aligned date-indexed matrix of firm log returns plus macro state
/// variables. All entries finite; missing values are resolved upstream.
struct ReturnPanel {
    std::vector<Date> dates;            // strictly increasing, length T
    Eigen::MatrixXd firm_returns;       // T x k
    Eigen::MatrixXd macro;              // T x m
    std::vector<std::string> firm_ids;  // k labels
    std::vector<std::string> macro_ids; // m labels

    Eigen::Index T() const { return static_cast<Eigen::Index>(dates.size()); }
    Eigen::Index firms() const { return firm_returns.cols(); }
    Eigen::Index macros() const { return macro.cols(); }

    void validate() const {
        if (dates.empty()) throw InputError("ReturnPanel: empty panel");
        if (firm_returns.rows() != T() || (macro.size() > 0 && macro.rows() != T())) {
            throw InputError("ReturnPanel: row counts do not match the date index");
        }
        if (firms() < 2) {
            throw InputError("ReturnPanel: need at least 2 firms (each firm regresses on the others)");
        }
        if (firm_ids.size() != static_cast<std::size_t>(firms()) ||
            macro_ids.size() != static_cast<std::size_t>(macros())) {
            throw InputError("ReturnPanel: label counts do not match matrix shapes");
        }
        for (std::size_t i = 1; i < dates.size(); ++i) {
            if (!(dates[i - 1] < dates[i])) {
                throw InputError("ReturnPanel: dates must be strictly increasing (duplicate or "
                                 "unsorted at " + dates[i].to_string() + ")");
            }
        }
        if (!firm_returns.allFinite() || (macro.size() > 0 && !macro.allFinite())) {
            throw InputError("ReturnPanel: non-finite entries");
        }
    }
};

/// Structured diagnostic emitted by validate_panel.
struct PanelFinding {
    enum class Kind { NonFinite, ZeroVariance, DuplicateDate, ExtremeReturn };
    Kind kind;
    std::string message;
    Eigen::Index row = -1;  // -1 when not cell-specific
    std::string column;
};

/// Diagnostic sweep; an empty result means the panel is clean. Never throws.
inline std::vector<PanelFinding> validate_panel(const ReturnPanel& panel) {
    std::vector<PanelFinding> findings;
    const Eigen::Index t_count = panel.firm_returns.rows();

    for (std::size_t i = 1; i < panel.dates.size(); ++i) {
        if (!(panel.dates[i - 1] < panel.dates[i])) {
            findings.push_back({PanelFinding::Kind::DuplicateDate,
                                "duplicate or unsorted date " + panel.dates[i].to_string(),
                                static_cast<Eigen::Index>(i), "date"});
        }
    }

    auto sweep = [&](const Eigen::MatrixXd& mat, const std::vector<std::string>& labels,
                     bool check_extreme) {
        for (Eigen::Index c = 0; c < mat.cols(); ++c) {
            const auto& label = labels[static_cast<std::size_t>(c)];
            bool all_finite = true;
            for (Eigen::Index r = 0; r < mat.rows(); ++r) {
                if (!std::isfinite(mat(r, c))) {
                    findings.push_back({PanelFinding::Kind::NonFinite,
                                        "non-finite value in column " + label, r, label});
                    all_finite = false;
                } else if (check_extreme && std::abs(mat(r, c)) > 1.0) {
                    findings.push_back({PanelFinding::Kind::ExtremeReturn,
                                        "extreme return |r| > 1 in column " + label, r, label});
                }
            }
            if (all_finite && t_count > 1) {
                const double mean = mat.col(c).mean();
                if ((mat.col(c).array() - mean).abs().maxCoeff() == 0.0) {
                    findings.push_back({PanelFinding::Kind::ZeroVariance,
                                        "zero-variance column " + label, -1, label});
                }
            }
        }
    };
    sweep(panel.firm_returns, panel.firm_ids, true);
    sweep(panel.macro, panel.macro_ids, false);
    return findings;
}

/// Canonical panel serialization: one wide CSV, full double precision, with
/// a comment line recording the firm/macro split. Round-trips bit-exactly.
inline void save_panel_csv(const ReturnPanel& panel, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << "# panel firms=" << panel.firms() << " macros=" << panel.macros() << "\n";
    out << "date";
    for (const auto& id : panel.firm_ids) out << ',' << id;
    for (const auto& id : panel.macro_ids) out << ',' << id;
    out << "\n";
    for (Eigen::Index t = 0; t < panel.T(); ++t) {
        out << panel.dates[static_cast<std::size_t>(t)].to_string();
        for (Eigen::Index c = 0; c < panel.firms(); ++c) {
            out << ',' << csv::format_exact(panel.firm_returns(t, c));
        }
        for (Eigen::Index c = 0; c < panel.macros(); ++c) {
            out << ',' << csv::format_exact(panel.macro(t, c));
        }
        out << "\n";
    }
}

inline ReturnPanel load_panel_csv(const std::string& path) {
    const csv::Table table = csv::read_table(path);
    Eigen::Index firms = -1, macros = -1;
    for (const auto& comment : table.comments) {
        long f = 0, m = 0;
        if (std::sscanf(comment.c_str(), "# panel firms=%ld macros=%ld", &f, &m) == 2) {
            firms = f;
            macros = m;
        }
    }
    if (firms < 0) throw InputError("'" + path + "': missing '# panel firms=... macros=...' line");
    if (table.header.size() != static_cast<std::size_t>(1 + firms + macros)) {
        throw InputError("'" + path + "': header width disagrees with the panel comment");
    }

    ReturnPanel panel;
    const auto t_count = static_cast<Eigen::Index>(table.rows.size());
    panel.firm_returns.resize(t_count, firms);
    panel.macro.resize(t_count, macros);
    panel.firm_ids.assign(table.header.begin() + 1, table.header.begin() + 1 + firms);
    panel.macro_ids.assign(table.header.begin() + 1 + firms, table.header.end());
    panel.dates.reserve(static_cast<std::size_t>(t_count));
    for (Eigen::Index t = 0; t < t_count; ++t) {
        const auto& row = table.rows[static_cast<std::size_t>(t)];
        panel.dates.push_back(Date::parse(row[0]));
        for (Eigen::Index c = 0; c < firms; ++c) {
            panel.firm_returns(t, c) = csv::parse_double(row[static_cast<std::size_t>(1 + c)], path);
        }
        for (Eigen::Index c = 0; c < macros; ++c) {
            panel.macro(t, c) =
                csv::parse_double(row[static_cast<std::size_t>(1 + firms + c)], path);
        }
    }
    panel.validate();
    return panel;
}

} // namespace frm
