#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "frm/csv.hpp"
#include "frm/dates.hpp"
#include "frm/errors.hpp"
#include "frm/panel.hpp"

namespace frm {

enum class MacroTransform { Level, FirstDifference, LogReturn };

inline MacroTransform parse_macro_transform(const std::string& tag) {
    if (tag == "level") return MacroTransform::Level;
    if (tag == "first_difference") return MacroTransform::FirstDifference;
    if (tag == "log_return") return MacroTransform::LogReturn;
    throw InputError("unknown macro transform '" + tag +
                     "' (expected level, first_difference or log_return)");
}

inline const char* to_string(MacroTransform t) {
    switch (t) {
        case MacroTransform::Level: return "level";
        case MacroTransform::FirstDifference: return "first_difference";
        case MacroTransform::LogReturn: return "log_return";
    }
    return "?";
}

/// Per-column transformation tags for the macro table; every macro column
/// must carry exactly one tag.
struct MacroSpec {
    std::vector<std::pair<std::string, MacroTransform>> columns;

    MacroTransform transform_for(const std::string& label) const {
        for (const auto& [name, t] : columns) {
            if (name == label) return t;
        }
        throw InputError("MacroSpec: no transform for macro column '" + label + "'");
    }

    static MacroSpec all_levels(const std::vector<std::string>& labels) {
        MacroSpec spec;
        for (const auto& l : labels) spec.columns.emplace_back(l, MacroTransform::Level);
        return spec;
    }
};

struct IngestOptions {
    double max_missing_fraction = 0.05;     // per-ticker interior gap budget
    std::vector<std::string>* warnings = nullptr;
};

namespace detail {

struct QuoteSeries {
    std::map<Date, double> prices;
    Date first, last;
};

inline void warn(const IngestOptions& options, const std::string& message) {
    if (options.warnings) options.warnings->push_back(message);
}

} // namespace detail

/// Read the long-format price table (date,ticker,adj_close) and the
/// wide-format macro table, compute log returns and macro transformations,
/// align dates and produce a validated panel.
///
/// Alignment: interior gaps in a ticker's history are forward-filled when
/// they stay under the missing-fraction budget; dates outside a ticker's
/// first/last quote, or absent from the macro table, are dropped by
/// intersection. The first aligned date is consumed by differencing.
inline ReturnPanel load_panel(const std::string& price_csv, const std::string& macro_csv,
                              const MacroSpec& spec, const IngestOptions& options = {}) {
    const csv::Table prices = csv::read_table(price_csv);
    if (prices.header.size() != 3 || prices.header[0] != "date" ||
        prices.header[1] != "ticker" || prices.header[2] != "adj_close") {
        throw InputError("'" + price_csv + "': expected header date,ticker,adj_close");
    }

    std::map<std::string, detail::QuoteSeries> quotes;
    std::vector<std::string> ticker_order;  // first appearance defines panel order
    std::set<Date> calendar;
    for (std::size_t row = 0; row < prices.rows.size(); ++row) {
        const auto& fields = prices.rows[row];
        const std::string line_ref = price_csv + " line " + std::to_string(row + 2);
        Date date;
        try {
            date = Date::parse(fields[0]);
        } catch (const InputError& e) {
            throw InputError(line_ref + ": " + e.what());
        }
        const std::string& ticker = fields[1];
        const double price = csv::parse_double(fields[2], line_ref);
        if (!(price > 0.0) || !std::isfinite(price)) {
            throw InputError(line_ref + ": non-positive price " + fields[2] + " for " + ticker);
        }
        auto [it, inserted] = quotes.try_emplace(ticker);
        if (inserted) ticker_order.push_back(ticker);
        if (!it->second.prices.emplace(date, price).second) {
            throw InputError(line_ref + ": duplicate (date, ticker) entry " + fields[0] + ", " +
                             ticker);
        }
        calendar.insert(date);
    }
    if (quotes.size() < 2) {
        throw InputError("'" + price_csv + "': need at least 2 tickers, found " +
                         std::to_string(quotes.size()));
    }

    const std::vector<Date> all_dates(calendar.begin(), calendar.end());
    for (auto& [ticker, series] : quotes) {
        series.first = series.prices.begin()->first;
        series.last = series.prices.rbegin()->first;
        // forward-fill interior gaps under the budget
        std::size_t gaps = 0;
        double carry = 0.0;
        bool started = false;
        for (const Date& d : all_dates) {
            if (d < series.first || series.last < d) continue;
            const auto it = series.prices.find(d);
            if (it != series.prices.end()) {
                carry = it->second;
                started = true;
            } else if (started) {
                ++gaps;
                series.prices.emplace(d, carry);
            }
        }
        const double fraction = static_cast<double>(gaps) / static_cast<double>(all_dates.size());
        if (fraction > options.max_missing_fraction) {
            throw InputError("'" + price_csv + "': ticker " + ticker + " missing " +
                             std::to_string(gaps) + " of " + std::to_string(all_dates.size()) +
                             " dates, above the " +
                             std::to_string(options.max_missing_fraction) + " budget");
        }
        if (gaps > 0) {
            detail::warn(options, "forward-filled " + std::to_string(gaps) +
                                      " missing price(s) for " + ticker);
        }
    }

    // macro table
    std::vector<std::string> macro_labels;
    std::map<Date, std::vector<double>> macro_rows;
    if (!macro_csv.empty()) {
        const csv::Table macro = csv::read_table(macro_csv);
        if (macro.header.empty() || macro.header[0] != "date") {
            throw InputError("'" + macro_csv + "': expected header date,<macro columns>");
        }
        macro_labels.assign(macro.header.begin() + 1, macro.header.end());
        for (const auto& label : macro_labels) spec.transform_for(label);  // validates tags
        for (std::size_t row = 0; row < macro.rows.size(); ++row) {
            const auto& fields = macro.rows[row];
            const std::string line_ref = macro_csv + " line " + std::to_string(row + 2);
            Date date;
            try {
                date = Date::parse(fields[0]);
            } catch (const InputError& e) {
                throw InputError(line_ref + ": " + e.what());
            }
            std::vector<double> values;
            values.reserve(macro_labels.size());
            for (std::size_t c = 1; c < fields.size(); ++c) {
                values.push_back(csv::parse_double(fields[c], line_ref));
            }
            if (!macro_rows.emplace(date, std::move(values)).second) {
                throw InputError(line_ref + ": duplicate macro date " + fields[0]);
            }
        }
    }

    // aligned calendar: intersection of every ticker's covered range and the macro dates
    std::vector<Date> aligned;
    for (const Date& d : all_dates) {
        bool keep = true;
        for (const auto& [ticker, series] : quotes) {
            if (d < series.first || series.last < d) {
                keep = false;
                break;
            }
        }
        if (keep && !macro_csv.empty() && macro_rows.find(d) == macro_rows.end()) keep = false;
        if (keep) aligned.push_back(d);
    }
    if (aligned.size() < 2) {
        throw InputError("alignment left " + std::to_string(aligned.size()) +
                         " common dates; need at least 2");
    }

    ReturnPanel panel;
    const auto t_count = static_cast<Eigen::Index>(aligned.size()) - 1;  // differencing row
    const auto k = static_cast<Eigen::Index>(ticker_order.size());
    const auto m = static_cast<Eigen::Index>(macro_labels.size());
    panel.dates.assign(aligned.begin() + 1, aligned.end());
    panel.firm_ids = ticker_order;
    panel.macro_ids = macro_labels;
    panel.firm_returns.resize(t_count, k);
    panel.macro.resize(t_count, m);

    for (Eigen::Index j = 0; j < k; ++j) {
        const auto& series = quotes.at(ticker_order[static_cast<std::size_t>(j)]);
        for (Eigen::Index t = 0; t < t_count; ++t) {
            const double prev = series.prices.at(aligned[static_cast<std::size_t>(t)]);
            const double cur = series.prices.at(aligned[static_cast<std::size_t>(t + 1)]);
            panel.firm_returns(t, j) = std::log(cur / prev);
        }
    }
    for (Eigen::Index c = 0; c < m; ++c) {
        const auto& label = macro_labels[static_cast<std::size_t>(c)];
        const MacroTransform transform = spec.transform_for(label);
        for (Eigen::Index t = 0; t < t_count; ++t) {
            const double prev = macro_rows.at(aligned[static_cast<std::size_t>(t)])
                                    .at(static_cast<std::size_t>(c));
            const double cur = macro_rows.at(aligned[static_cast<std::size_t>(t + 1)])
                                   .at(static_cast<std::size_t>(c));
            switch (transform) {
                case MacroTransform::Level:
                    panel.macro(t, c) = cur;
                    break;
                case MacroTransform::FirstDifference:
                    panel.macro(t, c) = cur - prev;
                    break;
                case MacroTransform::LogReturn:
                    if (!(prev > 0.0) || !(cur > 0.0)) {
                        throw InputError("macro column " + label +
                                         ": log_return needs positive values");
                    }
                    panel.macro(t, c) = std::log(cur / prev);
                    break;
            }
        }
    }
    panel.validate();
    return panel;
}

} // namespace frm
