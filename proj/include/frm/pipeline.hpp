#pragma once

#include <Eigen/Dense>

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "frm/csv.hpp"
#include "frm/panel.hpp"
#include "frm/solver.hpp"

namespace frm {

/// One (firm, window) regression cell. start_index is the 0-based panel row
/// of the first window observation; when macro variables are present the
/// first panel date cannot start a window because of the one-day macro lag.
struct WindowTask {
    Eigen::Index firm = 0;
    Eigen::Index start_index = 0;
    Eigen::Index window_size = 0;

    void validate(const ReturnPanel& panel) const {
        if (firm < 0 || firm >= panel.firms()) throw RangeError("WindowTask: firm out of range");
        if (window_size < 2) throw ArgumentError("WindowTask: window_size must be at least 2");
        const Eigen::Index first = panel.macros() > 0 ? 1 : 0;
        if (start_index < first || start_index + window_size > panel.T()) {
            throw RangeError("WindowTask: window [" + std::to_string(start_index) + ", " +
                             std::to_string(start_index + window_size) +
                             ") exceeds the panel bounds");
        }
    }
};

/// Assemble the regression problem of one cell: response is the firm's
/// return over the window; covariates are the one-day-lagged macro columns
/// followed by the other firms' contemporaneous returns in panel order.
inline QuantileProblem build_problem(const ReturnPanel& panel, const WindowTask& task,
                                     double tau) {
    task.validate(panel);
    const Eigen::Index n = task.window_size;
    const Eigen::Index m = panel.macros();
    const Eigen::Index k = panel.firms();

    QuantileProblem problem;
    problem.tau = tau;
    problem.window_id = static_cast<int>(task.start_index);
    problem.firm_id = static_cast<int>(task.firm);
    problem.responses = panel.firm_returns.col(task.firm).segment(task.start_index, n);
    problem.design.resize(n, m + k - 1);
    if (m > 0) {
        problem.design.leftCols(m) = panel.macro.middleRows(task.start_index - 1, n);
    }
    Eigen::Index col = m;
    for (Eigen::Index j = 0; j < k; ++j) {
        if (j == task.firm) continue;
        problem.design.col(col++) = panel.firm_returns.col(j).segment(task.start_index, n);
    }
    return problem;
}

/// Date-indexed matrix of selected penalization parameters and their
/// cross-firm average, the risk index itself.
struct FrmSeries {
    std::vector<Date> dates;            // window-end dates
    Eigen::MatrixXd lambda_matrix;      // windows x firms; NaN marks a skipped failure
    Eigen::VectorXd frm;                // cross-firm mean per window
    std::vector<std::string> firm_ids;
    double tau = 0.05;
    int window_size = 63;
    std::vector<int> failures_per_window;  // all zero unless failures were skipped

    Eigen::Index windows() const { return lambda_matrix.rows(); }
};

/// Progress record for one solved cell, delivered through the event sink.
struct CellEvent {
    Eigen::Index window = 0;
    Eigen::Index firm = 0;
    Date date;
    double lambda_star = 0.0;
    bool success = true;
    double millis = 0.0;
    std::string message;
};

struct GridSettings {
    double tau = 0.05;
    int window_size = 63;
    int workers = 1;
    int grid_points = 50;
    bool skip_failures = false;
    std::function<void(const CellEvent&)> event_sink;  // optional, called under a lock
};

/// Run the full firm x window task grid and aggregate the FRM series.
/// The output is identical for any worker count: each cell is a pure
/// function of its inputs and results are stored by cell index.
inline FrmSeries run_grid(const ReturnPanel& panel, const GridSettings& settings) {
    panel.validate();
    if (settings.window_size < 2) throw ArgumentError("run_grid: window_size must be at least 2");
    if (settings.workers < 1) throw ArgumentError("run_grid: need at least one worker");
    if (settings.grid_points < 1) throw ArgumentError("run_grid: need at least one grid point");

    const Eigen::Index n = settings.window_size;
    const Eigen::Index k = panel.firms();
    const Eigen::Index first_start = panel.macros() > 0 ? 1 : 0;
    const Eigen::Index window_count = panel.T() - n + 1 - first_start;
    if (window_count < 1) {
        throw InputError("run_grid: panel has " + std::to_string(panel.T()) +
                         " dates, too short for window size " + std::to_string(n));
    }

    FrmSeries series;
    series.tau = settings.tau;
    series.window_size = static_cast<int>(n);
    series.firm_ids = panel.firm_ids;
    series.dates.resize(static_cast<std::size_t>(window_count));
    for (Eigen::Index w = 0; w < window_count; ++w) {
        series.dates[static_cast<std::size_t>(w)] =
            panel.dates[static_cast<std::size_t>(first_start + w + n - 1)];
    }
    series.lambda_matrix.setConstant(window_count, k, std::numeric_limits<double>::quiet_NaN());
    series.failures_per_window.assign(static_cast<std::size_t>(window_count), 0);

    struct Failure {
        Eigen::Index window, firm;
        std::string message;
    };
    std::vector<Failure> failures;
    std::mutex sink_mutex;
    std::atomic<Eigen::Index> next{0};
    const Eigen::Index cells = window_count * k;

    auto worker = [&]() {
        while (true) {
            const Eigen::Index cell = next.fetch_add(1);
            if (cell >= cells) break;
            const Eigen::Index w = cell / k;
            const Eigen::Index j = cell % k;
            const WindowTask task{j, first_start + w, n};
            const auto t0 = std::chrono::steady_clock::now();
            CellEvent event;
            event.window = w;
            event.firm = j;
            event.date = series.dates[static_cast<std::size_t>(w)];
            try {
                const QuantileProblem problem = build_problem(panel, task, settings.tau);
                const double lmax = compute_lambda_max(problem);
                const LambdaGrid grid = make_lambda_grid(lmax, settings.grid_points);
                const LambdaSelection pick = select_lambda(problem, grid);
                series.lambda_matrix(w, j) = pick.lambda_star;
                event.lambda_star = pick.lambda_star;
            } catch (const std::exception& e) {
                event.success = false;
                event.message = e.what();
            }
            event.millis = std::chrono::duration<double, std::milli>(
                               std::chrono::steady_clock::now() - t0)
                               .count();
            if (!event.success || settings.event_sink) {
                const std::lock_guard<std::mutex> lock(sink_mutex);
                if (!event.success) failures.push_back({w, j, event.message});
                if (settings.event_sink) settings.event_sink(event);
            }
        }
    };

    const auto thread_count =
        static_cast<std::size_t>(std::min<Eigen::Index>(settings.workers, cells));
    std::vector<std::thread> threads;
    threads.reserve(thread_count);
    for (std::size_t i = 0; i < thread_count; ++i) threads.emplace_back(worker);
    for (auto& t : threads) t.join();

    if (!failures.empty() && !settings.skip_failures) {
        const auto& f = failures.front();
        throw SolverError("run_grid: " + std::to_string(failures.size()) +
                              " cell(s) failed; first failure at (firm " +
                              panel.firm_ids[static_cast<std::size_t>(f.firm)] + ", window " +
                              std::to_string(f.window) + "): " + f.message,
                          0, 0.0);
    }
    for (const auto& f : failures) {
        ++series.failures_per_window[static_cast<std::size_t>(f.window)];
    }

    series.frm.resize(window_count);
    for (Eigen::Index w = 0; w < window_count; ++w) {
        double sum = 0.0;
        Eigen::Index count = 0;
        for (Eigen::Index j = 0; j < k; ++j) {
            const double value = series.lambda_matrix(w, j);
            if (std::isnan(value)) continue;
            sum += value;
            ++count;
        }
        if (count == 0) {
            throw InputError("run_grid: every firm failed in window " + std::to_string(w));
        }
        series.frm[w] = sum / static_cast<double>(count);
    }
    return series;
}

/// Single-firm lambda path with dates.
inline std::vector<std::pair<Date, double>> lambda_series(const FrmSeries& series,
                                                          const std::string& firm_id) {
    const auto it = std::find(series.firm_ids.begin(), series.firm_ids.end(), firm_id);
    if (it == series.firm_ids.end()) {
        throw LookupError("lambda_series: unknown firm '" + firm_id + "'");
    }
    const auto j = static_cast<Eigen::Index>(it - series.firm_ids.begin());
    std::vector<std::pair<Date, double>> out;
    out.reserve(series.dates.size());
    for (Eigen::Index w = 0; w < series.windows(); ++w) {
        out.emplace_back(series.dates[static_cast<std::size_t>(w)], series.lambda_matrix(w, j));
    }
    return out;
}

inline void save_frm_csv(const FrmSeries& series, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << "date,frm\n";
    for (Eigen::Index w = 0; w < series.windows(); ++w) {
        out << series.dates[static_cast<std::size_t>(w)].to_string() << ','
            << csv::format_value(series.frm[w]) << "\n";
    }
}

/// Rehydrate a series from the frm_series.csv artifact (date,frm). The
/// lambda matrix is empty: per-firm paths are not part of that artifact.
inline FrmSeries load_frm_csv(const std::string& path) {
    const auto rows = csv::read_series(path);
    if (rows.empty()) throw InputError("'" + path + "': empty series");
    FrmSeries series;
    series.frm.resize(static_cast<Eigen::Index>(rows.size()));
    series.lambda_matrix.resize(static_cast<Eigen::Index>(rows.size()), 0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        series.dates.push_back(rows[i].first);
        series.frm[static_cast<Eigen::Index>(i)] = rows[i].second;
    }
    return series;
}

inline void save_lambda_matrix_csv(const FrmSeries& series, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << "date";
    for (const auto& id : series.firm_ids) out << ',' << id;
    out << "\n";
    for (Eigen::Index w = 0; w < series.windows(); ++w) {
        out << series.dates[static_cast<std::size_t>(w)].to_string();
        for (Eigen::Index j = 0; j < series.lambda_matrix.cols(); ++j) {
            out << ',' << csv::format_value(series.lambda_matrix(w, j));
        }
        out << "\n";
    }
}

} // namespace frm
